'''
Module with entanglement and state comparison measures

Logarithmic negativity uses log base 2, entropies use the natural log
'''
import math
from dataclasses import dataclass

import numpy
import scipy.linalg as sla

from dmu.logging.log_store    import LogStore
from qqa.linalg.operators     import partial_transpose, IndexOutOfRange, DimensionMismatch
from qqa.linalg.quantum_state import QuantumState
from qqa.encoding.encoding_map import EncodingMap
from qqa.bosonic.models       import site_number_operators
from qqa.qaoa.ansatz          import energy

log = LogStore.add_logger('qqa:qaoa:metrics')

EIGEN_FLOOR = 1e-12
CLIP_TOL    = 1e-10
# ----------------------------------------
@dataclass(frozen=True)
class Bipartition:
    '''
    Cut between the first_j_qubits most significant qubits and the rest
    '''
    first_j_qubits : int
    total_qubits   : int
    # ----------------------------------
    def __post_init__(self):
        if not 1 <= self.first_j_qubits <= self.total_qubits - 1:
            raise IndexOutOfRange(f'Cut j={self.first_j_qubits} not in [1, {self.total_qubits - 1}]')
    # ----------------------------------
    def __str__(self) -> str:
        return f'{2 ** self.first_j_qubits}|{2 ** (self.total_qubits - self.first_j_qubits)}'
# ----------------------------------------
def _eigvals(rho : QuantumState) -> numpy.ndarray:
    rho = rho.to_density()

    return sla.eigvalsh(rho.data)
# ----------------------------------------
def _clipped_eig(rho : QuantumState) -> tuple[numpy.ndarray, numpy.ndarray]:
    data             = rho.to_density().data
    arr_val, arr_vec = sla.eigh(data)
    if arr_val.min() < -CLIP_TOL:
        raise ValueError(f'Density matrix has eigenvalue {arr_val.min():.3e}')

    return numpy.clip(arr_val, 0, None), arr_vec
# ----------------------------------------
def log_negativity(rho : QuantumState, cut : Bipartition) -> float:
    '''
    log2 of the trace norm of the partial transpose on the leading qubits
    '''
    if cut.total_qubits != rho.num_qubits:
        raise DimensionMismatch(f'Cut over {cut.total_qubits} qubits used on {rho.num_qubits} qubit state')

    mat   = partial_transpose(rho, cut.first_j_qubits)
    mat   = (mat + mat.conj().T) / 2
    norm  = numpy.sum(numpy.abs(sla.eigvalsh(mat)))
    value = math.log2(norm)

    return 0.0 if abs(value) <= CLIP_TOL else value
# ----------------------------------------
def von_neumann_entropy(rho : QuantumState) -> float:
    '''
    -Tr rho ln rho
    '''
    if rho.is_pure:
        return 0.0

    arr_val = _eigvals(rho)
    arr_val = arr_val[arr_val > EIGEN_FLOOR]

    return float(max(0.0, -numpy.sum(arr_val * numpy.log(arr_val))))
# ----------------------------------------
def relative_entropy(rho_1 : QuantumState, rho_2 : QuantumState) -> float:
    '''
    Tr rho_1 ln rho_1 - Tr rho_1 ln rho_2, infinity when rho_1 has weight outside the support of rho_2
    '''
    if rho_1.dim != rho_2.dim:
        raise DimensionMismatch(f'States of dimensions {rho_1.dim} and {rho_2.dim}')

    mat_1            = rho_1.to_density().data
    arr_val, arr_vec = sla.eigh(rho_2.to_density().data)

    # Weight of rho_1 on the kernel of rho_2
    l_null = arr_val <= EIGEN_FLOOR
    rot    = arr_vec.conj().T @ mat_1 @ arr_vec
    leak   = float(numpy.sum(numpy.diag(rot)[l_null].real))
    if leak > EIGEN_FLOOR:
        log.warning(f'First state has weight {leak:.3e} outside of the support of the second')
        return math.inf

    arr_log   = numpy.log(numpy.clip(arr_val, EIGEN_FLOOR, None))
    cross     = float(numpy.sum(numpy.diag(rot).real[~l_null] * arr_log[~l_null]))
    value     = -von_neumann_entropy(rho_1) - cross

    return max(value, 0.0) if value > -CLIP_TOL else value
# ----------------------------------------
def fidelity(rho : QuantumState, sigma : QuantumState) -> float:
    '''
    (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, squared overlap for pure states
    '''
    if rho.dim != sigma.dim:
        raise DimensionMismatch(f'States of dimensions {rho.dim} and {sigma.dim}')

    if rho.is_pure and sigma.is_pure:
        return float(abs(numpy.vdot(rho.data, sigma.data)) ** 2)

    if rho.is_pure or sigma.is_pure:
        vec, mat = (rho.data, sigma) if rho.is_pure else (sigma.data, rho)
        val      = numpy.vdot(vec, mat.to_density().data @ vec).real

        return float(min(max(val, 0.0), 1.0))

    arr_val, arr_vec = _clipped_eig(rho)
    sqrt_rho         = (arr_vec * numpy.sqrt(arr_val)) @ arr_vec.conj().T
    inner            = sqrt_rho @ sigma.data @ sqrt_rho
    inner            = (inner + inner.conj().T) / 2
    arr_inn          = numpy.clip(sla.eigvalsh(inner), 0, None)

    return float(numpy.sum(numpy.sqrt(arr_inn)) ** 2)
# ----------------------------------------
def trace_distance(rho : QuantumState, sigma : QuantumState) -> float:
    '''
    Half of the trace norm of rho - sigma
    '''
    if rho.dim != sigma.dim:
        raise DimensionMismatch(f'States of dimensions {rho.dim} and {sigma.dim}')

    diff = rho.to_density().data - sigma.to_density().data

    return float(numpy.sum(numpy.abs(sla.eigvalsh(diff))) / 2)
# ----------------------------------------
def mean_occupations(state : QuantumState, l_map : list[EncodingMap]) -> numpy.ndarray:
    '''
    Expectation value of the encoded number operator of each site, site 1 first
    '''
    nqubit = sum(emap.num_qubits for emap in l_map)
    if nqubit != state.num_qubits:
        raise DimensionMismatch(f'Encodings need {nqubit} qubits, state has {state.num_qubits}')

    l_num = site_number_operators(l_map)

    return numpy.array([energy(state, op_n) for op_n in l_num])
# ----------------------------------------
