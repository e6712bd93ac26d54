'''
Module with the coupled harmonic oscillator and Bose-Hubbard Hamiltonians

Site (mode) 1 sits on the least significant block, i.e. the right-most Kronecker
factor, both in the qudit product basis (index d_1 + D d_2 + ...) and in the
multi-qubit register.
'''
import math
from dataclasses import dataclass

import numpy

from dmu.logging.log_store     import LogStore
from qqa.linalg.operators      import kron, herm_eig, check_hermitian, DimensionMismatch
from qqa.linalg.quantum_state  import QuantumState
from qqa.encoding.encoding_map import EncodingMap, map_operator
from qqa.bosonic.fock          import TruncatedMode

log = LogStore.add_logger('qqa:bosonic:models')

MAX_QUBITS      = 12
ROOT_GAP_TOL    = 1e-9
# ----------------------------------------
class DegenerateCubic(ValueError):
    '''
    Raised when the cubic giving the two boson eigenstates has (nearly) repeated roots
    '''
    def __init__(self, message='Cubic has repeated roots'):
        self.message = message
        super().__init__(self.message)
# ----------------------------------------
class MemoryLimit(MemoryError):
    '''
    Raised when a model would need more qubits than allowed
    '''
    def __init__(self, message=f'Register larger than {MAX_QUBITS} qubits'):
        self.message = message
        super().__init__(self.message)
# ----------------------------------------
@dataclass(frozen=True)
class CHOParams:
    '''
    Two coupled oscillators, omega1 n1 + omega2 n2 + coupling (a2 a1^dagger + h.c.)
    '''
    omega1    : float
    omega2    : float
    coupling  : float
    cutoff_nc : int = 2
    # ----------------------------------
    def __post_init__(self):
        if self.cutoff_nc < 1:
            raise ValueError(f'Cutoff must be at least 1, found {self.cutoff_nc}')
# ----------------------------------------
@dataclass(frozen=True)
class BHParams:
    '''
    Open Bose-Hubbard chain
    '''
    sites_l   : int
    hop_j     : float
    onsite_u  : float
    chem_mu   : float
    cutoff_nc : int = 2
    # ----------------------------------
    def __post_init__(self):
        if self.sites_l < 1:
            raise ValueError(f'Need at least one site, found {self.sites_l}')

        if self.cutoff_nc < 1:
            raise ValueError(f'Cutoff must be at least 1, found {self.cutoff_nc}')
# ----------------------------------------
@dataclass(frozen=True)
class GroundState:
    '''
    Lowest eigenpair
    '''
    energy : float
    state  : QuantumState
# ----------------------------------------
@dataclass(frozen=True)
class _SiteOps:
    lowering : numpy.ndarray
    raising  : numpy.ndarray
    number   : numpy.ndarray
    ident    : numpy.ndarray
# ----------------------------------------
def _site_ops(cutoff_nc : int, emap : EncodingMap | None) -> _SiteOps:
    mode = TruncatedMode.from_cutoff(cutoff_nc)
    if emap is None:
        return _SiteOps(mode.lowering, mode.raising, mode.number, numpy.eye(mode.dim_d, dtype=complex))

    if emap.dim_d != mode.dim_d:
        raise DimensionMismatch(f'Encoding for D={emap.dim_d} cannot hold cutoff {cutoff_nc}')

    return _SiteOps(
            lowering = map_operator(mode.lowering, emap),
            raising  = map_operator(mode.raising , emap),
            number   = map_operator(mode.number  , emap),
            ident    = numpy.eye(2 ** emap.num_qubits, dtype=complex))
# ----------------------------------------
def _on_sites(d_op : dict[int, numpy.ndarray], ops : _SiteOps, nsite : int) -> numpy.ndarray:
    '''
    Product of operators placed on the sites in d_op, identity elsewhere
    '''
    l_fac = [d_op.get(site, ops.ident) for site in reversed(range(nsite))]

    return kron(*l_fac)
# ----------------------------------------
def _check_size(emap : EncodingMap | None, nsite : int) -> None:
    if emap is None:
        return

    nqubit = nsite * emap.num_qubits
    if nqubit > MAX_QUBITS:
        raise MemoryLimit(f'Model needs {nqubit} qubits, limit is {MAX_QUBITS}')
# ----------------------------------------
def build_cho(params : CHOParams, emap : EncodingMap | None = None) -> numpy.ndarray:
    '''
    Coupled oscillator Hamiltonian

    emap: Encoding of each mode, if None the Hamiltonian is built in the D^2 Fock product basis
    '''
    _check_size(emap, 2)
    ops = _site_ops(params.cutoff_nc, emap)

    ham = params.omega1 * _on_sites({0 : ops.number}, ops, 2)
    ham+= params.omega2 * _on_sites({1 : ops.number}, ops, 2)

    hop = _on_sites({0 : ops.raising, 1 : ops.lowering}, ops, 2)
    ham+= params.coupling * (hop + hop.conj().T)

    return check_hermitian(ham)
# ----------------------------------------
def build_bh(params : BHParams, emap : EncodingMap | None = None) -> numpy.ndarray:
    '''
    Bose-Hubbard Hamiltonian, -mu sum n + U/2 sum a^dag a^dag a a - J sum (a^dag_l a_l+1 + h.c.)

    emap: Encoding of each site, if None the Hamiltonian is built in the D^L Fock product basis
    '''
    nsite = params.sites_l
    _check_size(emap, nsite)
    ops   = _site_ops(params.cutoff_nc, emap)

    if params.chem_mu >= params.cutoff_nc * params.onsite_u:
        log.warning(f'mu={params.chem_mu} >= N_c U={params.cutoff_nc * params.onsite_u}, truncation may not hold')

    # Normal ordered interaction, built in the qudit space first
    mode   = TruncatedMode.from_cutoff(params.cutoff_nc)
    inter  = mode.raising @ mode.raising @ mode.lowering @ mode.lowering
    if emap is not None:
        inter = map_operator(inter, emap)

    dim = ops.ident.shape[0] ** nsite
    ham = numpy.zeros((dim, dim), dtype=complex)
    for site in range(nsite):
        ham += -params.chem_mu * _on_sites({site : ops.number}, ops, nsite)
        ham += params.onsite_u / 2 * _on_sites({site : inter}, ops, nsite)

    for site in range(nsite - 1):
        hop  = _on_sites({site : ops.raising, site + 1 : ops.lowering}, ops, nsite)
        ham += -params.hop_j * (hop + hop.conj().T)

    log.debug(f'Built Bose-Hubbard Hamiltonian of dimension {dim}')

    return check_hermitian(ham)
# ----------------------------------------
def site_number_operators(l_map : list[EncodingMap]) -> list[numpy.ndarray]:
    '''
    Encoded number operator of every site, embedded in the full register
    '''
    l_ident = [numpy.eye(2 ** emap.num_qubits, dtype=complex) for emap in l_map]
    l_num   = []
    for site, emap in enumerate(l_map):
        mode  = TruncatedMode.from_cutoff(emap.dim_d - 1)
        l_fac = list(l_ident)
        l_fac[site] = map_operator(mode.number, emap)
        l_num.append(kron(*reversed(l_fac)))

    return l_num
# ----------------------------------------
def exact_ground_state(ham : numpy.ndarray, isometry : numpy.ndarray | None = None) -> GroundState:
    '''
    Lowest eigenpair, restricted to the range of isometry if passed
    '''
    ham = check_hermitian(ham)
    if isometry is not None:
        ham = isometry.conj().T @ ham @ isometry

    arr_val, arr_vec = herm_eig(ham)
    vec              = arr_vec[:, 0]
    if isometry is not None:
        vec = isometry @ vec

    if len(arr_val) > 1 and arr_val[1] - arr_val[0] < 1e-9:
        log.warning('Ground state is degenerate, returning first eigenvector')

    return GroundState(energy=float(arr_val[0]), state=QuantumState.from_vector(vec))
# ----------------------------------------
def _cubic_roots(omega : float, coupling : float) -> numpy.ndarray:
    # Roots are 2 omega and 2 omega +- 2 coupling
    if 2 * abs(coupling) < ROOT_GAP_TOL:
        raise DegenerateCubic(f'Roots of cubic are separated by {2 * abs(coupling):.3e}')

    arr_coef = [1, -6 * omega, -4 * coupling ** 2 + 12 * omega ** 2, 8 * omega * (coupling ** 2 - omega ** 2)]
    arr_root = numpy.roots(arr_coef)
    if numpy.max(numpy.abs(arr_root.imag)) > ROOT_GAP_TOL:
        raise DegenerateCubic(f'Cubic has complex roots: {arr_root}')

    arr_root = numpy.sort(arr_root.real)
    gap      = numpy.min(numpy.diff(arr_root))
    if gap < ROOT_GAP_TOL:
        raise DegenerateCubic(f'Roots of cubic are separated by {gap:.3e}')

    return arr_root
# ----------------------------------------
def _two_boson_vector(root : float, omega : float, coupling : float) -> numpy.ndarray:
    val_f = -1 + 2 / coupling ** 2 * (omega - root / 2) ** 2
    val_g = (-math.sqrt(2) * omega + root / math.sqrt(2)) / coupling

    vec = numpy.zeros(9)
    vec[2] = val_f
    vec[4] = val_g
    vec[6] = 1

    return vec
# ----------------------------------------
def _basis(*l_entry : tuple[int, float]) -> numpy.ndarray:
    vec = numpy.zeros(9)
    for index, value in l_entry:
        vec[index] = value

    return vec
# ----------------------------------------
def cho_exact_spectrum(omega : float, coupling : float) -> tuple[numpy.ndarray, numpy.ndarray]:
    '''
    Closed form spectrum of two equal frequency oscillators truncated at two bosons

    Returns eigenvalues eps_0..eps_8 and matrix with the normalized eigenvectors as columns,
    in the D^2 = 9 Fock product basis. Each two boson eigenvalue is paired with the
    cubic root closest to it.
    '''
    arr_val = numpy.array([
        0,
        2 * omega - 2 * coupling,
        2 * omega,
        4 * omega,
        2 * omega + 2 * coupling,
        omega - coupling,
        omega + coupling,
        3 * omega - 2 * coupling,
        3 * omega + 2 * coupling])

    # Slots of the one, two and three boson blocks
    d_vec = {
            0 : _basis((0, 1)),
            3 : _basis((8, 1)),
            5 : _basis((1, 1), (3, -1)),
            6 : _basis((1, 1), (3,  1)),
            7 : _basis((5, 1), (7, -1)),
            8 : _basis((5, 1), (7,  1)),
            }

    l_two = [1, 2, 4]
    if coupling == 0:
        log.info('Uncoupled oscillators, returning number basis')
        for slot, index in zip(l_two, [2, 4, 6]):
            d_vec[slot] = _basis((index, 1))
    else:
        for root in _cubic_roots(omega, coupling):
            slot = min(l_two, key=lambda slot : abs(arr_val[slot] - root))
            l_two.remove(slot)
            d_vec[slot] = _two_boson_vector(root, omega, coupling)

    l_col   = [d_vec[slot] / numpy.linalg.norm(d_vec[slot]) for slot in range(9)]
    arr_vec = numpy.column_stack(l_col).astype(complex)

    return arr_val, arr_vec
# ----------------------------------------
