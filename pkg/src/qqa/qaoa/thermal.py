'''
Module with Gibbs states, their thermofield double purification and mixer ground states
'''
from dataclasses import dataclass

import numpy

from dmu.logging.log_store     import LogStore
from qqa.linalg.operators      import kron, herm_eig, check_hermitian, partial_trace, DimensionMismatch
from qqa.linalg.quantum_state  import QuantumState
from qqa.encoding.encoding_map import EncodingScheme, build_encoding

log = LogStore.add_logger('qqa:qaoa:thermal')

DEGENERACY_TOL = 1e-9
# ----------------------------------------
@dataclass(frozen=True)
class GibbsSpec:
    '''
    Hamiltonian and inverse temperature of a thermal state
    '''
    hamiltonian : numpy.ndarray
    beta        : float
    # ----------------------------------
    def __post_init__(self):
        if self.beta < 0:
            raise ValueError(f'Inverse temperature must be non-negative, found {self.beta}')

        check_hermitian(self.hamiltonian)
# ----------------------------------------
@dataclass(frozen=True)
class MixerGroundState:
    '''
    Ground state of a mixer, a uniform mixture when the ground space is degenerate
    '''
    state       : QuantumState
    energy      : float
    degeneracy  : int
    # ----------------------------------
    @property
    def is_degenerate(self) -> bool:
        '''
        True if the ground space has more than one state
        '''
        return self.degeneracy > 1
# ----------------------------------------
def _restrict(mat : numpy.ndarray, isometry : numpy.ndarray | None) -> numpy.ndarray:
    if isometry is None:
        return check_hermitian(mat)

    if isometry.shape[0] != mat.shape[0]:
        raise DimensionMismatch(f'Isometry of shape {isometry.shape} does not match operator of shape {mat.shape}')

    return check_hermitian(isometry.conj().T @ mat @ isometry)
# ----------------------------------------
def _lift(rho : numpy.ndarray, isometry : numpy.ndarray | None) -> numpy.ndarray:
    if isometry is None:
        return rho

    return isometry @ rho @ isometry.conj().T
# ----------------------------------------
def boltzmann_weights(arr_val : numpy.ndarray, beta : float) -> numpy.ndarray:
    '''
    Normalized e^{-beta E} weights, shifted by the lowest energy
    '''
    arr_wgt = numpy.exp(-beta * (arr_val - arr_val.min()))

    return arr_wgt / arr_wgt.sum()
# ----------------------------------------
def gibbs_state(spec : GibbsSpec, isometry : numpy.ndarray | None = None) -> QuantumState:
    '''
    e^{-beta H} / Tr e^{-beta H}

    isometry: If passed, the state is built from M^dagger H M and lifted back,
              it then has no weight outside of the range of M
    '''
    mat              = _restrict(spec.hamiltonian, isometry)
    arr_val, arr_vec = herm_eig(mat)
    arr_wgt          = boltzmann_weights(arr_val, spec.beta)

    rho = (arr_vec * arr_wgt) @ arr_vec.conj().T
    rho = _lift(rho, isometry)
    rho = (rho + rho.conj().T) / 2

    return QuantumState.from_density(rho)
# ----------------------------------------
def thermofield_double(h_mixer : numpy.ndarray, beta : float) -> QuantumState:
    '''
    Purification of the Gibbs state of h_mixer on 2K qubits

    Problem register on qubits 0..K-1, ancilla on K..2K-1, the ancilla
    basis is a copy of the eigenbasis of h_mixer
    '''
    arr_val, arr_vec = herm_eig(h_mixer)
    arr_amp          = numpy.sqrt(boltzmann_weights(arr_val, beta))
    dim              = arr_vec.shape[0]

    vec = numpy.zeros(dim * dim, dtype=complex)
    for index, amp in enumerate(arr_amp):
        col  = arr_vec[:, index]
        vec += amp * numpy.kron(col, col)

    log.debug(f'Built thermofield double at beta={beta} over {2 * dim.bit_length() - 2} qubits')

    return QuantumState.from_vector(vec)
# ----------------------------------------
def purified_gibbs(h_mixer : numpy.ndarray, beta : float) -> QuantumState:
    '''
    Reduced state of the thermofield double on the problem register
    '''
    state  = thermofield_double(h_mixer, beta)
    nqubit = state.num_qubits // 2

    return partial_trace(state, keep=list(range(nqubit)))
# ----------------------------------------
def binary_cho_mixer() -> numpy.ndarray:
    '''
    II x H + H x II with H the binary mixer swapping levels 0 and 1 of a D=3 qudit
    '''
    emap  = build_encoding(EncodingScheme.BINARY, 3)
    iso   = emap.isometry
    mat   = iso[:, [0]] @ iso[:, [1]].conj().T
    mat   = mat + mat.conj().T
    ident = numpy.eye(4, dtype=complex)

    return kron(ident, mat) + kron(mat, ident)
# ----------------------------------------
def mixer_gibbs_appendix_a(beta : float) -> QuantumState:
    '''
    Four qubit Gibbs state of the two mode binary mixer used for the coupled oscillators
    '''
    if beta < 0:
        raise ValueError(f'Inverse temperature must be non-negative, found {beta}')

    h_mixer = binary_cho_mixer()

    return gibbs_state(GibbsSpec(hamiltonian=h_mixer, beta=beta))
# ----------------------------------------
def mixer_ground_state(h_mixer : numpy.ndarray, isometry : numpy.ndarray | None = None, tol : float = DEGENERACY_TOL) -> MixerGroundState:
    '''
    Lowest eigenvector of the mixer, restricted to the range of isometry if passed

    A degenerate ground space gives the uniform mixture over it
    '''
    mat              = _restrict(h_mixer, isometry)
    arr_val, arr_vec = herm_eig(mat)
    energy           = float(arr_val[0])
    ndeg             = int(numpy.sum(arr_val - energy <= tol))

    if ndeg == 1:
        vec = arr_vec[:, 0]
        if isometry is not None:
            vec = isometry @ vec

        return MixerGroundState(state=QuantumState.from_vector(vec), energy=energy, degeneracy=1)

    log.warning(f'Mixer ground space is {ndeg}-fold degenerate, using uniform mixture')
    arr_gnd = arr_vec[:, :ndeg]
    rho     = arr_gnd @ arr_gnd.conj().T / ndeg
    rho     = _lift(rho, isometry)
    rho     = (rho + rho.conj().T) / 2

    return MixerGroundState(state=QuantumState.from_density(rho), energy=energy, degeneracy=ndeg)
# ----------------------------------------
