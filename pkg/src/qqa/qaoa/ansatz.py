'''
Module with the alternating cost/mixer ansatz

A layer l applies U_C(gamma_l) = exp(-i gamma_l H_C) followed by
U_M(nu_l) = exp(-i nu_l H_M). Under the depolarized CNOT noise model the mixer
of each layer runs as one compiled Trotter step, with a two qubit depolarizing
channel after every CNOT. With the register placement the CNOTs preparing the
initial state and rotating into the measurement basis are noisy too.
'''
import itertools
from enum        import Enum
from dataclasses import dataclass, field, replace

import numpy

from dmu.logging.log_store     import LogStore
from qqa.linalg.operators      import herm_eig, apply_local, IndexOutOfRange, DimensionMismatch
from qqa.linalg.quantum_state  import QuantumState
from qqa.encoding.pauli_sum    import PauliSum, pauli_decompose
from qqa.encoding.trotter      import Gate, RegisterGates, compile_trotter_step

log = LogStore.add_logger('qqa:qaoa:ansatz')

IMAG_TOL = 1e-10
_PAULI   = [
        numpy.eye(2, dtype=complex),
        numpy.array([[0,   1], [1,  0]], dtype=complex),
        numpy.array([[0, -1j], [1j, 0]], dtype=complex),
        numpy.array([[1,   0], [0, -1]], dtype=complex),
        ]
# 15 non-identity two qubit Pauli operators
_TWO_QUBIT_PAULI = [numpy.kron(op_1, op_0) for op_1, op_0 in itertools.product(_PAULI, _PAULI)][1:]
# ----------------------------------------
class NoisyPureState(ValueError):
    '''
    Raised when a noisy evolution is requested for a state vector
    '''
    def __init__(self, message='Noisy evolution needs a density matrix'):
        self.message = message
        super().__init__(self.message)
# ----------------------------------------
class NoiseKind(str, Enum):
    '''
    Supported noise models
    '''
    NONE            = 'none'
    DEPOLARIZED_CNOT= 'depolarized_cnot'
# ----------------------------------------
class NoisePlacement(str, Enum):
    '''
    CNOTs that carry the depolarizing channel

    mixer   : Only the compiled mixer of every layer
    register: Mixer, state preparation and measurement
    '''
    MIXER    = 'mixer'
    REGISTER = 'register'
# ----------------------------------------
class LocalSearch(str, Enum):
    '''
    Derivative free local minimizers, names as in scipy.optimize.minimize
    '''
    NELDER_MEAD = 'Nelder-Mead'
    POWELL      = 'Powell'
    COBYQA      = 'COBYQA'
# ----------------------------------------
@dataclass(frozen=True)
class NoiseModel:
    '''
    Noise acting on the compiled circuit, epsilon is the depolarizing probability per CNOT
    '''
    kind      : NoiseKind      = NoiseKind.NONE
    epsilon   : float          = 0.0
    placement : NoisePlacement = NoisePlacement.MIXER
    # ----------------------------------
    def __post_init__(self):
        if not 0 <= self.epsilon < 1:
            raise ValueError(f'Noise strength must be in [0, 1), found {self.epsilon}')

        object.__setattr__(self, 'placement', NoisePlacement(self.placement))
    # ----------------------------------
    @property
    def is_noisy(self) -> bool:
        '''
        True if the compiled noisy mixer has to be used
        '''
        return self.kind == NoiseKind.DEPOLARIZED_CNOT
    # ----------------------------------
    @property
    def on_register(self) -> bool:
        '''
        True if preparation and measurement CNOTs are noisy too
        '''
        return self.is_noisy and self.placement == NoisePlacement.REGISTER
    # ----------------------------------
    @staticmethod
    def depolarizing(epsilon : float, placement : NoisePlacement = NoisePlacement.MIXER) -> 'NoiseModel':
        '''
        Depolarized CNOT model, noiseless for epsilon = 0
        '''
        if epsilon == 0:
            return NoiseModel()

        return NoiseModel(kind=NoiseKind.DEPOLARIZED_CNOT, epsilon=epsilon, placement=placement)
# ----------------------------------------
@dataclass(frozen=True)
class QaoaConfig:
    '''
    Schedule and optimizer settings, angles default to zero

    zero_start: Adds one start at all angles zero to the seeded random ones
    '''
    layers_p   : int
    gammas     : tuple[float, ...] = None
    nus        : tuple[float, ...] = None
    seed       : int   = 0
    restarts   : int   = 16
    max_evals  : int   = 5000
    tol        : float = 1e-6
    method     : LocalSearch = LocalSearch.NELDER_MEAD
    zero_start : bool  = False
    # ----------------------------------
    def __post_init__(self):
        if self.layers_p < 0:
            raise ValueError(f'Number of layers must be non-negative, found {self.layers_p}')

        for name in ['gammas', 'nus']:
            value = getattr(self, name)
            value = (0.0,) * self.layers_p if value is None else tuple(float(angle) for angle in value)
            object.__setattr__(self, name, value)

        if len(self.gammas) != self.layers_p or len(self.nus) != self.layers_p:
            raise ValueError(f'Expected {self.layers_p} angles, found {len(self.gammas)} gammas and {len(self.nus)} nus')

        if self.tol <= 0:
            raise ValueError(f'Tolerance must be positive, found {self.tol}')

        if self.restarts < 1:
            raise ValueError(f'Need at least one restart, found {self.restarts}')

        object.__setattr__(self, 'method', LocalSearch(self.method))
    # ----------------------------------
    @property
    def theta(self) -> numpy.ndarray:
        '''
        Angles as (gamma_1..gamma_p, nu_1..nu_p)
        '''
        return numpy.array(self.gammas + self.nus)
    # ----------------------------------
    def with_theta(self, theta : numpy.ndarray) -> 'QaoaConfig':
        '''
        Copy of the configuration with angles taken from theta = (gammas, nus)
        '''
        theta = numpy.asarray(theta, dtype=float)
        if theta.size != 2 * self.layers_p:
            raise DimensionMismatch(f'Expected {2 * self.layers_p} angles, found {theta.size}')

        return replace(self, gammas=theta[:self.layers_p], nus=theta[self.layers_p:])
# ----------------------------------------
def apply_depolarizing_two_qubit(rho : QuantumState, qubits : tuple[int, int], epsilon : float) -> QuantumState:
    '''
    (1 - eps) rho + eps/15 sum_P P rho P over the non-identity Paulis on qubits
    '''
    if rho.is_pure:
        raise NoisyPureState('Depolarizing channel needs a density matrix')

    data = _depolarize(rho.data, qubits, epsilon, rho.num_qubits)

    return QuantumState.from_density(data)
# ----------------------------------------
def _depolarize(data : numpy.ndarray, qubits : tuple[int, int], epsilon : float, nqubit : int) -> numpy.ndarray:
    control, target = qubits
    if control == target:
        raise IndexOutOfRange(f'Depolarizing channel needs two distinct qubits, found {qubits}')

    if epsilon == 0:
        return data

    out = (1 - epsilon) * data
    for pauli in _TWO_QUBIT_PAULI:
        out = out + epsilon / 15 * apply_local(data, pauli, [control, target], num_qubits=nqubit)

    return out
# ----------------------------------------
def apply_depolarizing_one_qubit(rho : QuantumState, qubit : int, epsilon : float) -> QuantumState:
    '''
    (1 - eps) rho + eps/3 (X rho X + Y rho Y + Z rho Z) on qubit
    '''
    if rho.is_pure:
        raise NoisyPureState('Depolarizing channel needs a density matrix')

    data = _depolarize_one(rho.data, qubit, epsilon, rho.num_qubits)

    return QuantumState.from_density(data)
# ----------------------------------------
def _depolarize_one(data : numpy.ndarray, qubit : int, epsilon : float, nqubit : int) -> numpy.ndarray:
    if epsilon == 0:
        return data

    out = (1 - epsilon) * data
    for pauli in _PAULI[1:]:
        out = out + epsilon / 3 * apply_local(data, pauli, [qubit], num_qubits=nqubit)

    return out
# ----------------------------------------
def preparation_strength(epsilon : float) -> float:
    '''
    Single qubit depolarizing strength left on a register qubit by a noisy CNOT
    with its purifying partner, once the partner is traced out
    '''
    return 4 * epsilon / 5
# ----------------------------------------
def energy(state : QuantumState, h_cost : numpy.ndarray) -> float:
    '''
    <psi|H|psi> or Tr(rho H)
    '''
    if h_cost.shape != (state.dim, state.dim):
        raise DimensionMismatch(f'Operator of shape {h_cost.shape} does not act on {state.num_qubits} qubits')

    return _expectation(state.data, h_cost)
# ----------------------------------------
def _expectation(data : numpy.ndarray, h_cost : numpy.ndarray) -> float:
    if data.ndim == 1:
        val = numpy.vdot(data, h_cost @ data)
    else:
        val = numpy.trace(data @ h_cost)

    if abs(val.imag) > IMAG_TOL:
        raise ValueError(f'Expectation value has imaginary part {val.imag:.3e}')

    return float(val.real)
# ----------------------------------------
@dataclass
class _Propagator:
    '''
    Cached eigendecomposition, gives exp(-i angle H) applied to states
    '''
    ham     : numpy.ndarray
    arr_val : numpy.ndarray = field(init=False)
    arr_vec : numpy.ndarray = field(init=False)
    # ----------------------------------
    def __post_init__(self):
        self.arr_val, self.arr_vec = herm_eig(self.ham)
    # ----------------------------------
    def apply(self, data : numpy.ndarray, angle : float) -> numpy.ndarray:
        '''
        U psi for vectors and U rho U^dagger for density matrices
        '''
        arr_phs = numpy.exp(-1j * angle * self.arr_val)
        vec     = self.arr_vec
        if data.ndim == 1:
            return vec @ (arr_phs * (vec.conj().T @ data))

        rot = vec.conj().T @ data @ vec
        rot = arr_phs[:, None] * rot * arr_phs.conj()[None, :]

        return vec @ rot @ vec.conj().T
# ----------------------------------------
class QaoaAnsatz:
    '''
    Alternating ansatz for fixed cost and mixer Hamiltonians

    Eigendecompositions are computed once, so that evaluating many angle sets is cheap
    '''
    # ----------------------------------
    def __init__(self,
                 h_cost      : numpy.ndarray,
                 h_mixer     : numpy.ndarray,
                 noise       : NoiseModel    = NoiseModel(),
                 mixer_pauli : PauliSum      = None,
                 register    : RegisterGates = RegisterGates()):
        '''
        h_cost     : Cost Hamiltonian
        h_mixer    : Mixer Hamiltonian, same shape as h_cost
        noise      : Noise model for the mixer
        mixer_pauli: Pauli form of the mixer, compiled under noise, built from h_mixer if not passed
        register   : Preparation and measurement CNOTs, noisy only with the register placement
        '''
        if h_cost.shape != h_mixer.shape:
            raise DimensionMismatch(f'Cost {h_cost.shape} and mixer {h_mixer.shape} shapes differ')

        self._h_cost  = h_cost
        self._noise   = noise
        self._register= register
        self._cost    = _Propagator(h_cost)
        self._mixer   = _Propagator(h_mixer)
        self._nqubit  = h_cost.shape[0].bit_length() - 1

        self._pauli   = mixer_pauli
        if noise.is_noisy and self._pauli is None:
            self._pauli = pauli_decompose(h_mixer)
    # ----------------------------------
    @property
    def noise(self) -> NoiseModel:
        '''
        Noise model used by this ansatz
        '''
        return self._noise
    # ----------------------------------
    def _check_state(self, state : QuantumState) -> None:
        if state.num_qubits != self._nqubit:
            raise DimensionMismatch(f'State has {state.num_qubits} qubits, Hamiltonians act on {self._nqubit}')

        if state.is_pure and self._noise.is_noisy:
            raise NoisyPureState('Noisy evolution of a state vector requested, pass a density matrix')
    # ----------------------------------
    def _apply_gate(self, data : numpy.ndarray, gate : Gate) -> numpy.ndarray:
        data = apply_local(data, gate.matrix, list(gate.qubits), num_qubits=self._nqubit)
        if gate.is_cnot:
            data = _depolarize(data, gate.qubits, self._noise.epsilon, self._nqubit)

        return data
    # ----------------------------------
    def _mix(self, data : numpy.ndarray, angle : float) -> numpy.ndarray:
        if not self._noise.is_noisy:
            return self._mixer.apply(data, angle)

        for gate in compile_trotter_step(self._pauli, angle):
            data = self._apply_gate(data, gate)

        return data
    # ----------------------------------
    def _layer(self, data : numpy.ndarray, gamma : float, nu : float) -> numpy.ndarray:
        data = self._cost.apply(data, gamma)

        return self._mix(data, nu)
    # ----------------------------------
    def _prepare(self, data : numpy.ndarray) -> numpy.ndarray:
        if not self._noise.on_register:
            return data

        strength = preparation_strength(self._noise.epsilon)
        for qubit in self._register.preparation:
            data = _depolarize_one(data, qubit, strength, self._nqubit)

        return data
    # ----------------------------------
    def _measure(self, data : numpy.ndarray) -> numpy.ndarray:
        # Two qubit depolarizing commutes with the CNOT it follows, it acts before the basis change
        if not self._noise.on_register:
            return data

        for pair in self._register.measurement:
            data = _depolarize(data, pair, self._noise.epsilon, self._nqubit)

        return data
    # ----------------------------------
    def _run(self, initial : QuantumState, theta : numpy.ndarray) -> numpy.ndarray:
        self._check_state(initial)
        gammas, nus = self._split(theta)

        data = self._prepare(initial.data)
        for gamma, nu in zip(gammas, nus):
            data = self._layer(data, gamma, nu)

        return self._measure(data)
    # ----------------------------------
    def _to_state(self, data : numpy.ndarray) -> QuantumState:
        if data.ndim == 1:
            return QuantumState.from_vector(data)

        data = (data + data.conj().T) / 2

        return QuantumState.from_density(data)
    # ----------------------------------
    def _split(self, theta : numpy.ndarray) -> tuple[numpy.ndarray, numpy.ndarray]:
        theta = numpy.asarray(theta, dtype=float)
        if theta.size % 2 != 0:
            raise DimensionMismatch(f'Odd number of angles: {theta.size}')

        nlayer = theta.size // 2

        return theta[:nlayer], theta[nlayer:]
    # ----------------------------------
    def evolve(self, initial : QuantumState, theta : numpy.ndarray) -> QuantumState:
        '''
        State after all layers, theta = (gamma_1..gamma_p, nu_1..nu_p)
        '''
        data = self._run(initial, theta)

        return self._to_state(data)
    # ----------------------------------
    def energy(self, initial : QuantumState, theta : numpy.ndarray) -> float:
        '''
        Cost expectation value of the evolved state
        '''
        data = self._run(initial, theta)

        return _expectation(data, self._h_cost)
    # ----------------------------------
    def layer_trajectory(self, initial : QuantumState, theta : numpy.ndarray) -> list[QuantumState]:
        '''
        Initial state followed by the state after each layer, measurement noise is not applied
        '''
        self._check_state(initial)
        gammas, nus = self._split(theta)

        data   = self._prepare(initial.data)
        l_state= [initial]
        for gamma, nu in zip(gammas, nus):
            data = self._layer(data, gamma, nu)
            l_state.append(self._to_state(data))

        return l_state
# ----------------------------------------
def evolve(initial : QuantumState, h_cost : numpy.ndarray, h_mixer : numpy.ndarray, config : QaoaConfig, noise : NoiseModel = NoiseModel()) -> QuantumState:
    '''
    Applies the schedule in config to the initial state
    '''
    ansatz = QaoaAnsatz(h_cost=h_cost, h_mixer=h_mixer, noise=noise)

    return ansatz.evolve(initial, config.theta)
# ----------------------------------------
