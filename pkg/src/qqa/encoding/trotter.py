'''
Module with the first-order Trotter compilation of Pauli sums and its CNOT cost model

Each string of weight w >= 2 is compiled as:

- basis change of each support qubit into the Z basis
- CNOT staircase over the support, ascending qubit order, parity lands on the last qubit
- Z rotation on the last support qubit
- staircase and basis change undone

which uses 2(w - 1) CNOTs. A CNOT is long range when its qubits are not adjacent.
'''
import math
from dataclasses import dataclass

import numpy

from dmu.logging.log_store  import LogStore
from qqa.encoding.pauli_sum import PauliSum, PauliString

log = LogStore.add_logger('qqa:encoding:trotter')

_HAD  = numpy.array([[1,  1], [1, -1]], dtype=complex) / math.sqrt(2)
_SDG  = numpy.array([[1,  0], [0, -1j]], dtype=complex)
_CNOT = numpy.array([
    [1, 0, 0, 0],
    [0, 0, 0, 1],
    [0, 0, 1, 0],
    [0, 1, 0, 0]], dtype=complex)

# Maps Z onto the letter: U^dagger Z U = sigma
_BASIS_CHANGE = {
        'X' : _HAD,
        'Y' : _HAD @ _SDG,
        'Z' : numpy.eye(2, dtype=complex),
        }

_PAULI = {
        'X' : numpy.array([[0,   1], [1,  0]], dtype=complex),
        'Y' : numpy.array([[0, -1j], [1j, 0]], dtype=complex),
        'Z' : numpy.array([[1,   0], [0, -1]], dtype=complex),
        }
# ----------------------------------------
@dataclass(frozen=True)
class CircuitCost:
    '''
    Gate tally of a compiled circuit
    '''
    cnot_nearest           : int = 0
    cnot_long_range        : int = 0
    single_qubit_rotations : int = 0
    # ----------------------------------
    def __post_init__(self):
        if min(self.cnot_nearest, self.cnot_long_range, self.single_qubit_rotations) < 0:
            raise ValueError(f'Negative gate count in {self}')
    # ----------------------------------
    @property
    def total(self) -> int:
        '''
        Total number of CNOT gates
        '''
        return self.cnot_nearest + self.cnot_long_range
    # ----------------------------------
    def __add__(self, other : 'CircuitCost') -> 'CircuitCost':
        return CircuitCost(
                cnot_nearest           = self.cnot_nearest           + other.cnot_nearest,
                cnot_long_range        = self.cnot_long_range        + other.cnot_long_range,
                single_qubit_rotations = self.single_qubit_rotations + other.single_qubit_rotations)
    # ----------------------------------
    def scaled(self, factor : int) -> 'CircuitCost':
        '''
        Every count multiplied by factor
        '''
        return CircuitCost(
                cnot_nearest           = factor * self.cnot_nearest,
                cnot_long_range        = factor * self.cnot_long_range,
                single_qubit_rotations = factor * self.single_qubit_rotations)
    # ----------------------------------
    def to_dict(self) -> dict[str, int]:
        '''
        Returns counts, including total
        '''
        return {
                'cnot_nearest'           : self.cnot_nearest,
                'cnot_long_range'        : self.cnot_long_range,
                'cnot_total'             : self.total,
                'single_qubit_rotations' : self.single_qubit_rotations,
                }
# ----------------------------------------
@dataclass(frozen=True)
class Gate:
    '''
    Gate acting on qubits, qubits[0] is the least significant qubit of matrix
    '''
    name   : str
    qubits : tuple[int, ...]
    matrix : numpy.ndarray
    # ----------------------------------
    @property
    def is_cnot(self) -> bool:
        '''
        True for entangling gates
        '''
        return self.name == 'cnot'
# ----------------------------------------
@dataclass(frozen=True)
class RegisterGates:
    '''
    CNOTs outside of the layers

    preparation: One register qubit per CNOT, entangled with a purifying partner
    measurement: Qubit pairs of the CNOTs rotating into the measurement basis
    '''
    preparation : tuple[int, ...]            = ()
    measurement : tuple[tuple[int, int], ...] = ()
    # ----------------------------------
    @property
    def cost(self) -> CircuitCost:
        '''
        Nearest neighbour CNOTs of preparation and measurement
        '''
        return CircuitCost(cnot_nearest=len(self.preparation) + len(self.measurement))
# ----------------------------------------
def _cnot(control : int, target : int) -> Gate:
    # Matrix above flips its qubit 1 when its qubit 0 is set
    return Gate(name='cnot', qubits=(control, target), matrix=_CNOT)
# ----------------------------------------
def _staircase_pairs(string : PauliString) -> list[tuple[int, int]]:
    support = string.support

    return list(zip(support[:-1], support[1:]))
# ----------------------------------------
def string_cost(string : PauliString) -> CircuitCost:
    '''
    Cost of exp(-i theta P) for a single string
    '''
    if string.weight == 0:
        return CircuitCost()

    if string.weight == 1:
        return CircuitCost(single_qubit_rotations=1)

    l_pair  = _staircase_pairs(string)
    nlong   = 2 * sum(1 for control, target in l_pair if abs(control - target) > 1)
    nnear   = 2 * len(l_pair) - nlong

    return CircuitCost(cnot_nearest=nnear, cnot_long_range=nlong, single_qubit_rotations=1)
# ----------------------------------------
def trotter_cost(pauli : PauliSum) -> CircuitCost:
    '''
    Cost of one first-order Trotter step of exp(-i nu H)
    '''
    cost = CircuitCost()
    for string in pauli:
        cost = cost + string_cost(string)

    return cost
# ----------------------------------------
def layered_cost(pauli : PauliSum, layers : int) -> CircuitCost:
    '''
    Cost of a QAOA with layers applications of the mixer
    '''
    if layers < 1:
        raise ValueError(f'Number of layers must be positive, found {layers}')

    return trotter_cost(pauli).scaled(layers)
# ----------------------------------------
def _rotation(letter : str, angle : float) -> numpy.ndarray:
    # exp(-i angle sigma)
    return math.cos(angle) * numpy.eye(2, dtype=complex) - 1j * math.sin(angle) * _PAULI[letter]
# ----------------------------------------
def compile_string(string : PauliString, angle : float) -> list[Gate]:
    '''
    Gate sequence implementing exp(-i angle c P) for the string c P
    '''
    theta = angle * string.coeff
    if string.weight == 0:
        return []

    if string.weight == 1:
        [qubit] = string.support
        letter  = string.letters[qubit]
        return [Gate(name='rotation', qubits=(qubit,), matrix=_rotation(letter, theta))]

    l_basis = []
    l_undo  = []
    for qubit in string.support:
        letter = string.letters[qubit]
        if letter == 'Z':
            continue

        mat = _BASIS_CHANGE[letter]
        l_basis.append(Gate(name='basis', qubits=(qubit,), matrix=mat))
        l_undo.append( Gate(name='basis', qubits=(qubit,), matrix=mat.conj().T))

    l_cnot = [_cnot(control, target) for control, target in _staircase_pairs(string)]
    last   = string.support[-1]
    rot_z  = Gate(name='rotation', qubits=(last,), matrix=_rotation('Z', theta))

    return l_basis + l_cnot + [rot_z] + list(reversed(l_cnot)) + l_undo
# ----------------------------------------
def compile_trotter_step(pauli : PauliSum, angle : float) -> list[Gate]:
    '''
    Gate sequence of a single first-order Trotter step of exp(-i angle H)
    '''
    l_gate = []
    for string in pauli:
        l_gate += compile_string(string, angle)

    log.debug(f'Compiled Trotter step with {len(l_gate)} gates')

    return l_gate
# ----------------------------------------
