'''
Module holding QuantumState class
'''
from enum        import Enum
from dataclasses import dataclass

import numpy
import scipy.linalg as sla

from qqa.linalg.operators import num_qubits_of, DimensionMismatch

NORM_TOL = 1e-10
# ----------------------------------------
class StateKind(str, Enum):
    '''
    Representation of a state
    '''
    PURE    = 'pure'
    DENSITY = 'density'
# ----------------------------------------
class InvalidState(ValueError):
    '''
    Raised when a vector or matrix does not represent a physical state
    '''
    def __init__(self, message='Invalid quantum state'):
        self.message = message
        super().__init__(self.message)
# ----------------------------------------
@dataclass(frozen=True)
class QuantumState:
    '''
    Pure state vector (2^K) or density matrix (2^K x 2^K) over K qubits

    Use the from_vector and from_density constructors, they validate the input
    '''
    kind       : StateKind
    num_qubits : int
    data       : numpy.ndarray
    # ----------------------------------
    @staticmethod
    def from_vector(vec : numpy.ndarray, tol : float = NORM_TOL) -> 'QuantumState':
        '''
        Takes state vector, checks normalization, returns pure state
        '''
        vec    = numpy.array(vec, dtype=complex).reshape(-1)
        nqubit = num_qubits_of(vec.size)
        norm   = numpy.linalg.norm(vec)
        if abs(norm - 1) > tol:
            raise InvalidState(f'State vector has norm {norm:.12f}')

        vec.setflags(write=False)

        return QuantumState(kind=StateKind.PURE, num_qubits=nqubit, data=vec)
    # ----------------------------------
    @staticmethod
    def from_density(rho : numpy.ndarray, tol : float = NORM_TOL) -> 'QuantumState':
        '''
        Takes density matrix, checks trace, Hermiticity and positivity, returns mixed state
        '''
        rho = numpy.asarray(rho, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise DimensionMismatch(f'Density matrix must be square, found {rho.shape}')

        nqubit = num_qubits_of(rho.shape[0])
        trace  = numpy.trace(rho).real
        if abs(trace - 1) > tol:
            raise InvalidState(f'Density matrix has trace {trace:.12f}')

        dev = numpy.max(numpy.abs(rho - rho.conj().T))
        if dev > tol:
            raise InvalidState(f'Density matrix deviates from Hermiticity by {dev:.3e}')

        rho     = (rho + rho.conj().T) / 2
        min_val = sla.eigvalsh(rho)[0]
        if min_val < -tol:
            raise InvalidState(f'Density matrix has negative eigenvalue {min_val:.3e}')

        rho.setflags(write=False)

        return QuantumState(kind=StateKind.DENSITY, num_qubits=nqubit, data=rho)
    # ----------------------------------
    @staticmethod
    def basis(index : int, num_qubits : int) -> 'QuantumState':
        '''
        Computational basis state |index>
        '''
        vec        = numpy.zeros(2 ** num_qubits, dtype=complex)
        vec[index] = 1

        return QuantumState.from_vector(vec)
    # ----------------------------------
    @property
    def is_pure(self) -> bool:
        '''
        True if state is stored as a vector
        '''
        return self.kind == StateKind.PURE
    # ----------------------------------
    @property
    def dim(self) -> int:
        '''
        Dimension of the Hilbert space
        '''
        return 2 ** self.num_qubits
    # ----------------------------------
    def to_density(self) -> 'QuantumState':
        '''
        Returns density matrix version of the state
        '''
        if not self.is_pure:
            return self

        rho = numpy.outer(self.data, self.data.conj())
        rho.setflags(write=False)

        return QuantumState(kind=StateKind.DENSITY, num_qubits=self.num_qubits, data=rho)
    # ----------------------------------
    def __str__(self) -> str:
        return f'QuantumState(kind={self.kind.value}, num_qubits={self.num_qubits})'
# ----------------------------------------
