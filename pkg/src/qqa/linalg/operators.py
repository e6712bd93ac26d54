'''
Module with dense linear algebra primitives used by every other module

Qubit ordering is little endian everywhere: qubit 0 is the least significant bit
of a basis index, i.e. the right-most factor of a Kronecker product.
'''
from functools import reduce

import numpy
import scipy.linalg as sla

HERMITIAN_TOL = 1e-10
# ----------------------------------------
class NotHermitian(ValueError):
    '''
    Raised when a matrix expected to be Hermitian is not
    '''
    def __init__(self, message='Matrix is not Hermitian'):
        self.message = message
        super().__init__(self.message)
# ----------------------------------------
class IndexOutOfRange(ValueError):
    '''
    Raised when a qubit or level index falls outside of the register
    '''
    def __init__(self, message='Index out of range'):
        self.message = message
        super().__init__(self.message)
# ----------------------------------------
class DimensionMismatch(ValueError):
    '''
    Raised when operands do not have compatible shapes
    '''
    def __init__(self, message='Dimensions do not match'):
        self.message = message
        super().__init__(self.message)
# ----------------------------------------
def kron(*mats : numpy.ndarray) -> numpy.ndarray:
    '''
    Kronecker product of all arguments, left-most factor is the most significant
    '''
    if len(mats) == 0:
        raise ValueError('At least one matrix is needed')

    return reduce(numpy.kron, mats)
# ----------------------------------------
def num_qubits_of(dim : int) -> int:
    '''
    Takes dimension of a multi-qubit space, returns number of qubits
    '''
    nqubit = int(dim).bit_length() - 1
    if 2 ** nqubit != dim:
        raise DimensionMismatch(f'Dimension {dim} is not a power of two')

    return nqubit
# ----------------------------------------
def check_hermitian(mat : numpy.ndarray, tol : float = HERMITIAN_TOL) -> numpy.ndarray:
    '''
    Raises NotHermitian if the matrix deviates from its adjoint by more than tol
    Returns symmetrized matrix (A + A^dagger) / 2
    '''
    mat = numpy.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionMismatch(f'Expected square matrix, got shape {mat.shape}')

    dev = numpy.max(numpy.abs(mat - mat.conj().T)) if mat.size else 0.0
    if dev > tol:
        raise NotHermitian(f'Maximum deviation from Hermiticity is {dev:.3e} > {tol:.1e}')

    return (mat + mat.conj().T) / 2
# ----------------------------------------
def herm_eig(mat : numpy.ndarray) -> tuple[numpy.ndarray, numpy.ndarray]:
    '''
    Eigendecomposition of Hermitian matrix

    Returns eigenvalues in ascending order and matrix with eigenvectors as columns
    '''
    mat              = check_hermitian(mat)
    arr_val, arr_vec = sla.eigh(mat)

    return arr_val, arr_vec
# ----------------------------------------
def expm_herm(mat : numpy.ndarray, scale : complex) -> numpy.ndarray:
    '''
    Returns exp(scale * mat) for Hermitian mat, through its eigendecomposition
    '''
    arr_val, arr_vec = herm_eig(mat)
    arr_phase        = numpy.exp(scale * arr_val)

    return (arr_vec * arr_phase) @ arr_vec.conj().T
# ----------------------------------------
def _as_density(state) -> tuple[numpy.ndarray, int]:
    # Avoid circular import, QuantumState depends on this module
    from qqa.linalg.quantum_state import QuantumState

    if isinstance(state, QuantumState):
        return state.to_density().data, state.num_qubits

    mat = numpy.asarray(state, dtype=complex)
    if mat.ndim == 1 or (mat.ndim == 2 and mat.shape[1] == 1):
        vec = mat.reshape(-1)
        mat = numpy.outer(vec, vec.conj())

    return mat, num_qubits_of(mat.shape[0])
# ----------------------------------------
def partial_trace(state, keep : list[int]):
    '''
    Traces out every qubit not in keep

    state: QuantumState, state vector or density matrix
    keep : Qubit indices to keep, the output keeps their relative order,
           the smallest kept index becomes qubit 0 of the output
    '''
    from qqa.linalg.quantum_state import QuantumState

    rho, nqubit = _as_density(state)
    keep        = sorted(set(keep))
    for qubit in keep:
        if not 0 <= qubit < nqubit:
            raise IndexOutOfRange(f'Qubit {qubit} outside register of {nqubit} qubits')

    # Axis a of the reshaped tensor holds qubit nqubit - 1 - a
    tensor = rho.reshape([2] * (2 * nqubit))
    l_drop = [qubit for qubit in range(nqubit) if qubit not in keep]
    nleft  = nqubit

    # Trace highest axes first so remaining axis numbers stay valid
    l_axis = sorted([nqubit - 1 - qubit for qubit in l_drop], reverse=True)
    for axis in l_axis:
        tensor = numpy.trace(tensor, axis1=axis, axis2=axis + nleft)
        nleft -= 1

    dim = 2 ** len(keep)
    red = tensor.reshape(dim, dim)

    return QuantumState.from_density(red)
# ----------------------------------------
def partial_transpose(state, first_j_qubits : int) -> numpy.ndarray:
    '''
    Transposes the leading (most significant) first_j_qubits qubits

    The bipartition is 2^j | 2^(K-j), as in the Kronecker factor order
    '''
    rho, nqubit = _as_density(state)
    if not 1 <= first_j_qubits <= nqubit - 1:
        raise IndexOutOfRange(f'Cut j={first_j_qubits} not in [1, {nqubit - 1}]')

    dim_a  = 2 ** first_j_qubits
    dim_b  = 2 ** (nqubit - first_j_qubits)
    tensor = rho.reshape(dim_a, dim_b, dim_a, dim_b)
    tensor = tensor.transpose(2, 1, 0, 3)

    return tensor.reshape(dim_a * dim_b, dim_a * dim_b)
# ----------------------------------------
def embed(op : numpy.ndarray, qubits : list[int], num_qubits : int) -> numpy.ndarray:
    '''
    Dense embedding of k-qubit operator acting on qubits into a num_qubits register

    qubits[0] is the least significant qubit of op
    '''
    op    = numpy.asarray(op, dtype=complex)
    ident = numpy.eye(2 ** num_qubits, dtype=complex)

    return apply_local(ident, op, qubits, num_qubits=num_qubits, sides='left')
# ----------------------------------------
def _apply_left(tensor : numpy.ndarray, op : numpy.ndarray, qubits : list[int], nqubit : int, offset : int) -> numpy.ndarray:
    nloc   = len(qubits)
    op_ten = op.reshape([2] * (2 * nloc))
    # Operator axes: first nloc are outputs, most significant local qubit first
    l_axis = [offset + nqubit - 1 - qubit for qubit in reversed(qubits)]
    tensor = numpy.tensordot(op_ten, tensor, axes=(list(range(nloc, 2 * nloc)), l_axis))
    # tensordot puts the new axes first, move them back into place
    tensor = numpy.moveaxis(tensor, list(range(nloc)), l_axis)

    return tensor
# ----------------------------------------
def apply_local(state : numpy.ndarray, op : numpy.ndarray, qubits : list[int], num_qubits : int = None, sides : str = 'auto') -> numpy.ndarray:
    '''
    Applies k-qubit operator to a subset of qubits without building the full embedding

    state     : Vector (op psi) or density matrix (op rho op^dagger)
    qubits    : Target qubits, qubits[0] is the least significant qubit of op
    sides     : auto (vector -> left, matrix -> both), left or both
    '''
    state  = numpy.asarray(state, dtype=complex)
    op     = numpy.asarray(op   , dtype=complex)
    nqubit = num_qubits if num_qubits is not None else num_qubits_of(state.shape[0])

    if len(set(qubits)) != len(qubits):
        raise IndexOutOfRange(f'Repeated qubits in {qubits}')

    for qubit in qubits:
        if not 0 <= qubit < nqubit:
            raise IndexOutOfRange(f'Qubit {qubit} outside register of {nqubit} qubits')

    if op.shape != (2 ** len(qubits), 2 ** len(qubits)):
        raise DimensionMismatch(f'Operator of shape {op.shape} cannot act on {len(qubits)} qubits')

    if state.ndim == 1:
        tensor = state.reshape([2] * nqubit)
        tensor = _apply_left(tensor, op, qubits, nqubit, offset=0)
        return tensor.reshape(-1)

    dim    = state.shape[0]
    tensor = state.reshape([2] * (2 * nqubit))
    tensor = _apply_left(tensor, op, qubits, nqubit, offset=0)
    if sides == 'left':
        return tensor.reshape(dim, dim)

    tensor = _apply_left(tensor, op.conj(), qubits, nqubit, offset=nqubit)

    return tensor.reshape(dim, dim)
# ----------------------------------------
def is_product_state(state, tol : float = 1e-10) -> bool:
    '''
    True if the density matrix equals the product of its single qubit marginals
    '''
    rho, nqubit = _as_density(state)
    l_marg      = [partial_trace(rho, [qubit]).data for qubit in reversed(range(nqubit))]
    prod        = kron(*l_marg)

    return bool(numpy.max(numpy.abs(prod - rho)) <= tol)
# ----------------------------------------
