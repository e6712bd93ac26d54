'''
Module with qudit to multi-qubit encodings

An encoding is the isometry M of shape 2^K x D whose column d is the
multi-qubit image of the qudit basis state |d>
'''
import math
from enum        import Enum
from dataclasses import dataclass

import numpy

from dmu.logging.log_store import LogStore
from qqa.linalg.operators  import kron, DimensionMismatch

log = LogStore.add_logger('qqa:encoding:encoding_map')
# ----------------------------------------
class DimensionTooSmall(ValueError):
    '''
    Raised when a qudit dimension below 2 is requested
    '''
    def __init__(self, message='Qudit dimension must be at least 2'):
        self.message = message
        super().__init__(self.message)
# ----------------------------------------
class EncodingScheme(str, Enum):
    '''
    Supported encodings
    '''
    BINARY    = 'binary'
    SYMMETRIC = 'symmetric'
    UNARY     = 'unary'
    # ----------------------------------
    def num_qubits(self, dim_d : int) -> int:
        '''
        Number of qubits needed to encode a D-level system
        '''
        if self == EncodingScheme.BINARY:
            return max(1, math.ceil(math.log2(dim_d)))

        if self == EncodingScheme.SYMMETRIC:
            return dim_d - 1

        return dim_d
# ----------------------------------------
@dataclass(frozen=True)
class EncodingMap:
    '''
    Isometry from a D-dimensional qudit into a K-qubit register
    '''
    scheme     : EncodingScheme
    dim_d      : int
    num_qubits : int
    isometry   : numpy.ndarray
    # ----------------------------------
    def __str__(self) -> str:
        return f'EncodingMap(scheme={self.scheme.value}, D={self.dim_d}, K={self.num_qubits})'
# ----------------------------------------
def _binary_columns(dim_d : int, nqubit : int) -> numpy.ndarray:
    mat = numpy.zeros((2 ** nqubit, dim_d), dtype=complex)
    for level in range(dim_d):
        mat[level, level] = 1

    return mat
# ----------------------------------------
def _symmetric_columns(dim_d : int, nqubit : int) -> numpy.ndarray:
    mat = numpy.zeros((2 ** nqubit, dim_d), dtype=complex)
    for level in range(dim_d):
        l_index = [index for index in range(2 ** nqubit) if bin(index).count('1') == level]
        amp     = 1 / math.sqrt(math.comb(nqubit, level))
        mat[l_index, level] = amp

    return mat
# ----------------------------------------
def _unary_columns(dim_d : int, nqubit : int) -> numpy.ndarray:
    mat = numpy.zeros((2 ** nqubit, dim_d), dtype=complex)
    for level in range(dim_d):
        mat[2 ** level, level] = 1

    return mat
# ----------------------------------------
def build_encoding(scheme : EncodingScheme, dim_d : int) -> EncodingMap:
    '''
    Builds isometry for a given scheme and qudit dimension
    '''
    scheme = EncodingScheme(scheme)
    if dim_d < 2:
        raise DimensionTooSmall(f'Cannot encode qudit of dimension {dim_d}')

    nqubit = scheme.num_qubits(dim_d)
    if   scheme == EncodingScheme.BINARY:
        mat = _binary_columns(dim_d, nqubit)
    elif scheme == EncodingScheme.SYMMETRIC:
        mat = _symmetric_columns(dim_d, nqubit)
    else:
        mat = _unary_columns(dim_d, nqubit)

    mat.setflags(write=False)
    log.debug(f'Built {scheme.value} encoding with D={dim_d}, K={nqubit}')

    return EncodingMap(scheme=scheme, dim_d=dim_d, num_qubits=nqubit, isometry=mat)
# ----------------------------------------
def map_operator(op_qudit : numpy.ndarray, emap : EncodingMap) -> numpy.ndarray:
    '''
    Returns M O M^dagger, the multi-qubit image of a qudit operator
    '''
    op_qudit = numpy.asarray(op_qudit, dtype=complex)
    if op_qudit.shape != (emap.dim_d, emap.dim_d):
        raise DimensionMismatch(f'Operator of shape {op_qudit.shape} does not act on D={emap.dim_d}')

    iso = emap.isometry

    return iso @ op_qudit @ iso.conj().T
# ----------------------------------------
def decode_operator(op_qubit : numpy.ndarray, emap : EncodingMap) -> numpy.ndarray:
    '''
    Returns M^dagger O M, restriction of multi-qubit operator to the feasible subspace
    '''
    op_qubit = numpy.asarray(op_qubit, dtype=complex)
    dim      = 2 ** emap.num_qubits
    if op_qubit.shape != (dim, dim):
        raise DimensionMismatch(f'Operator of shape {op_qubit.shape} does not act on K={emap.num_qubits}')

    iso = emap.isometry

    return iso.conj().T @ op_qubit @ iso
# ----------------------------------------
def encode_state(vec_qudit : numpy.ndarray, emap : EncodingMap) -> numpy.ndarray:
    '''
    Returns M psi for a qudit state vector
    '''
    vec_qudit = numpy.asarray(vec_qudit, dtype=complex).reshape(-1)
    if vec_qudit.size != emap.dim_d:
        raise DimensionMismatch(f'Vector of size {vec_qudit.size} is not a D={emap.dim_d} state')

    return emap.isometry @ vec_qudit
# ----------------------------------------
def feasible_projector(emap : EncodingMap) -> numpy.ndarray:
    '''
    Projector M M^dagger onto the feasible subspace
    '''
    iso = emap.isometry

    return iso @ iso.conj().T
# ----------------------------------------
def tensor_isometry(l_map : list[EncodingMap]) -> numpy.ndarray:
    '''
    Isometry of a register made of several modes

    l_map[0] is mode 1 and sits on the least significant qubit block
    '''
    l_iso = [emap.isometry for emap in reversed(l_map)]

    return kron(*l_iso)
# ----------------------------------------
def tensor_projector(l_map : list[EncodingMap]) -> numpy.ndarray:
    '''
    Feasible projector of a register made of several modes, see tensor_isometry
    '''
    l_proj = [feasible_projector(emap) for emap in reversed(l_map)]

    return kron(*l_proj)
# ----------------------------------------
