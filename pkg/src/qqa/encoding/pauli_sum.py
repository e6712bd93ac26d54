'''
Module holding PauliString and PauliSum classes and the decomposition of Hermitian
operators into Pauli strings

Letters are stored little endian (letters[q] acts on qubit q). Labels, as printed
and parsed, are written most significant qubit first, e.g. label 'ZX' is Z on
qubit 1 and X on qubit 0.
'''
from dataclasses import dataclass, field

import numpy
import scipy.linalg as sla

from dmu.logging.log_store import LogStore
from qqa.linalg.operators  import check_hermitian, num_qubits_of, DimensionMismatch

log = LogStore.add_logger('qqa:encoding:pauli_sum')

COEFF_TOL = 1e-12
LETTERS   = 'IXYZ'
# (x, z) bits of each letter
XZ_BITS   = {'I' : (0, 0), 'X' : (1, 0), 'Y' : (1, 1), 'Z' : (0, 1)}
XZ_LETTER = {value : key for key, value in XZ_BITS.items()}
# ----------------------------------------
@dataclass(frozen=True)
class PauliString:
    '''
    Real coefficient times a tensor product of Pauli matrices
    '''
    coeff   : float
    letters : tuple[str, ...]
    # ----------------------------------
    def __post_init__(self):
        for letter in self.letters:
            if letter not in LETTERS:
                raise ValueError(f'Invalid Pauli letter: {letter}')
    # ----------------------------------
    @staticmethod
    def from_label(label : str, coeff : float = 1.0) -> 'PauliString':
        '''
        Takes label written most significant qubit first, e.g. ZX
        '''
        return PauliString(coeff=float(coeff), letters=tuple(reversed(label.strip())))
    # ----------------------------------
    @property
    def label(self) -> str:
        '''
        Letters written most significant qubit first
        '''
        return ''.join(reversed(self.letters))
    # ----------------------------------
    @property
    def num_qubits(self) -> int:
        '''
        Length of the string
        '''
        return len(self.letters)
    # ----------------------------------
    @property
    def support(self) -> list[int]:
        '''
        Ascending list of qubits where the string is not the identity
        '''
        return [qubit for qubit, letter in enumerate(self.letters) if letter != 'I']
    # ----------------------------------
    @property
    def weight(self) -> int:
        '''
        Number of non-identity letters
        '''
        return len(self.support)
    # ----------------------------------
    def masks(self) -> tuple[int, int]:
        '''
        Returns X and Z bit masks
        '''
        xmask = 0
        zmask = 0
        for qubit, letter in enumerate(self.letters):
            xbit, zbit = XZ_BITS[letter]
            xmask     |= xbit << qubit
            zmask     |= zbit << qubit

        return xmask, zmask
    # ----------------------------------
    def to_matrix(self) -> numpy.ndarray:
        '''
        Dense matrix of the string without the coefficient
        '''
        xmask, zmask = self.masks()

        return _monomial_matrix(xmask, zmask, self.num_qubits)
    # ----------------------------------
    def __str__(self) -> str:
        return f'{self.coeff:.12g} * {self.label}'
# ----------------------------------------
def _popcount(arr : numpy.ndarray) -> numpy.ndarray:
    arr = numpy.asarray(arr, dtype=numpy.int64)
    cnt = numpy.zeros_like(arr)
    while numpy.any(arr):
        cnt += arr & 1
        arr  = arr >> 1

    return cnt
# ----------------------------------------
def _monomial_matrix(xmask : int, zmask : int, nqubit : int) -> numpy.ndarray:
    '''
    P |j> = i^{|x & z|} (-1)^{|z & j|} |j ^ x>
    '''
    dim     = 2 ** nqubit
    arr_col = numpy.arange(dim)
    arr_row = arr_col ^ xmask
    phase   = 1j ** bin(xmask & zmask).count('1')
    arr_sgn = (-1.0) ** _popcount(arr_col & zmask)

    mat = numpy.zeros((dim, dim), dtype=complex)
    mat[arr_row, arr_col] = phase * arr_sgn

    return mat
# ----------------------------------------
@dataclass
class PauliSum:
    '''
    Weighted sum of Pauli strings over num_qubits qubits, letter patterns are unique
    '''
    num_qubits : int
    terms      : list[PauliString] = field(default_factory=list)
    # ----------------------------------
    def __post_init__(self):
        l_label = [term.label for term in self.terms]
        if len(set(l_label)) != len(l_label):
            raise ValueError('Pauli sum contains repeated letter patterns')

        for term in self.terms:
            if term.num_qubits != self.num_qubits:
                raise DimensionMismatch(f'Term {term} does not act on {self.num_qubits} qubits')
    # ----------------------------------
    def __len__(self) -> int:
        return len(self.terms)
    # ----------------------------------
    def __iter__(self):
        return iter(self.terms)
    # ----------------------------------
    def to_dict(self) -> dict[str, float]:
        '''
        Maps label (most significant first) to coefficient
        '''
        return {term.label : term.coeff for term in self.terms}
    # ----------------------------------
    def to_matrix(self) -> numpy.ndarray:
        '''
        Dense matrix sum_k c_k P_k
        '''
        dim = 2 ** self.num_qubits
        mat = numpy.zeros((dim, dim), dtype=complex)
        for term in self.terms:
            mat += term.coeff * term.to_matrix()

        return mat
    # ----------------------------------
    def merge(self, other : 'PauliSum') -> 'PauliSum':
        '''
        Sum of two Pauli sums, coefficients of equal patterns are added
        '''
        if other.num_qubits != self.num_qubits:
            raise DimensionMismatch('Cannot merge Pauli sums on different registers')

        d_coeff = self.to_dict()
        for term in other.terms:
            d_coeff[term.label] = d_coeff.get(term.label, 0.0) + term.coeff

        l_term = [PauliString.from_label(label, coeff) for label, coeff in d_coeff.items() if abs(coeff) >= COEFF_TOL]

        return PauliSum(num_qubits=self.num_qubits, terms=l_term)
    # ----------------------------------
    def to_text(self) -> str:
        '''
        One `coeff * LETTERS` line per term
        '''
        return ''.join(f'{term}\n' for term in self.terms)
    # ----------------------------------
    @staticmethod
    def from_text(text : str) -> 'PauliSum':
        '''
        Parses output of to_text
        '''
        l_term = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith('#'):
                continue

            coeff, label = line.split('*')
            l_term.append(PauliString.from_label(label.strip(), float(coeff)))

        if len(l_term) == 0:
            raise ValueError('No Pauli terms found in text')

        return PauliSum(num_qubits=l_term[0].num_qubits, terms=l_term)
    # ----------------------------------
    def __str__(self) -> str:
        return self.to_text()
# ----------------------------------------
def pauli_decompose(mat : numpy.ndarray) -> PauliSum:
    '''
    Decomposes Hermitian matrix into Pauli strings, c_P = Tr(P H) / 2^K

    For a fixed X mask the traces over all Z masks are the Walsh-Hadamard transform
    of the vector h[j, j ^ x], which brings the cost down to O(4^K K)
    '''
    mat    = check_hermitian(mat)
    dim    = mat.shape[0]
    nqubit = num_qubits_of(dim)
    arr_j  = numpy.arange(dim)
    had    = sla.hadamard(dim) if dim > 1 else numpy.ones((1, 1))

    l_term = []
    for xmask in range(dim):
        arr_v  = mat[arr_j, arr_j ^ xmask]
        arr_tr = had @ arr_v
        for zmask in numpy.flatnonzero(numpy.abs(arr_tr) / dim >= COEFF_TOL):
            zmask = int(zmask)
            coeff = (1j ** bin(xmask & zmask).count('1')) * arr_tr[zmask] / dim
            if abs(coeff) < COEFF_TOL:
                continue

            letters = tuple(XZ_LETTER[((xmask >> qubit) & 1, (zmask >> qubit) & 1)] for qubit in range(nqubit))
            l_term.append(PauliString(coeff=float(coeff.real), letters=letters))

    l_term = sorted(l_term, key=lambda term : term.label)
    log.debug(f'Decomposed {nqubit}-qubit operator into {len(l_term)} Pauli strings')

    return PauliSum(num_qubits=nqubit, terms=l_term)
# ----------------------------------------
