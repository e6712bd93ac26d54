'''
Module with truncated bosonic ladder operators
'''
import math
from dataclasses import dataclass

import numpy

from qqa.encoding.encoding_map import EncodingMap, map_operator
# ----------------------------------------
@dataclass(frozen=True)
class TruncatedMode:
    '''
    Ladder and number operators of a bosonic mode with Fock states 0..cutoff_nc
    '''
    cutoff_nc : int
    lowering  : numpy.ndarray
    raising   : numpy.ndarray
    number    : numpy.ndarray
    # ----------------------------------
    @property
    def dim_d(self) -> int:
        '''
        Dimension of the truncated space, cutoff + 1
        '''
        return self.cutoff_nc + 1
    # ----------------------------------
    @staticmethod
    def from_cutoff(cutoff_nc : int) -> 'TruncatedMode':
        '''
        Builds mode keeping Fock states up to cutoff_nc
        '''
        if cutoff_nc < 1:
            raise ValueError(f'Cutoff must be at least 1, found {cutoff_nc}')

        dim   = cutoff_nc + 1
        lower = numpy.zeros((dim, dim), dtype=complex)
        for level in range(1, dim):
            lower[level - 1, level] = math.sqrt(level)

        raise_ = lower.conj().T

        return TruncatedMode(cutoff_nc=cutoff_nc, lowering=lower, raising=raise_, number=raise_ @ lower)
# ----------------------------------------
def mapped_field_ops(emap : EncodingMap) -> tuple[numpy.ndarray, numpy.ndarray, numpy.ndarray]:
    '''
    Returns encoded lowering, raising and number operators of a D = dim_d mode
    '''
    mode = TruncatedMode.from_cutoff(emap.dim_d - 1)

    op_a   = map_operator(mode.lowering, emap)
    op_adg = map_operator(mode.raising , emap)
    op_n   = map_operator(mode.number  , emap)

    return op_a, op_adg, op_n
# ----------------------------------------
