'''
Module with feasible-subspace preserving mixing Hamiltonians

A partial mixer couples one pair of encoded levels:

    H = M (|d><d'| + |d'><d|) M^dagger

mixers are sums of those, possibly simplified, and must commute with the feasible
projector M M^dagger.
'''
import heapq
import itertools
import json
from enum        import Enum
from dataclasses import dataclass

import numpy

from dmu.logging.log_store      import LogStore
from qqa.linalg.operators       import kron, embed, is_product_state, IndexOutOfRange
from qqa.encoding.encoding_map  import EncodingMap, EncodingScheme, build_encoding, feasible_projector, decode_operator
from qqa.encoding.pauli_sum     import PauliSum, pauli_decompose
from qqa.encoding.trotter       import CircuitCost, RegisterGates, trotter_cost, layered_cost
from qqa.qaoa.thermal           import mixer_ground_state

log = LogStore.add_logger('qqa:encoding:mixer')

FEASIBILITY_TOL = 1e-12
_PAULI_X        = numpy.array([[0, 1], [1, 0]], dtype=complex)
# ----------------------------------------
class NameNotApplicable(ValueError):
    '''
    Raised when a named mixer is requested for a dimension or scheme it does not exist for
    '''
    def __init__(self, message='Mixer name not applicable'):
        self.message = message
        super().__init__(self.message)
# ----------------------------------------
class InfeasibleMixer(ValueError):
    '''
    Raised when a mixer would leak amplitude out of the feasible subspace
    '''
    def __init__(self, message='Mixer does not preserve the feasible subspace'):
        self.message = message
        super().__init__(self.message)
# ----------------------------------------
class MixerName(str, Enum):
    '''
    Mixers with a name, the D = 3 ones and the standard sum of X
    '''
    BINARY_H1 = 'BinaryH1'
    BINARY_H2 = 'BinaryH2'
    BINARY_H3 = 'BinaryH3'
    SYM_H1    = 'SymH1'
    SYM_H2    = 'SymH2'
    SYM_H3    = 'SymH3'
    SYM_OPT   = 'SymOpt'
    UNARY_H1  = 'UnaryH1'
    UNARY_H2  = 'UnaryH2'
    UNARY_H3  = 'UnaryH3'
    STANDARD  = 'Standard'
# ----------------------------------------
class SearchMode(str, Enum):
    '''
    SingleTerm: cheapest mixer term, ConnectedSet: cheapest set whose pairs connect all levels
    '''
    SINGLE_TERM   = 'SingleTerm'
    CONNECTED_SET = 'ConnectedSet'
# ----------------------------------------
# Pairs coupled by the named D = 3 mixers
_NAMED_PAIRS = {
        MixerName.BINARY_H1 : (EncodingScheme.BINARY   , [(0, 1)]),
        MixerName.BINARY_H2 : (EncodingScheme.BINARY   , [(0, 2)]),
        MixerName.BINARY_H3 : (EncodingScheme.BINARY   , [(1, 2)]),
        MixerName.SYM_H1    : (EncodingScheme.SYMMETRIC, [(0, 1)]),
        MixerName.SYM_H2    : (EncodingScheme.SYMMETRIC, [(0, 2)]),
        MixerName.SYM_H3    : (EncodingScheme.SYMMETRIC, [(1, 2)]),
        MixerName.SYM_OPT   : (EncodingScheme.SYMMETRIC, [(0, 1), (1, 2)]),
        MixerName.UNARY_H1  : (EncodingScheme.UNARY    , [(0, 1)]),
        MixerName.UNARY_H2  : (EncodingScheme.UNARY    , [(0, 2)]),
        MixerName.UNARY_H3  : (EncodingScheme.UNARY    , [(1, 2)]),
        }
# ----------------------------------------
@dataclass(frozen=True)
class MixerSpec:
    '''
    Mixing Hamiltonian acting on the qubits of one encoded qudit
    '''
    scheme : EncodingScheme
    dim_d  : int
    pairs  : tuple[tuple[int, int], ...]
    matrix : numpy.ndarray
    pauli  : PauliSum
    name   : str = 'custom'
    # ----------------------------------
    @property
    def num_qubits(self) -> int:
        '''
        Number of qubits the mixer acts on
        '''
        return self.pauli.num_qubits
    # ----------------------------------
    @property
    def cost(self) -> CircuitCost:
        '''
        CNOT cost of one Trotter step
        '''
        return trotter_cost(self.pauli)
    # ----------------------------------
    def to_text(self) -> str:
        '''
        JSON header line followed by the Pauli text form
        '''
        header = {
                'name'  : self.name,
                'scheme': self.scheme.value,
                'dim_d' : self.dim_d,
                'pairs' : [list(pair) for pair in self.pairs],
                }

        return f'# {json.dumps(header, sort_keys=True)}\n{self.pauli.to_text()}'
    # ----------------------------------
    def __str__(self) -> str:
        return f'MixerSpec(name={self.name}, scheme={self.scheme.value}, D={self.dim_d}, pairs={list(self.pairs)})'
# ----------------------------------------
def leakage(matrix : numpy.ndarray, projector : numpy.ndarray) -> float:
    '''
    Largest entry of (I - P) H P, zero for feasibility preserving H
    '''
    ident = numpy.eye(projector.shape[0])

    return float(numpy.max(numpy.abs((ident - projector) @ matrix @ projector)))
# ----------------------------------------
def coupled_pairs(matrix : numpy.ndarray, emap : EncodingMap, tol : float = FEASIBILITY_TOL) -> tuple[tuple[int, int], ...]:
    '''
    Pairs (d, d') with d < d' whose encoded states are coupled by the operator
    '''
    red = decode_operator(matrix, emap)
    l_pair = []
    for lev_1, lev_2 in itertools.combinations(range(emap.dim_d), 2):
        if abs(red[lev_1, lev_2]) > tol:
            l_pair.append((lev_1, lev_2))

    return tuple(l_pair)
# ----------------------------------------
def _make_spec(matrix : numpy.ndarray, emap : EncodingMap, name : str) -> MixerSpec:
    proj = feasible_projector(emap)
    leak = leakage(matrix, proj)
    if leak > FEASIBILITY_TOL:
        raise InfeasibleMixer(f'Mixer {name} leaks {leak:.3e} out of the feasible subspace')

    pauli = pauli_decompose(matrix)
    pairs = coupled_pairs(matrix, emap)

    return MixerSpec(scheme=emap.scheme, dim_d=emap.dim_d, pairs=pairs, matrix=matrix, pauli=pauli, name=name)
# ----------------------------------------
def _pair_matrix(emap : EncodingMap, lev_1 : int, lev_2 : int) -> numpy.ndarray:
    iso = emap.isometry
    col = iso[:, [lev_1]]
    row = iso[:, [lev_2]].conj().T

    mat = col @ row

    return mat + mat.conj().T
# ----------------------------------------
def partial_mixer(emap : EncodingMap, lev_1 : int, lev_2 : int) -> MixerSpec:
    '''
    Partial mixer swapping the encoded levels lev_1 < lev_2
    '''
    if not 0 <= lev_1 < lev_2 <= emap.dim_d - 1:
        raise IndexOutOfRange(f'Invalid pair ({lev_1}, {lev_2}) for D={emap.dim_d}')

    matrix = _pair_matrix(emap, lev_1, lev_2)

    return _make_spec(matrix, emap, name=f'pair_{lev_1}_{lev_2}')
# ----------------------------------------
def standard_mixer_matrix(num_qubits : int) -> numpy.ndarray:
    '''
    sum_k X_k on num_qubits qubits
    '''
    dim = 2 ** num_qubits
    mat = numpy.zeros((dim, dim), dtype=complex)
    for qubit in range(num_qubits):
        mat += embed(_PAULI_X, [qubit], num_qubits)

    return mat
# ----------------------------------------
def named_mixer(name : MixerName, dim_d : int, scheme : EncodingScheme = EncodingScheme.SYMMETRIC) -> MixerSpec:
    '''
    Returns named mixer

    name  : D = 3 mixers (BinaryH1...UnaryH3, SymOpt) or Standard
    scheme: Only used by Standard, the other names fix the scheme
    '''
    name = MixerName(name)
    if name == MixerName.STANDARD:
        emap   = build_encoding(scheme, dim_d)
        matrix = standard_mixer_matrix(emap.num_qubits)
        proj   = feasible_projector(emap)
        if leakage(matrix, proj) > FEASIBILITY_TOL:
            raise NameNotApplicable(f'Standard mixer does not preserve the {emap.scheme.value} feasible subspace for D={dim_d}')

        return _make_spec(matrix, emap, name=name.value)

    if dim_d != 3:
        raise NameNotApplicable(f'Mixer {name.value} is only defined for D=3, requested D={dim_d}')

    scheme, l_pair = _NAMED_PAIRS[name]
    emap   = build_encoding(scheme, dim_d)
    matrix = sum(_pair_matrix(emap, lev_1, lev_2) for lev_1, lev_2 in l_pair)

    return _make_spec(matrix, emap, name=name.value)
# ----------------------------------------
def multi_mode_mixer(spec : MixerSpec, num_modes : int) -> tuple[numpy.ndarray, PauliSum]:
    '''
    sum_l I x ... x H_M x ... x I over num_modes modes, mode 1 on the least significant block
    '''
    dim    = 2 ** spec.num_qubits
    ident  = numpy.eye(dim, dtype=complex)
    matrix = 0
    for mode in range(num_modes):
        l_fac  = [spec.matrix if index == mode else ident for index in reversed(range(num_modes))]
        matrix = matrix + kron(*l_fac)

    return matrix, pauli_decompose(matrix)
# ----------------------------------------
def _binary_candidate(emap : EncodingMap, lev_1 : int, lev_2 : int, cmask : int) -> numpy.ndarray:
    '''
    Flip of the bits where the levels differ, controlled on the bits in cmask
    taking the values they have in lev_1
    '''
    dim   = 2 ** emap.num_qubits
    xmask = lev_1 ^ lev_2
    fixed = cmask | xmask
    mat   = numpy.zeros((dim, dim), dtype=complex)
    for index in range(dim):
        if (index & fixed) != (lev_1 & fixed):
            continue

        mat[index ^ xmask, index] = 1
        mat[index, index ^ xmask] = 1

    return mat
# ----------------------------------------
def _candidate_matrices(emap : EncodingMap) -> list[tuple[str, numpy.ndarray]]:
    l_cand = []
    for lev_1, lev_2 in itertools.combinations(range(emap.dim_d), 2):
        if emap.scheme != EncodingScheme.BINARY:
            l_cand.append((f'pair_{lev_1}_{lev_2}', _pair_matrix(emap, lev_1, lev_2)))
            continue

        xmask  = lev_1 ^ lev_2
        l_free = [qubit for qubit in range(emap.num_qubits) if not xmask >> qubit & 1]
        # Fewer controls first, all controls is the plain partial mixer
        for ndrop in range(len(l_free), -1, -1):
            for l_ctrl in itertools.combinations(l_free, len(l_free) - ndrop):
                cmask = sum(1 << qubit for qubit in l_ctrl)
                name  = f'pair_{lev_1}_{lev_2}_ctrl_{cmask}'
                l_cand.append((name, _binary_candidate(emap, lev_1, lev_2, cmask)))

    return l_cand
# ----------------------------------------
@dataclass(frozen=True)
class _Candidate:
    name  : str
    spec  : MixerSpec
    cost  : CircuitCost
# ----------------------------------------
def _feasible_candidates(emap : EncodingMap) -> list[_Candidate]:
    proj   = feasible_projector(emap)
    l_cand = []
    s_seen = set()
    for name, matrix in _candidate_matrices(emap):
        if leakage(matrix, proj) > FEASIBILITY_TOL:
            log.debug(f'Dropping infeasible candidate {name}')
            continue

        spec = _make_spec(matrix, emap, name=name)
        key  = (spec.pairs, tuple(sorted(spec.pauli.to_dict().items())))
        if key in s_seen:
            continue

        s_seen.add(key)
        l_cand.append(_Candidate(name=name, spec=spec, cost=spec.cost))

    log.debug(f'Found {len(l_cand)} feasible candidates for {emap}')

    return l_cand
# ----------------------------------------
def _sort_key(cand : _Candidate) -> tuple[int, int]:
    return cand.cost.total, cand.cost.single_qubit_rotations
# ----------------------------------------
def _merge_components(state : tuple, pairs : tuple) -> tuple:
    l_comp = [set(comp) for comp in state]
    for lev_1, lev_2 in pairs:
        comp_1 = next(comp for comp in l_comp if lev_1 in comp)
        comp_2 = next(comp for comp in l_comp if lev_2 in comp)
        if comp_1 is comp_2:
            continue

        comp_1 |= comp_2
        l_comp.remove(comp_2)

    return tuple(sorted(tuple(sorted(comp)) for comp in l_comp))
# ----------------------------------------
def _connected_search(l_cand : list[_Candidate], dim_d : int) -> list[_Candidate]:
    '''
    Uniform cost search over partitions of the levels, returns cheapest connecting set
    '''
    start   = tuple((level,) for level in range(dim_d))
    counter = itertools.count()
    l_heap  = [(0, next(counter), start, [])]
    d_best  = {start : 0}
    while l_heap:
        cost, _, state, l_used = heapq.heappop(l_heap)
        if len(state) == 1:
            return [l_cand[index] for index in l_used]

        if cost > d_best.get(state, cost):
            continue

        for index, cand in enumerate(l_cand):
            new_state = _merge_components(state, cand.spec.pairs)
            if new_state == state:
                continue

            new_cost = cost + cand.cost.total
            if new_cost >= d_best.get(new_state, new_cost + 1):
                continue

            d_best[new_state] = new_cost
            heapq.heappush(l_heap, (new_cost, next(counter), new_state, l_used + [index]))

    raise InfeasibleMixer(f'No set of candidates connects all {dim_d} levels')
# ----------------------------------------
def best_candidate_mixer(scheme : EncodingScheme, dim_d : int, mode : SearchMode = SearchMode.SINGLE_TERM) -> tuple[MixerSpec, CircuitCost]:
    '''
    Mixer with the lowest CNOT count for a D-level system

    For symmetric encodings, and binary ones with D = 2^K, the standard mixer is returned
    '''
    scheme = EncodingScheme(scheme)
    mode   = SearchMode(mode)
    emap   = build_encoding(scheme, dim_d)

    one_to_one = scheme == EncodingScheme.BINARY and dim_d == 2 ** emap.num_qubits
    if scheme == EncodingScheme.SYMMETRIC or one_to_one:
        spec = named_mixer(MixerName.STANDARD, dim_d, scheme)
        log.debug(f'Using standard mixer for {emap}')
        return spec, spec.cost

    l_cand = _feasible_candidates(emap)
    if mode == SearchMode.SINGLE_TERM:
        best = min(l_cand, key=_sort_key)
        log.info(f'Best single term for {emap}: {best.name} with {best.cost.total} CNOTs')
        return best.spec, best.cost

    l_used = _connected_search(l_cand, dim_d)
    matrix = sum(cand.spec.matrix for cand in l_used)
    name   = '+'.join(cand.name for cand in l_used)
    spec   = _make_spec(matrix, emap, name=name)
    log.info(f'Best connected set for {emap}: {name} with {spec.cost.total} CNOTs')

    return spec, spec.cost
# ----------------------------------------
def budget_parts(scheme : EncodingScheme, dim_d : int, layers : int, spec : MixerSpec | None = None) -> dict[str, CircuitCost]:
    '''
    CNOT budget split into preparation, mixer layers and measurement

    spec: Mixer to count, by default the cheapest single term one
    '''
    if spec is None:
        spec, _ = best_candidate_mixer(scheme, dim_d, SearchMode.SINGLE_TERM)

    ground = mixer_ground_state(spec.matrix)

    return register_budget(spec, num_modes=1, layers=layers, entangled_prep=not is_product_state(ground.state))
# ----------------------------------------
def total_cost(d_part : dict[str, CircuitCost]) -> CircuitCost:
    '''
    Sum of the parts of a budget
    '''
    return d_part['preparation'] + d_part['mixer'] + d_part['measurement']
# ----------------------------------------
def cnot_budget(scheme : EncodingScheme, dim_d : int, layers : int) -> CircuitCost:
    '''
    Preparation + layers * mixer + measurement CNOT counts
    '''
    total = total_cost(budget_parts(scheme, dim_d, layers))

    log.debug(f'Budget for {scheme}, D={dim_d}, p={layers}: {total.total} CNOTs')

    return total
# ----------------------------------------
def register_budget(spec : MixerSpec, num_modes : int, layers : int, entangled_prep : bool) -> dict[str, CircuitCost]:
    '''
    Budget of a register made of num_modes copies of the encoded mode, each mixed by spec

    entangled_prep: True when the initial state needs entangling gates, e.g. a thermofield double
    '''
    gates = register_gates(spec, num_modes, entangled_prep)

    return {
            'preparation' : CircuitCost(cnot_nearest=len(gates.preparation)),
            'mixer'       : layered_cost(spec.pauli, layers).scaled(num_modes),
            'measurement' : CircuitCost(cnot_nearest=len(gates.measurement)),
            }
# ----------------------------------------
def register_gates(spec : MixerSpec, num_modes : int, entangled_prep : bool) -> RegisterGates:
    '''
    Qubits touched by the preparation and measurement CNOTs of a register of num_modes modes

    Preparation: one CNOT per register qubit. Measurement, symmetric encoding only:
    D - 2 CNOTs per mode on neighbouring qubits of the mode
    '''
    nqubit = spec.num_qubits
    l_prep = list(range(num_modes * nqubit)) if entangled_prep else []
    l_pair = []
    if spec.scheme == EncodingScheme.SYMMETRIC:
        for mode in range(num_modes):
            offset  = mode * nqubit
            l_pair += [(offset + index, offset + index + 1) for index in range(spec.dim_d - 2)]

    return RegisterGates(preparation=tuple(l_prep), measurement=tuple(l_pair))
# ----------------------------------------
