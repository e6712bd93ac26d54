'''
Module with tests for the feasibility preserving mixers and their CNOT budgets
'''
import json

import numpy
import pytest

from dmu.logging.log_store     import LogStore
from qqa.linalg.operators      import expm_herm, IndexOutOfRange
from qqa.encoding.encoding_map import EncodingScheme, build_encoding, feasible_projector, tensor_projector
from qqa.encoding.pauli_sum    import PauliSum
from qqa.encoding.mixer        import (
        MixerName,
        SearchMode,
        NameNotApplicable,
        leakage,
        partial_mixer,
        named_mixer,
        multi_mode_mixer,
        best_candidate_mixer,
        budget_parts,
        cnot_budget,
        register_budget,
        register_gates,
        total_cost)
from qqa.qaoa.thermal          import binary_cho_mixer

log = LogStore.add_logger('qqa:test_mixer')
# --------------------------------------------
@pytest.fixture(scope='session', autouse=True)
def _initialize():
    LogStore.set_level('qqa:encoding:mixer', 10)
# --------------------------------------------
def _connected(pairs : tuple, dim_d : int) -> bool:
    l_comp = [{level} for level in range(dim_d)]
    for lev_1, lev_2 in pairs:
        comp_1 = next(comp for comp in l_comp if lev_1 in comp)
        comp_2 = next(comp for comp in l_comp if lev_2 in comp)
        if comp_1 is not comp_2:
            comp_1 |= comp_2
            l_comp.remove(comp_2)

    return len(l_comp) == 1
# --------------------------------------------
@pytest.mark.parametrize('name, total, nlong, pairs', [
    ('BinaryH1',  2, 0, ((0, 1),)),
    ('BinaryH2',  2, 0, ((0, 2),)),
    ('BinaryH3',  4, 0, ((1, 2),)),
    ('SymH1'   ,  4, 0, ((0, 1),)),
    ('SymH2'   ,  4, 0, ((0, 2),)),
    ('SymH3'   ,  4, 0, ((1, 2),)),
    ('SymOpt'  ,  0, 0, ((0, 1), (1, 2))),
    ('UnaryH1' , 12, 0, ((0, 1),)),
    ('UnaryH2' , 12, 4, ((0, 2),)),
    ('UnaryH3' , 12, 0, ((1, 2),))])
def test_named_mixer_cost(name : str, total : int, nlong : int, pairs : tuple):
    '''
    CNOT counts of the three level mixers
    '''
    spec = named_mixer(name, 3)

    assert spec.cost.total           == total
    assert spec.cost.cnot_long_range == nlong
    assert spec.pairs                == pairs
    assert spec.name                 == name
# --------------------------------------------
@pytest.mark.parametrize('name', [name for name in MixerName if name != MixerName.STANDARD])
def test_named_mixer_feasible(name : MixerName):
    '''
    Named mixers commute with the feasible projector
    '''
    spec = named_mixer(name, 3)
    emap = build_encoding(spec.scheme, 3)
    proj = feasible_projector(emap)

    assert leakage(spec.matrix, proj) <= 1e-12
    assert numpy.allclose(spec.matrix @ proj, proj @ spec.matrix, atol=1e-12)
    assert numpy.allclose(spec.pauli.to_matrix(), spec.matrix, atol=1e-12)
# --------------------------------------------
def test_named_mixer_not_applicable():
    '''
    Three level names need D = 3, the standard mixer needs a preserved subspace
    '''
    with pytest.raises(NameNotApplicable):
        named_mixer(MixerName.BINARY_H1, 4)

    with pytest.raises(NameNotApplicable):
        named_mixer(MixerName.STANDARD, 3, EncodingScheme.UNARY)

    with pytest.raises(NameNotApplicable):
        named_mixer(MixerName.STANDARD, 3, EncodingScheme.BINARY)

    with pytest.raises(ValueError):
        named_mixer('NotAMixer', 3)
# --------------------------------------------
@pytest.mark.parametrize('scheme, dim_d', [('symmetric', 3), ('symmetric', 6), ('binary', 4), ('binary', 8)])
def test_standard_mixer(scheme : str, dim_d : int):
    '''
    Sum of X preserves the symmetric subspace and the complete binary one
    '''
    spec = named_mixer(MixerName.STANDARD, dim_d, scheme)

    assert spec.cost.total == 0
    assert _connected(spec.pairs, dim_d)
# --------------------------------------------
def test_partial_mixer():
    '''
    Pair mixer couples only its levels
    '''
    emap = build_encoding(EncodingScheme.UNARY, 5)
    spec = partial_mixer(emap, 1, 3)

    assert spec.pairs == ((1, 3),)
    assert leakage(spec.matrix, feasible_projector(emap)) <= 1e-12

    with pytest.raises(IndexOutOfRange):
        partial_mixer(emap, 3, 1)

    with pytest.raises(IndexOutOfRange):
        partial_mixer(emap, 0, 5)
# --------------------------------------------
def test_multi_mode_mixer():
    '''
    Two mode binary H1 mixer is I x H + H x I
    '''
    spec          = named_mixer(MixerName.BINARY_H1, 3)
    matrix, pauli = multi_mode_mixer(spec, 2)

    assert numpy.allclose(matrix, binary_cho_mixer())
    assert numpy.allclose(pauli.to_matrix(), matrix, atol=1e-12)
    assert pauli.num_qubits == 4
# --------------------------------------------
@pytest.mark.parametrize('name', ['BinaryH2', 'SymOpt', 'UnaryH1'])
def test_multi_mode_evolution_feasible(name : str):
    '''
    exp(-i nu H_M) keeps random feasible states feasible
    '''
    spec      = named_mixer(name, 3)
    emap      = build_encoding(spec.scheme, 3)
    proj      = tensor_projector([emap, emap])
    matrix, _ = multi_mode_mixer(spec, 2)
    rng       = numpy.random.default_rng(5)

    for _ in range(100):
        nu  = rng.uniform(0, 2 * numpy.pi)
        vec = proj @ (rng.normal(size=proj.shape[0]) + 1j * rng.normal(size=proj.shape[0]))
        vec = vec / numpy.linalg.norm(vec)
        out = expm_herm(matrix, -1j * nu) @ vec

        assert numpy.max(numpy.abs(out - proj @ out)) <= 1e-10
# --------------------------------------------
def test_to_text():
    '''
    Header line holds name, scheme, dimension and pairs
    '''
    spec   = named_mixer(MixerName.SYM_OPT, 3)
    text   = spec.to_text()
    header = json.loads(text.splitlines()[0].lstrip('# '))

    assert header == {'name' : 'SymOpt', 'scheme' : 'symmetric', 'dim_d' : 3, 'pairs' : [[0, 1], [1, 2]]}
    assert numpy.allclose(PauliSum.from_text(text).to_matrix(), spec.matrix, atol=1e-10)
    print(spec)
# --------------------------------------------
def test_best_binary_five():
    '''
    For D = 5 a single control on the leading qubit is enough
    '''
    spec, cost = best_candidate_mixer(EncodingScheme.BINARY, 5)
    emap       = build_encoding(EncodingScheme.BINARY, 5)

    assert cost.total == 2
    assert leakage(spec.matrix, feasible_projector(emap)) <= 1e-12
    assert spec.name.startswith('pair_0_1')
# --------------------------------------------
@pytest.mark.parametrize('scheme', ['symmetric', 'binary'])
def test_best_standard(scheme : str):
    '''
    Symmetric encodings and complete binary ones use the standard mixer
    '''
    dim_d      = 4
    spec, cost = best_candidate_mixer(scheme, dim_d)

    assert spec.name == MixerName.STANDARD.value
    assert cost.total == 0
# --------------------------------------------
@pytest.mark.parametrize('scheme', ['binary', 'unary'])
@pytest.mark.parametrize('dim_d' , [3, 5, 6])
def test_best_connected(scheme : str, dim_d : int):
    '''
    Connected set couples every level and is never cheaper than a single term
    '''
    single, cost_single = best_candidate_mixer(scheme, dim_d, SearchMode.SINGLE_TERM)
    spec  , cost        = best_candidate_mixer(scheme, dim_d, SearchMode.CONNECTED_SET)
    emap                = build_encoding(scheme, dim_d)

    assert _connected(spec.pairs, dim_d)
    assert cost.total >= cost_single.total
    assert leakage(spec.matrix, feasible_projector(emap)) <= 1e-12
    assert leakage(single.matrix, feasible_projector(emap)) <= 1e-12
# --------------------------------------------
@pytest.mark.parametrize('layers', [1, 2, 5])
def test_cnot_budget(layers : int):
    '''
    Budgets for D = 5: binary 2p, symmetric D - 2 for the measurement, unary 80p + 5
    '''
    assert cnot_budget(EncodingScheme.BINARY   , 5, layers).total == 2 * layers
    assert cnot_budget(EncodingScheme.SYMMETRIC, 5, layers).total == 3
    assert cnot_budget(EncodingScheme.UNARY    , 5, layers).total == 80 * layers + 5
# --------------------------------------------
def test_budget_parts():
    '''
    Unary ground state needs entangling preparation
    '''
    d_part = budget_parts(EncodingScheme.UNARY, 3, layers=2)

    assert d_part['preparation'].total == 3
    assert d_part['mixer'].total       == 24
    assert d_part['measurement'].total == 0
    assert total_cost(d_part).total    == 27
# --------------------------------------------
def test_register_budget():
    '''
    Two mode register with a thermofield double preparation
    '''
    spec   = named_mixer(MixerName.SYM_H1, 3)
    d_part = register_budget(spec, num_modes=2, layers=5, entangled_prep=True)

    assert d_part['preparation'].total == 4
    assert d_part['mixer'].total       == 40
    assert d_part['measurement'].total == 2
# --------------------------------------------
@pytest.mark.parametrize('name, num_modes, nprep, l_pair', [
    (MixerName.SYM_OPT  , 2, 4, [(0, 1), (2, 3)]),
    (MixerName.BINARY_H2, 2, 4, []),
    (MixerName.UNARY_H1 , 1, 3, [])])
def test_register_gates(name : MixerName, num_modes : int, nprep : int, l_pair : list):
    '''
    Preparation and measurement CNOTs are those charged by the register budget
    '''
    spec   = named_mixer(name, 3)
    gates  = register_gates(spec, num_modes=num_modes, entangled_prep=True)
    d_part = register_budget(spec, num_modes=num_modes, layers=1, entangled_prep=True)

    assert gates.preparation == tuple(range(nprep))
    assert list(gates.measurement) == l_pair
    assert gates.cost.total == d_part['preparation'].total + d_part['measurement'].total

    gates = register_gates(spec, num_modes=num_modes, entangled_prep=False)
    assert gates.preparation == ()
# --------------------------------------------
