'''
Module with tests for entanglement and state comparison measures
'''
import math

import numpy
import pytest

from dmu.logging.log_store     import LogStore
from qqa.linalg                import test_utilities as tut
from qqa.linalg.operators      import IndexOutOfRange, DimensionMismatch
from qqa.linalg.quantum_state  import QuantumState
from qqa.encoding.encoding_map import EncodingScheme, build_encoding, encode_state
from qqa.encoding.mixer        import MixerName, named_mixer
from qqa.qaoa.thermal          import mixer_ground_state
from qqa.qaoa.metrics          import (
        Bipartition,
        log_negativity,
        von_neumann_entropy,
        relative_entropy,
        fidelity,
        trace_distance,
        mean_occupations)

log = LogStore.add_logger('qqa:test_metrics')
# --------------------------------------------
@pytest.fixture(scope='session', autouse=True)
def _initialize():
    LogStore.set_level('qqa:qaoa:metrics', 10)
# --------------------------------------------
def _werner(prob : float) -> QuantumState:
    rho = prob * tut.bell_state().to_density().data + (1 - prob) * numpy.eye(4) / 4

    return QuantumState.from_density(rho)
# --------------------------------------------
def test_bipartition():
    '''
    Cut is labelled by the dimensions of both sides
    '''
    assert str(Bipartition(1, 3)) == '2|4'
    assert str(Bipartition(2, 4)) == '4|4'

    for cut in [0, 3]:
        with pytest.raises(IndexOutOfRange):
            Bipartition(cut, 3)
# --------------------------------------------
def test_log_negativity_reference():
    '''
    Bell state has one ebit, product and maximally mixed states none
    '''
    cut = Bipartition(1, 2)

    assert math.isclose(log_negativity(tut.bell_state(), cut), 1, abs_tol=1e-12)
    assert log_negativity(QuantumState.basis(2, 2), cut) == 0
    assert log_negativity(tut.maximally_mixed(2), cut)   == 0

    with pytest.raises(DimensionMismatch):
        log_negativity(tut.bell_state(), Bipartition(1, 3))
# --------------------------------------------
@pytest.mark.parametrize('prob', [0.2, 0.5, 0.9])
def test_log_negativity_werner(prob : float):
    '''
    Werner states are entangled above p = 1/3
    '''
    value    = log_negativity(_werner(prob), Bipartition(1, 2))
    expected = max(0.0, math.log2((1 + 3 * prob) / 2))

    assert math.isclose(value, expected, abs_tol=1e-10)
# --------------------------------------------
@pytest.mark.parametrize('nqubit', [2, 3, 4, 5, 6, 7])
def test_log_negativity_one_excitation(nqubit : int):
    '''
    Symmetric one boson state over every cut, log2(1 + 2 sqrt(j (n - j)) / n)
    '''
    emap  = build_encoding(EncodingScheme.SYMMETRIC, nqubit + 1)
    level = numpy.zeros(nqubit + 1)
    level[1] = 1
    state = QuantumState.from_vector(encode_state(level, emap))

    for cut in range(1, nqubit):
        value    = log_negativity(state, Bipartition(cut, nqubit))
        expected = math.log2(1 + 2 * math.sqrt(cut * (nqubit - cut)) / nqubit)

        assert math.isclose(value, expected, abs_tol=1e-10)
        assert math.isclose(value, log_negativity(state, Bipartition(nqubit - cut, nqubit)), abs_tol=1e-10)
# --------------------------------------------
def test_log_negativity_mixer_ground_state():
    '''
    Ground state of the symmetric mixer coupling levels 0 and 1
    '''
    spec   = named_mixer(MixerName.SYM_H1, 3)
    ground = mixer_ground_state(spec.matrix)
    value  = log_negativity(ground.state, Bipartition(1, 2))

    assert math.isclose(value, 0.58, abs_tol=0.005)
# --------------------------------------------
def test_entropy():
    '''
    Zero for pure states, n ln 2 for the maximally mixed one
    '''
    assert von_neumann_entropy(tut.random_vector(3)) == 0
    assert math.isclose(von_neumann_entropy(tut.maximally_mixed(3)), 3 * math.log(2))
    assert math.isclose(von_neumann_entropy(QuantumState.basis(1, 2).to_density()), 0, abs_tol=1e-12)
# --------------------------------------------
def test_relative_entropy():
    '''
    Zero for equal states, ln d - S for the maximally mixed reference, infinite outside of the support
    '''
    rho = tut.random_density(2, rng=tut.get_rng(3))
    mix = tut.maximally_mixed(2)

    assert math.isclose(relative_entropy(rho, rho), 0, abs_tol=1e-9)
    assert math.isclose(relative_entropy(rho, mix), math.log(4) - von_neumann_entropy(rho), abs_tol=1e-9)
    assert relative_entropy(QuantumState.basis(0, 2), QuantumState.basis(1, 2)) == math.inf
    assert relative_entropy(mix, rho) >= 0

    with pytest.raises(DimensionMismatch):
        relative_entropy(rho, tut.maximally_mixed(3))
# --------------------------------------------
def test_fidelity():
    '''
    Symmetric, one for equal states, zero for orthogonal ones
    '''
    rho   = tut.random_density(2, rng=tut.get_rng(1))
    sigma = tut.random_density(2, rng=tut.get_rng(2))
    vec   = tut.random_vector(2, rng=tut.get_rng(3))

    assert math.isclose(fidelity(rho, rho), 1, abs_tol=1e-9)
    assert math.isclose(fidelity(rho, sigma), fidelity(sigma, rho), abs_tol=1e-9)
    assert math.isclose(fidelity(vec, vec.to_density()), 1, abs_tol=1e-9)
    assert math.isclose(fidelity(vec, tut.maximally_mixed(2)), 0.25, abs_tol=1e-12)
    assert fidelity(QuantumState.basis(0, 2), QuantumState.basis(3, 2)) == 0
    assert 0 <= fidelity(rho, sigma) <= 1
# --------------------------------------------
@pytest.mark.parametrize('seed', [1, 2, 3])
def test_trace_distance(seed : int):
    '''
    Bounded by the fidelity, 1 - sqrt(F) <= T <= sqrt(1 - F)
    '''
    rho   = tut.random_density(2, rank=2, rng=tut.get_rng(seed))
    sigma = tut.random_density(2, rng=tut.get_rng(seed + 10))
    dist  = trace_distance(rho, sigma)
    fid   = fidelity(rho, sigma)

    assert 1 - math.sqrt(fid) - 1e-9 <= dist <= math.sqrt(1 - fid) + 1e-9
    assert math.isclose(trace_distance(rho, rho), 0, abs_tol=1e-12)
    assert math.isclose(trace_distance(QuantumState.basis(0, 2), QuantumState.basis(1, 2)), 1)
# --------------------------------------------
@pytest.mark.parametrize('scheme', ['binary', 'symmetric', 'unary'])
def test_mean_occupations(scheme : str):
    '''
    Product of Fock states |1> on site 1 and |2> on site 2
    '''
    emap  = build_encoding(scheme, 3)
    vec   = numpy.kron(encode_state([0, 0, 1], emap), encode_state([0, 1, 0], emap))
    state = QuantumState.from_vector(vec)

    assert numpy.allclose(mean_occupations(state, [emap, emap]), [1, 2], atol=1e-12)
    assert numpy.allclose(mean_occupations(state.to_density(), [emap, emap]), [1, 2], atol=1e-12)

    with pytest.raises(DimensionMismatch):
        mean_occupations(state, [emap])
# --------------------------------------------
