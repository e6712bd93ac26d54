'''
Module with tests for the experiment runners
'''
import os
import math

import numpy
import pandas as pnd
import pytest

from dmu.logging.log_store             import LogStore
from qqa.linalg                        import test_utilities as tut
from qqa.encoding.mixer                import cnot_budget
from qqa.experiments.experiment_config import ConfigError
from qqa.experiments.experiment_result import ExperimentResult, SCHEMA_VERSION
from qqa.qaoa.ansatz                   import NoiseModel
from qqa.qaoa.optimizer                import optimize
from qqa.experiments                   import runners
from qqa.experiments.runners           import point_seed, run_experiment

log = LogStore.add_logger('qqa:test_runners')

THERMAL_SMALL = {
        'encodings' : [{'scheme' : 'binary', 'mixer' : 'BinaryH2'}, {'scheme' : 'symmetric', 'mixer' : 'SymOpt'}],
        'betas'     : [0.5],
        'layers'    : [1],
        'noise_eps' : [0.0, 0.05],
        'restarts'  : 1,
        'max_evals' : 100,
        }
WEAK_OCCUPATIONS = [0.28, 0.72, 0.72, 0.28]
# --------------------------------------------
@pytest.fixture(scope='session', autouse=True)
def _initialize():
    LogStore.set_level('qqa:experiments:runners', 10)
# --------------------------------------------
def _read(path : str) -> bytes:
    with open(path, 'rb') as ifile:
        return ifile.read()
# --------------------------------------------
def test_point_seed():
    '''
    Seeds depend on the global seed and the point, not on the order
    '''
    assert point_seed(42, 3) == point_seed(42, 3)
    assert point_seed(42, 3) != point_seed(42, 4)
    assert point_seed(42, 3) != point_seed(43, 3)
# --------------------------------------------
@pytest.mark.parametrize('mixer, nearest, long_range, ln_1', [
    ('BinaryH1', 2, 0, 0.00),
    ('BinaryH2', 2, 0, 0.00),
    ('BinaryH3', 4, 0, 1.00),
    ('SymH1'   , 4, 0, 0.58),
    ('SymH2'   , 4, 0, 1.00),
    ('SymH3'   , 4, 0, 0.58),
    ('SymOpt'  , 0, 0, 0.00)])
def test_table1_two_qubit(mixer : str, nearest : int, long_range : int, ln_1 : float):
    '''
    Gate counts and negativities of the two qubit mixers
    '''
    conf = tut.get_config('table1', 'table1')
    df   = run_experiment(conf).to_dataframe()
    row  = df[df.mixer == mixer].iloc[0]

    assert row.cnot_nearest    == nearest
    assert row.cnot_long_range == long_range
    assert row.cnot_total      == nearest + long_range
    assert math.isclose(row.ln_cut_1, ln_1, abs_tol=0.005)
    assert math.isnan(row.ln_cut_2)
    assert row.entangling_measurement == mixer.startswith('Sym')
# --------------------------------------------
def test_table1_unary():
    '''
    Unary mixers need 12 CNOTs, the one skipping a qubit uses long range gates, ground states are singlets
    '''
    conf = tut.get_config('table1', 'table1_unary')
    df   = run_experiment(conf).to_dataframe()
    df   = df[df.scheme == 'unary']

    assert df.cnot_total.tolist()      == [12, 12, 12]
    assert df.cnot_long_range.tolist() == [ 0,  4,  0]
    assert numpy.allclose(df.ln_cut_1, [0, 1, 1], atol=0.005)
    assert numpy.allclose(df.ln_cut_2, [1, 1, 0], atol=0.005)
# --------------------------------------------
def test_table1_outputs():
    '''
    CSV and JSON land in the output directory, JSON reloads
    '''
    conf = tut.get_config('table1', 'table1_outputs')
    run_experiment(conf)

    csv_path = f'{conf.output_dir}/table1.csv'
    jsn_path = f'{conf.output_dir}/table1.json'

    assert os.path.isfile(csv_path)
    assert len(pnd.read_csv(csv_path)) == 10

    res = ExperimentResult.from_json(jsn_path)
    assert res['metadata']['schema_version'] == SCHEMA_VERSION
    assert res['config']['experiment']       == 'table1'
    assert not res['metadata']['budget_exhausted']
# --------------------------------------------
def test_fig_cnot():
    '''
    Single term budgets agree with the budget function, D = 5 values
    '''
    conf = tut.get_config('fig_cnot', 'fig_cnot', dims=[3, 5], layers=2)
    df   = run_experiment(conf).to_dataframe()

    assert len(df) == 3 * 2 * 2

    df_single = df[df['mode'] == 'SingleTerm']
    for row in df_single.itertuples():
        assert row.budget_total == cnot_budget(row.scheme, row.dim_d, 2).total

    d_budget = df_single[df_single.dim_d == 5].set_index('scheme').budget_total.to_dict()
    assert d_budget == {'binary' : 4, 'symmetric' : 3, 'unary' : 165}

    df_conn = df[df['mode'] == 'ConnectedSet'].set_index(['scheme', 'dim_d'])
    df_sing = df_single.set_index(['scheme', 'dim_d'])
    assert (df_conn.cnot_total >= df_sing.cnot_total).all()
# --------------------------------------------
def test_fig_ln():
    '''
    Negativity of the one boson symmetric state is symmetric under j -> n - j
    '''
    conf = tut.get_config('fig_ln', 'fig_ln', qubits=[2, 3, 4, 5])
    df   = run_experiment(conf).to_dataframe()

    assert len(df) == 1 + 2 + 3 + 4
    assert math.isclose(df[df.num_qubits == 2].log_negativity.iloc[0], 1, abs_tol=1e-10)

    for _, df_n in df.groupby('num_qubits'):
        arr_ln = df_n.sort_values('cut').log_negativity.to_numpy()
        assert numpy.allclose(arr_ln, arr_ln[::-1], atol=1e-10)

    assert df[df.num_qubits == 4].bipartition.tolist() == ['2|8', '4|4', '8|2']
# --------------------------------------------
def test_appendix_b_check():
    '''
    Closed form spectrum and thermofield double agree with numerics
    '''
    conf = tut.get_config('appendix_b_check', 'appendix_b_check')
    df   = run_experiment(conf).to_dataframe()

    assert df.abs_diff.max() < 1e-8
    assert set(df.check) >= {'sorted_spectrum', 'eigen_residual', 'orthonormality', 'mixer_multiplicity'}
# --------------------------------------------
def test_thermalize_small(monkeypatch):
    '''
    Rows for every point and noise strength, values in their physical ranges
    '''
    monkeypatch.setenv('QQA_THREADS', '1')
    conf = tut.get_config('thermalize', 'thermalize_small', **THERMAL_SMALL)
    df   = run_experiment(conf).to_dataframe()

    assert len(df) == 2 * 2
    assert df.fidelity.between(0, 1).all()
    assert (df.relative_entropy >= 0).all()
    assert not df.reoptimized.any()
    assert numpy.allclose(df.reference_n, 0.48, atol=0.005)
    assert os.path.isfile(f'{conf.output_dir}/thermalize_trace_0.csv')
    assert os.path.isfile(f'{conf.output_dir}/thermalize_trace_1.csv')

    # Same angles with and without noise
    for _, df_p in df.groupby('point'):
        assert df_p.theta.nunique() == 1
# --------------------------------------------
def test_thermalize_deterministic(monkeypatch):
    '''
    Output CSV does not depend on the number of threads
    '''
    l_csv = []
    for nthread in ['1', '2']:
        monkeypatch.setenv('QQA_THREADS', nthread)
        conf = tut.get_config('thermalize', f'thermalize_threads_{nthread}', **THERMAL_SMALL)
        run_experiment(conf)
        l_csv.append(_read(f'{conf.output_dir}/thermalize.csv'))

    assert l_csv[0] == l_csv[1]
# --------------------------------------------
def test_invalid_threads(monkeypatch):
    '''
    Thread count from the environment must be a positive integer
    '''
    monkeypatch.setenv('QQA_THREADS', '0')
    conf = tut.get_config('fig_cnot', 'invalid_threads', dims=[3])
    with pytest.raises(ConfigError):
        run_experiment(conf)
# --------------------------------------------
def test_bose_hubbard_small(monkeypatch):
    '''
    One layer on the binary register, energies never go below the exact one
    '''
    monkeypatch.setenv('QQA_THREADS', '1')
    conf = tut.get_config(
            'bose_hubbard',
            'bose_hubbard_small',
            encodings = [{'scheme' : 'binary', 'mixer' : 'BinaryH1'}],
            layers    = 1,
            restarts  = 1,
            max_evals = 50)
    df   = run_experiment(conf).to_dataframe()

    assert df.layer.tolist() == [0, 1]
    assert (df.energy >= df.exact_energy - 1e-9).all()
    assert df.fidelity.between(0, 1).all()
    assert [f'n_{site}' for site in range(1, 5)] == df.columns.tolist()[7:11]
# --------------------------------------------
def test_thermalize_reoptimized_flag(monkeypatch):
    '''
    Rows reoptimized under noise carry the budget flag of their own optimization
    '''
    def _optimize(*args, **kwargs):
        res = optimize(*args, **kwargs)
        res.budget_exhausted = kwargs.get('noise', NoiseModel()).is_noisy

        return res

    monkeypatch.setenv('QQA_THREADS', '1')
    monkeypatch.setattr(runners, 'optimize', _optimize)
    conf = tut.get_config('thermalize', 'thermalize_reoptimized', reoptimize_under_noise=True, **THERMAL_SMALL)
    res  = run_experiment(conf)
    df   = res.to_dataframe()

    assert df.reoptimized.tolist()      == (df.epsilon > 0).tolist()
    assert df.budget_exhausted.tolist() == (df.epsilon > 0).tolist()
    assert res['metadata']['budget_exhausted']
# --------------------------------------------
def test_thermalize_register_noise(monkeypatch):
    '''
    With the register placement the symmetric rows degrade too
    '''
    monkeypatch.setenv('QQA_THREADS', '1')
    df_mix = run_experiment(tut.get_config('thermalize', 'thermalize_mixer_noise'   , **THERMAL_SMALL)).to_dataframe()
    df_reg = run_experiment(tut.get_config('thermalize', 'thermalize_register_noise', noise_placement='register', **THERMAL_SMALL)).to_dataframe()

    assert set(df_mix.noise_placement) == {'mixer'}
    assert set(df_reg.noise_placement) == {'register'}

    sym_mix = df_mix[df_mix.scheme == 'symmetric'].sort_values('epsilon').fidelity.to_numpy()
    sym_reg = df_reg[df_reg.scheme == 'symmetric'].sort_values('epsilon').fidelity.to_numpy()

    assert math.isclose(sym_mix[0], sym_mix[1], abs_tol=1e-10)
    assert math.isclose(sym_reg[0], sym_mix[0], abs_tol=1e-12)
    assert sym_reg[1] < sym_reg[0]
# --------------------------------------------
def test_bose_hubbard_zero_start(monkeypatch):
    '''
    Optimized final state is never above the energy of the initial state
    '''
    monkeypatch.setenv('QQA_THREADS', '1')
    conf = tut.get_config(
            'bose_hubbard',
            'bose_hubbard_zero_start',
            encodings = [{'scheme' : 'symmetric', 'mixer' : 'SymOpt'}],
            layers    = 2,
            restarts  = 1,
            max_evals = 40)
    df   = run_experiment(conf).to_dataframe()

    assert df.layer.tolist() == [0, 1, 2]
    assert df.energy.iloc[-1] <= df.energy.iloc[0] + 1e-12
    assert (df.energy >= df.exact_energy - 1e-9).all()
# --------------------------------------------
def _weak_config(test : str, layers : int, **overrides):
    d_weak = {'hop_j' : 10.0, 'onsite_u' : 1.0, 'chem_mu' : -12.5}

    return tut.get_config('bose_hubbard', test, bh=d_weak, layers=layers, **overrides)
# --------------------------------------------
def test_bose_hubbard_weak_smoke(monkeypatch):
    '''
    Twenty layers on the binary register move the occupations to (0.28, 0.72, 0.72, 0.28)
    '''
    monkeypatch.setenv('QQA_THREADS', '1')
    conf = _weak_config(
            'bose_hubbard_weak_smoke',
            layers    = 20,
            encodings = [{'scheme' : 'binary', 'mixer' : 'BinaryH2'}],
            restarts  = 2,
            max_evals = 4000)
    df   = run_experiment(conf).to_dataframe()
    last = df.iloc[-1]
    occ  = [last[f'n_{site}'] for site in range(1, 5)]

    log.info(f'Occupations: {occ}, fidelity: {last.fidelity:.4f}')
    assert last.layer == 20
    assert last.energy < df.energy.iloc[0]
    assert numpy.allclose(occ, WEAK_OCCUPATIONS, atol=0.06)
# --------------------------------------------
@pytest.mark.slow
def test_bose_hubbard_weak():
    '''
    Fifty layers, packaged optimizer settings, at least one encoding reaches the occupations
    '''
    conf = _weak_config(
            'bose_hubbard_weak',
            layers    = 50,
            encodings = [{'scheme' : 'binary', 'mixer' : 'BinaryH2'}, {'scheme' : 'symmetric', 'mixer' : 'SymOpt'}])
    df   = run_experiment(conf).to_dataframe()

    l_close = []
    for _, df_p in df.groupby('point'):
        last = df_p.iloc[-1]
        occ  = [last[f'n_{site}'] for site in range(1, 5)]
        log.info(f'{last.mixer}: occupations {occ}, fidelity {last.fidelity:.4f}')
        l_close.append(numpy.allclose(occ, WEAK_OCCUPATIONS, atol=0.06))

    assert any(l_close)
# --------------------------------------------
@pytest.mark.slow
def test_thermalize_default():
    '''
    Packaged thermalization settings, noiseless fidelities and entropies, frozen angles under noise
    '''
    conf = tut.get_config('thermalize', 'thermalize_default')
    df   = run_experiment(conf).to_dataframe()

    log.info(df[['mixer', 'epsilon', 'energy', 'fidelity', 'relative_entropy']])
    for _, df_p in df.groupby('point'):
        df_p = df_p.sort_values('epsilon')
        assert df_p.fidelity.between(0, 1).all()
        assert (numpy.diff(df_p.fidelity.to_numpy()) <= 1e-12).all()
        assert df_p.theta.nunique() == 1

    df_clean = df[df.epsilon == 0].set_index('scheme')
    assert df_clean.fidelity['symmetric'] >= 0.90
    assert df_clean.fidelity['binary'   ] >= 0.86
    assert df_clean.relative_entropy['symmetric'] <= 0.18
    assert df_clean.relative_entropy['binary'   ] <= 0.30

    # SymOpt layers have no CNOT, mixer placed noise leaves them unchanged
    df_sym = df[df.scheme == 'symmetric']
    assert numpy.allclose(df_sym.fidelity, df_sym.fidelity.iloc[0], atol=1e-10)
    assert df_sym.fidelity.between(0.80, 0.95).all()

    # Binary H2: 20 noisy CNOTs over five layers
    df_bin = df[df.scheme == 'binary'].set_index('epsilon')
    assert df_bin.energy[0.0] < df_bin.energy[0.02] < df_bin.energy[0.05]
    assert math.isclose(df_bin.fidelity[0.02], 0.786, abs_tol=0.03)
    assert math.isclose(df_bin.fidelity[0.05], 0.662, abs_tol=0.03)
    assert numpy.isinf(df_bin.relative_entropy[0.02])
# --------------------------------------------
@pytest.mark.slow
@pytest.mark.parametrize('layers, min_fidelity', [(10, 0.93), (2, 0.90)])
def test_bose_hubbard_default(layers : int, min_fidelity : float):
    '''
    Packaged Bose-Hubbard settings reach the strong interaction ground state
    '''
    conf = tut.get_config('bose_hubbard', f'bose_hubbard_default_{layers}', layers=layers)
    df   = run_experiment(conf).to_dataframe()

    for _, df_p in df.groupby('point'):
        last = df_p.iloc[-1]
        log.info(f'{last.mixer}: fidelity {last.fidelity:.4f}, energy {last.energy:.4f}, exact {last.exact_energy:.4f}')

        assert last.layer == layers
        assert last.energy <= df_p.energy.iloc[0] + 1e-12
        assert (df_p.energy >= df_p.exact_energy - 1e-9).all()
        assert last.fidelity >= min_fidelity
# --------------------------------------------
