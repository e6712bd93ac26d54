'''
Script used to run the experiments, e.g.

qqa thermalize --config my_config.yaml --out results --seed 3
'''
import argparse
import sys
from dataclasses import dataclass

from dmu.logging.log_store import LogStore

from qqa.linalg.operators              import NotHermitian
from qqa.encoding.mixer                import NameNotApplicable, InfeasibleMixer
from qqa.bosonic.models                import MemoryLimit, DegenerateCubic
from qqa.experiments.experiment_config import ExperimentName, ConfigError, NumericalGuard, load_config
from qqa.experiments.runners           import run_experiment

log = LogStore.add_logger('qqa:qqa_scripts:qqa')

_LOGGERS = [
        'qqa:encoding:encoding_map',
        'qqa:encoding:pauli_sum',
        'qqa:encoding:trotter',
        'qqa:encoding:mixer',
        'qqa:bosonic:models',
        'qqa:qaoa:thermal',
        'qqa:qaoa:ansatz',
        'qqa:qaoa:optimizer',
        'qqa:qaoa:metrics',
        'qqa:experiments:experiment_result',
        'qqa:experiments:experiment_config',
        'qqa:experiments:runners',
        'qqa:qqa_scripts:qqa',
        ]
# --------------------------------
@dataclass
class ExitCode:
    '''
    Values returned to the shell
    '''
    success          = 0
    config_error     = 2
    numerical_guard  = 3
    budget_exhausted = 4
# --------------------------------
def _get_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Runs feasible subspace QAOA experiments on truncated bosonic systems')
    parser.add_argument('experiment', type=str, choices=[name.value for name in ExperimentName], help='Experiment to run')
    parser.add_argument('-c', '--config'   , type=str  , help='YAML or JSON file merged over the default configuration')
    parser.add_argument('-o', '--out'      , type=str  , help='Directory where outputs go')
    parser.add_argument('-s', '--seed'     , type=int  , help='Global seed')
    parser.add_argument('-r', '--restarts' , type=int  , help='Optimizer restarts per point')
    parser.add_argument('-e', '--noise-eps', type=float, nargs='+', help='Depolarizing strengths per CNOT')
    parser.add_argument('-R', '--reoptimize-under-noise', action='store_true', help='Reoptimize angles for each noise strength instead of freezing the noiseless ones')
    parser.add_argument('-l', '--log-level', type=int  , default=20, help='Logging level, 10 for debug')

    return parser
# --------------------------------
def _overrides(args : argparse.Namespace) -> dict:
    d_over = {
            'out_dir'  : args.out,
            'seed'     : args.seed,
            'restarts' : args.restarts,
            'noise_eps': args.noise_eps,
            }

    if args.reoptimize_under_noise:
        d_over['reoptimize_under_noise'] = True

    return d_over
# --------------------------------
def _set_log_level(level : int) -> None:
    for name in _LOGGERS:
        LogStore.set_level(name, level)
# --------------------------------
def main(argv : list[str] | None = None) -> int:
    '''
    Entry point, returns exit code
    '''
    args = _get_parser().parse_args(argv)
    _set_log_level(args.log_level)

    try:
        conf = load_config(args.experiment, path=args.config, overrides=_overrides(args))
        res  = run_experiment(conf)
    except (ConfigError, NameNotApplicable, InfeasibleMixer) as exc:
        log.error(exc)
        return ExitCode.config_error
    except (NumericalGuard, MemoryLimit, NotHermitian, DegenerateCubic) as exc:
        log.error(exc)
        return ExitCode.numerical_guard

    print(res)
    if res['metadata']['budget_exhausted']:
        log.warning('At least one optimization used its full evaluation budget')
        return ExitCode.budget_exhausted

    return ExitCode.success
# --------------------------------
if __name__ == '__main__':
    sys.exit(main())
