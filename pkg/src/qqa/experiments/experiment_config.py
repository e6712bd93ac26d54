'''
Module with loading and validation of experiment configurations

Defaults ship as qqa_data/<experiment>/v0.yaml, a user file is merged on top of them
and command line overrides on top of that.
'''
import copy
import os
from enum                import Enum
from dataclasses         import dataclass
from importlib.resources import files

import yaml

from dmu.logging.log_store     import LogStore
from qqa.encoding.encoding_map import EncodingScheme
from qqa.encoding.mixer        import MixerName
from qqa.qaoa.ansatz           import LocalSearch, NoisePlacement

log = LogStore.add_logger('qqa:experiments:experiment_config')

MAX_BETA   = 50
MAX_QUBITS = 12
MAX_DIM    = 8
# ----------------------------------------
class ConfigError(ValueError):
    '''
    Raised when a configuration is missing, unreadable or outside of the allowed ranges
    '''
    def __init__(self, message='Invalid configuration'):
        self.message = message
        super().__init__(self.message)
# ----------------------------------------
class NumericalGuard(ValueError):
    '''
    Raised when an experiment produces values that cannot be physical
    '''
    def __init__(self, message='Numerical guard tripped'):
        self.message = message
        super().__init__(self.message)
# ----------------------------------------
class ExperimentName(str, Enum):
    '''
    Experiments runnable from the command line
    '''
    TABLE1           = 'table1'
    FIG_CNOT         = 'fig_cnot'
    FIG_LN           = 'fig_ln'
    THERMALIZE       = 'thermalize'
    BOSE_HUBBARD     = 'bose_hubbard'
    APPENDIX_B_CHECK = 'appendix_b_check'
# ----------------------------------------
@dataclass(frozen=True)
class ExperimentConfig:
    '''
    Experiment name, its parameters and the directory where outputs go
    '''
    experiment : ExperimentName
    parameters : dict
    output_dir : str
    # ----------------------------------
    def to_dict(self) -> dict:
        '''
        Echo written with the results
        '''
        return {
                'experiment' : self.experiment.value,
                'parameters' : copy.deepcopy(self.parameters),
                'output_dir' : self.output_dir,
                }
# ----------------------------------------
def merge_dicts(d_base : dict, d_over : dict) -> dict:
    '''
    Returns copy of d_base with d_over on top, nested mappings are merged
    '''
    d_out = copy.deepcopy(d_base)
    for key, value in d_over.items():
        if isinstance(value, dict) and isinstance(d_out.get(key), dict):
            d_out[key] = merge_dicts(d_out[key], value)
        else:
            d_out[key] = copy.deepcopy(value)

    return d_out
# ----------------------------------------
def _read_yaml(path : str) -> dict:
    if not os.path.isfile(path):
        raise ConfigError(f'Cannot find configuration: {path}')

    try:
        with open(path, encoding='utf-8') as ifile:
            cfg = yaml.safe_load(ifile)
    except yaml.YAMLError as exc:
        raise ConfigError(f'Cannot parse {path}: {exc}') from exc

    if cfg is None:
        return {}

    if not isinstance(cfg, dict):
        raise ConfigError(f'Configuration in {path} is not a mapping')

    return cfg
# ----------------------------------------
def default_config(experiment : ExperimentName) -> dict:
    '''
    Returns the packaged defaults of an experiment
    '''
    experiment = ExperimentName(experiment)
    path       = files('qqa_data').joinpath(f'{experiment.value}/v0.yaml')

    return _read_yaml(str(path))
# ----------------------------------------
def load_config(experiment : str, path : str | None = None, overrides : dict | None = None) -> ExperimentConfig:
    '''
    Builds validated configuration

    experiment: Name of the experiment, e.g. thermalize
    path      : Optional user YAML or JSON file, merged over the defaults
    overrides : Optional dictionary, e.g. from command line flags, merged last
    '''
    try:
        experiment = ExperimentName(experiment)
    except ValueError as exc:
        raise ConfigError(f'Unknown experiment: {experiment}') from exc

    cfg = default_config(experiment)
    if path is not None:
        log.info(f'Merging user configuration: {path}')
        cfg = merge_dicts(cfg, _read_yaml(path))

    if overrides:
        cfg = merge_dicts(cfg, {key : value for key, value in overrides.items() if value is not None})

    output_dir = cfg.pop('out_dir', f'qqa_out/{experiment.value}')
    conf       = ExperimentConfig(experiment=experiment, parameters=cfg, output_dir=str(output_dir))
    validate(conf)

    return conf
# ----------------------------------------
def _check(condition : bool, message : str) -> None:
    if not condition:
        raise ConfigError(message)
# ----------------------------------------
def _check_encodings(l_enc : list[dict], dim_d : int, nmode : int) -> None:
    _check(isinstance(l_enc, list) and len(l_enc) > 0, 'At least one encoding is needed')
    _check(2 <= dim_d <= MAX_DIM, f'Qudit dimension {dim_d} not in [2, {MAX_DIM}]')
    for d_enc in l_enc:
        try:
            scheme = EncodingScheme(d_enc['scheme'])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f'Invalid encoding entry: {d_enc}') from exc

        mixer = d_enc.get('mixer', 'best')
        if mixer != 'best':
            try:
                MixerName(mixer)
            except ValueError as exc:
                raise ConfigError(f'Invalid mixer: {mixer}') from exc

        nqubit = nmode * scheme.num_qubits(dim_d)
        _check(nqubit <= MAX_QUBITS, f'{scheme.value} encoding needs {nqubit} qubits, limit is {MAX_QUBITS}')
# ----------------------------------------
def _check_optimizer(cfg : dict) -> None:
    _check(int(cfg.get('restarts' , 1)) >= 1, f'Invalid number of restarts: {cfg.get("restarts")}')
    _check(int(cfg.get('max_evals', 1)) >= 1, f'Invalid evaluation budget: {cfg.get("max_evals")}')
    _check(float(cfg.get('tol', 1e-6)) > 0  , f'Invalid tolerance: {cfg.get("tol")}')
    _check(cfg.get('method', LocalSearch.NELDER_MEAD.value) in [method.value for method in LocalSearch], f'Unknown local search: {cfg.get("method")}')
    _check(isinstance(cfg.get('zero_start', False), bool), f'zero_start must be true or false, found {cfg.get("zero_start")}')
# ----------------------------------------
def _check_noise(cfg : dict) -> None:
    for eps in cfg.get('noise_eps', [0.0]):
        _check(0 <= float(eps) < 1, f'Noise strength {eps} not in [0, 1)')

    placement = cfg.get('noise_placement', NoisePlacement.MIXER.value)
    _check(placement in [value.value for value in NoisePlacement], f'Unknown noise placement: {placement}')
# ----------------------------------------
def _check_layers(l_layer) -> None:
    l_layer = l_layer if isinstance(l_layer, list) else [l_layer]
    for layers in l_layer:
        _check(int(layers) >= 1, f'Number of layers must be positive, found {layers}')
# ----------------------------------------
def validate(conf : ExperimentConfig) -> None:
    '''
    Raises ConfigError if parameters are outside of the supported ranges
    '''
    cfg  = conf.parameters
    name = conf.experiment
    try:
        if name == ExperimentName.FIG_CNOT:
            for dim_d in cfg['dims']:
                _check(2 <= int(dim_d) <= MAX_DIM, f'Qudit dimension {dim_d} not in [2, {MAX_DIM}]')
            _check_layers(cfg['layers'])

        if name == ExperimentName.FIG_LN:
            for nqubit in cfg['qubits']:
                _check(2 <= int(nqubit) <= MAX_QUBITS, f'Number of qubits {nqubit} not in [2, {MAX_QUBITS}]')

        if name == ExperimentName.THERMALIZE:
            for beta in cfg['betas']:
                _check(0 <= float(beta) <= MAX_BETA, f'Inverse temperature {beta} not in [0, {MAX_BETA}]')
            _check_encodings(cfg['encodings'], int(cfg['cho']['cutoff_nc']) + 1, nmode=2)
            _check_layers(cfg['layers'])
            _check_noise(cfg)
            _check_optimizer(cfg)
            _check(cfg.get('initial_state', 'restricted') in ['restricted', 'full'], f'Invalid initial state: {cfg.get("initial_state")}')

        if name == ExperimentName.BOSE_HUBBARD:
            d_bh = cfg['bh']
            _check(int(d_bh['sites_l']) >= 1, f'Invalid number of sites: {d_bh["sites_l"]}')
            _check_encodings(cfg['encodings'], int(d_bh['cutoff_nc']) + 1, nmode=int(d_bh['sites_l']))
            _check_layers(cfg['layers'])
            _check_optimizer(cfg)
            if float(d_bh['chem_mu']) >= int(d_bh['cutoff_nc']) * float(d_bh['onsite_u']):
                log.warning('Chemical potential above N_c U, truncated model may not be valid')

        if name == ExperimentName.APPENDIX_B_CHECK:
            for beta in cfg['betas']:
                _check(0 <= float(beta) <= MAX_BETA, f'Inverse temperature {beta} not in [0, {MAX_BETA}]')
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f'Missing or malformed entry in {name.value} configuration: {exc}') from exc

    log.debug(f'Validated {name.value} configuration')
# ----------------------------------------
