'''
Module with the seeded multi-start optimization of the ansatz angles
'''
import math
import os
from dataclasses import dataclass, field

import numpy
import pandas as pnd
from scipy.optimize import minimize, OptimizeResult

from dmu.logging.log_store    import LogStore
from qqa.linalg.quantum_state import QuantumState
from qqa.encoding.trotter     import RegisterGates
from qqa.qaoa.ansatz          import QaoaAnsatz, QaoaConfig, NoiseModel, LocalSearch

log = LogStore.add_logger('qqa:qaoa:optimizer')

ZERO_START_STEP = math.pi / 8
# scipy status codes of runs stopped by the evaluation or iteration limit
_BUDGET_STATUS  = {
        LocalSearch.NELDER_MEAD : {1},
        LocalSearch.POWELL      : {1, 2},
        LocalSearch.COBYQA      : {2, 3},
        }
# ----------------------------------------
@dataclass
class EvaluationTrace:
    '''
    Every energy evaluation done by the optimizer
    '''
    num_angles : int
    records    : list[list[float]] = field(default_factory=list)
    # ----------------------------------
    def add(self, restart : int, eval_index : int, theta : numpy.ndarray, value : float) -> None:
        '''
        Appends one evaluation
        '''
        self.records.append([restart, eval_index] + [float(angle) for angle in theta] + [value])
    # ----------------------------------
    @property
    def columns(self) -> list[str]:
        '''
        restart, eval_index, theta_0..theta_{2p-1}, energy
        '''
        return ['restart', 'eval_index'] + [f'theta_{index}' for index in range(self.num_angles)] + ['energy']
    # ----------------------------------
    def to_dataframe(self) -> pnd.DataFrame:
        '''
        Trace as a dataframe, one row per evaluation
        '''
        df = pnd.DataFrame(self.records, columns=self.columns)
        df['restart'   ] = df['restart'   ].astype(int)
        df['eval_index'] = df['eval_index'].astype(int)

        return df
    # ----------------------------------
    def to_csv(self, path : str) -> None:
        '''
        Saves trace to CSV
        '''
        dir_path = os.path.dirname(path)
        os.makedirs(dir_path, exist_ok=True)

        df = self.to_dataframe()
        df.to_csv(path, index=False, float_format='%.12e')
        log.debug(f'Saved trace to: {path}')
    # ----------------------------------
    def __len__(self) -> int:
        return len(self.records)
# ----------------------------------------
@dataclass
class OptimizationResult:
    '''
    Best angles over all restarts
    '''
    best_theta       : numpy.ndarray
    best_energy      : float
    trace            : EvaluationTrace
    budget_exhausted : bool
    restart_energies : list[float]
    # ----------------------------------
    def config(self, base : QaoaConfig) -> QaoaConfig:
        '''
        Configuration holding the best angles
        '''
        return base.with_theta(self.best_theta)
# ----------------------------------------
class QaoaOptimizer:
    '''
    Derivative free local search over the 2p angles, started from several seeded random points

    With zero_start one more start at all angles zero follows the random ones, the result
    is then never above the energy of the initial state. Restarts whose minimization returns a non finite energy
    are retried from a new random point.
    '''
    # -------------------------------
    def __init__(self, ansatz : QaoaAnsatz, initial : QuantumState, config : QaoaConfig):
        '''
        ansatz : Ansatz holding cost, mixer and noise
        initial: State the ansatz is applied to
        config : Number of layers, seed, restarts and convergence settings
        '''
        if config.layers_p < 1:
            raise ValueError(f'Optimization needs at least one layer, found {config.layers_p}')

        self._ansatz    = ansatz
        self._initial   = initial
        self._cfg       = config
        self._nangle    = 2 * config.layers_p
        self._trace     = EvaluationTrace(num_angles=self._nangle)

        self._max_tries = 5
    # -------------------------------
    def _objective(self, restart : int):
        counter = [0]
        def _fun(theta : numpy.ndarray) -> float:
            value = self._ansatz.energy(self._initial, theta)
            self._trace.add(restart, counter[0], theta, value)
            counter[0] += 1

            return value

        return _fun
    # -------------------------------
    def _options(self, theta_0 : numpy.ndarray, from_zero : bool) -> dict:
        method = self._cfg.method
        if method == LocalSearch.NELDER_MEAD:
            options = {'maxfev' : self._cfg.max_evals, 'fatol' : self._cfg.tol, 'xatol' : self._cfg.tol, 'adaptive' : True}
            if from_zero:
                # scipy builds the default simplex with steps of 2.5e-4 around zero angles
                options['initial_simplex'] = numpy.vstack([theta_0, theta_0 + ZERO_START_STEP * numpy.eye(self._nangle)])

            return options

        if method == LocalSearch.POWELL:
            return {'maxfev' : self._cfg.max_evals, 'xtol' : self._cfg.tol, 'ftol' : self._cfg.tol}

        return {'maxfev' : self._cfg.max_evals, 'final_tr_radius' : self._cfg.tol}
    # -------------------------------
    def _is_exhausted(self, res : OptimizeResult) -> bool:
        if res.nfev >= self._cfg.max_evals:
            return True

        return res.status in _BUDGET_STATUS[self._cfg.method]
    # -------------------------------
    def _minimize(self, restart : int, rng : numpy.random.Generator, from_zero : bool = False) -> OptimizeResult:
        fun = self._objective(restart)
        for itry in range(1, self._max_tries + 1):
            use_zero = from_zero and itry == 1
            theta_0  = numpy.zeros(self._nangle) if use_zero else rng.uniform(0, math.pi, size=self._nangle)
            res      = minimize(
                    fun,
                    x0     = theta_0,
                    method = self._cfg.method.value,
                    options= self._options(theta_0, from_zero=use_zero))

            if numpy.isfinite(res.fun):
                return res

            log.warning(f'Restart {restart} ended at non finite energy, try {itry}, randomizing')

        raise ValueError(f'Maximum number of tries ({self._max_tries}) reached for restart {restart}')
    # -------------------------------
    def run(self) -> OptimizationResult:
        '''
        Runs all restarts, returns the lowest energy one, ties go to the earliest restart
        '''
        nstart = self._cfg.restarts + int(self._cfg.zero_start)
        l_seed = numpy.random.SeedSequence(self._cfg.seed).spawn(nstart)

        best_res   = None
        best_exh   = False
        l_energy   = []
        for restart, seed in enumerate(l_seed):
            rng = numpy.random.default_rng(seed)
            res = self._minimize(restart, rng, from_zero=restart == self._cfg.restarts)
            exh = self._is_exhausted(res)

            log.info(f'Restart {restart:<3}: energy={res.fun:.8f}, evaluations={res.nfev}')
            l_energy.append(float(res.fun))
            if best_res is None or res.fun < best_res.fun:
                best_res = res
                best_exh = exh

        if best_exh:
            log.warning(f'Best restart used the full budget of {self._cfg.max_evals} evaluations')

        return OptimizationResult(
                best_theta       = numpy.asarray(best_res.x, dtype=float),
                best_energy      = float(best_res.fun),
                trace            = self._trace,
                budget_exhausted = bool(best_exh),
                restart_energies = l_energy)
# ----------------------------------------
def optimize(
        initial  : QuantumState,
        h_cost   : numpy.ndarray,
        h_mixer  : numpy.ndarray,
        config   : QaoaConfig,
        noise    : NoiseModel    = NoiseModel(),
        register : RegisterGates = RegisterGates()) -> OptimizationResult:
    '''
    Minimizes the cost expectation value over the angles of a p layer ansatz
    '''
    ansatz = QaoaAnsatz(h_cost=h_cost, h_mixer=h_mixer, noise=noise, register=register)
    obj    = QaoaOptimizer(ansatz=ansatz, initial=initial, config=config)

    return obj.run()
# ----------------------------------------
