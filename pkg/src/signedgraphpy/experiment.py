"""
Experiment harness: repeated train/test trials over noise rates and methods,
and the eigenvalue lower-bound comparison study.
"""

import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .classifier import Method, SignedGraphClassifier
from .constants import (
    DEFAULT_NOISE_RATES, DEFAULT_TRAIN_FRACTION, DEFAULT_TRIALS, DEFAULT_BLOCK_SIZE, BOUND_COLUMNS,
    DATASET_PRESETS,
)
from .datasets import load_dataset, inject_label_noise, train_test_split, SYNTHETIC_GENERATORS
from .eval_bound import eval_bound
from .exceptions import InvalidParameterError, BoundSoundnessError
from .features import FeatureSet, PartialLabels
from .graph import GraphConfig, build_signed_graph
from .laplacian import build_laplacian
from .perturbation import PerturbationMethod
from .solver import SolverConfig
from .spectral import dense_sym_eig, simple_lower_bound, gershgorin_lower_bound
from .utils import ensure_list

logger = logging.getLogger(__name__)

# stream id of the subsampling RNG, kept apart from the per-trial streams
_SAMPLE_STREAM = 2 ** 31 - 1
SOUNDNESS_TOL = 1e-9


@dataclass
class ExperimentSpec:
    """
    Everything needed to reproduce a sweep.

    Attributes:
        dataset_path: CSV to load; when None the synthetic generator named by `synthetic` is used
        methods: classifier variants to run
        noise_rates: label noise rates in [0, 0.5), ascending
        trials: number of random splits per noise rate
        train_fraction: share of samples whose (noisy) labels are observed
        sample_size: optional random subsample of the dataset
        seed: master seed
        block_sizes: r values for the bound study; empty means (ceil(sqrt(N)), 30)
        workers: process pool size, 1 runs in-process
        record_bound_gap: store lambda_min - bound per trial
    """
    dataset_path: Optional[str] = None
    synthetic: str = 'crescents'
    synthetic_size: int = 300
    methods: Tuple[Method, ...] = (Method.PROPOSED_HYBRID,)
    noise_rates: Tuple[float, ...] = DEFAULT_NOISE_RATES
    trials: int = DEFAULT_TRIALS
    train_fraction: float = DEFAULT_TRAIN_FRACTION
    sample_size: Optional[int] = None
    seed: int = 0
    solver: SolverConfig = field(default_factory=SolverConfig)
    graph: GraphConfig = field(default_factory=GraphConfig)
    block_sizes: Tuple[int, ...] = ()
    workers: int = 1
    record_bound_gap: bool = False

    def __post_init__(self):
        self.methods = tuple(Method.parse(m) for m in ensure_list(self.methods))
        self.noise_rates = tuple(float(p) for p in ensure_list(self.noise_rates))
        self.block_sizes = tuple(int(r) for r in ensure_list(self.block_sizes))
        if isinstance(self.solver, dict):
            self.solver = SolverConfig.from_dict(self.solver)
        if isinstance(self.graph, dict):
            self.graph = GraphConfig.from_dict(self.graph)
        if not self.methods:
            raise InvalidParameterError("at least one method is required")
        if self.trials < 1:
            raise InvalidParameterError(f"trials must be at least 1, got {self.trials}")
        if not self.noise_rates:
            raise InvalidParameterError("at least one noise rate is required")
        if any(not (0.0 <= p < 0.5) for p in self.noise_rates):
            raise InvalidParameterError(f"noise rates must lie in [0, 0.5), got {self.noise_rates}")
        if list(self.noise_rates) != sorted(self.noise_rates):
            raise InvalidParameterError(f"noise rates must be sorted ascending, got {self.noise_rates}")
        if not (0.0 < self.train_fraction < 1.0):
            raise InvalidParameterError(f"train_fraction must lie in (0, 1), got {self.train_fraction}")
        if self.sample_size is not None and self.sample_size < 2:
            raise InvalidParameterError(f"sample_size must be at least 2, got {self.sample_size}")
        if self.dataset_path is None and self.synthetic not in SYNTHETIC_GENERATORS:
            raise InvalidParameterError(f"unknown synthetic dataset '{self.synthetic}', "
                                        f"expected one of {list(SYNTHETIC_GENERATORS)}")
        if any(r < 1 for r in self.block_sizes):
            raise InvalidParameterError(f"block sizes must be positive, got {self.block_sizes}")
        if self.workers < 1:
            raise InvalidParameterError(f"workers must be positive, got {self.workers}")

    def to_dict(self) -> dict:
        data = asdict(self)
        data['methods'] = [m.value for m in self.methods]
        return data

    @classmethod
    def from_dict(cls, data: dict) -> 'ExperimentSpec':
        data = dict(data)
        if 'method' in data and 'methods' not in data:
            data['methods'] = data.pop('method')
        preset = data.pop('preset', None)
        if preset is not None:
            data = apply_preset(data, preset)
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**known)

    @classmethod
    def from_json(cls, path) -> 'ExperimentSpec':
        with open(path, 'r', encoding='utf-8') as f:
            return cls.from_dict(json.load(f))


def apply_preset(data: dict, preset: str) -> dict:
    """Merges the named dataset preset into a spec dictionary; explicit entries win."""
    if preset not in DATASET_PRESETS:
        raise InvalidParameterError(f"unknown preset '{preset}', expected one of {list(DATASET_PRESETS)}")
    values = DATASET_PRESETS[preset]
    data = dict(data)
    graph = dict(data.get('graph') or {})
    graph.setdefault('centroid_weight_range', values['centroid_weight_range'])
    graph.setdefault('boundary_weight_range', values['boundary_weight_range'])
    solver = dict(data.get('solver') or {})
    solver.setdefault('mu1', values['mu1'])
    solver.setdefault('mu2', values['mu2'])
    data['graph'], data['solver'] = graph, solver
    data.setdefault('sample_size', values['sample_size'])
    return data


@dataclass
class TrialResult:
    """Scores of one (method, noise rate, trial) run on its test split."""
    method: str
    noise_rate: float
    trial: int
    error_rate: float
    rejection_rate: float
    n_test: int = 0
    n_rejected: int = 0
    n_errors: int = 0
    n_correct: int = 0
    bound_gap: Optional[float] = None
    threshold: float = 0.0
    wall_time: float = 0.0
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None

    def brief_summary(self) -> str:
        if self.failed:
            return f"[{self.method} p={self.noise_rate:g} #{self.trial}] FAILED: {self.error}"
        return (f"[{self.method} p={self.noise_rate:g} #{self.trial}] error {self.error_rate:.2%}, "
                f"rejected {self.rejection_rate:.2%}")

    def to_dict(self) -> dict:
        return asdict(self)


class TrialResultList(list):
    """
    A list of TrialResult with filtering and summary helpers.
    """

    def __init__(self, results: Sequence[TrialResult] = ()):
        super().__init__(results)

    def filter_by_method(self, method) -> 'TrialResultList':
        methods = {Method.parse(m).value for m in ensure_list(method)}
        return TrialResultList([r for r in self if r.method in methods])

    def filter_by_noise_rate(self, noise_rate) -> 'TrialResultList':
        rates = set(float(p) for p in ensure_list(noise_rate))
        return TrialResultList([r for r in self if r.noise_rate in rates])

    def failed(self) -> 'TrialResultList':
        return TrialResultList([r for r in self if r.failed])

    def succeeded(self) -> 'TrialResultList':
        return TrialResultList([r for r in self if not r.failed])

    def mean_error(self) -> float:
        ok = self.succeeded()
        return float(np.mean([r.error_rate for r in ok])) if ok else float('nan')

    def mean_rejection(self) -> float:
        ok = self.succeeded()
        return float(np.mean([r.rejection_rate for r in ok])) if ok else float('nan')

    def get_summary(self) -> Dict[Tuple[str, float], float]:
        """
        Mean error rate per (method, noise rate) over successful trials.
        """
        keys = sorted({(r.method, r.noise_rate) for r in self})
        return {(m, p): self.filter_by_method(m).filter_by_noise_rate(p).mean_error() for m, p in keys}

    def to_frame(self):
        from .converter import ResultsConverter
        return ResultsConverter.trials_to_frame(self)

    def summary_frame(self):
        from .converter import ResultsConverter
        return ResultsConverter.summarize(self)

    def __str__(self) -> str:
        if not self:
            return "[]"
        return "[\n " + ",\n ".join(r.brief_summary() for r in self) + "\n]"


def load_experiment_data(spec: ExperimentSpec) -> Tuple[FeatureSet, np.ndarray]:
    """Loads or generates the dataset, applies the feature config and optional subsampling."""
    if spec.dataset_path is not None:
        features, labels = load_dataset(spec.dataset_path)
        values = features.features
    else:
        values, labels = SYNTHETIC_GENERATORS[spec.synthetic](n_samples=spec.synthetic_size, seed=spec.seed)

    if spec.sample_size is not None and spec.sample_size < len(labels):
        rng = np.random.default_rng([spec.seed, _SAMPLE_STREAM])
        rows = np.sort(rng.choice(len(labels), size=spec.sample_size, replace=False))
        values, labels = values[rows], labels[rows]

    features = FeatureSet(values, spec.graph.feature_weights, spec.graph.bandwidth)
    return features, np.asarray(labels, dtype=int)


def trial_split(spec: ExperimentSpec, n: int, trial: int) -> Tuple[np.ndarray, np.ndarray]:
    """The train/test split of a trial; it depends only on (seed, trial)."""
    return train_test_split(n, spec.train_fraction, np.random.default_rng([spec.seed, trial]))


def noise_seed(spec: ExperimentSpec, trial: int, noise_rate: float) -> np.random.SeedSequence:
    return np.random.SeedSequence([spec.seed, trial, int(round(noise_rate * 1e6))])


def run_trial(features: FeatureSet, labels: np.ndarray, method: Method, noise_rate: float, trial: int,
              spec: ExperimentSpec) -> TrialResult:
    """
    One split, noise injection, fit and test-set scoring.

    Library errors and numerical failures from numpy or scipy (ValueError,
    LinAlgError, ArithmeticError) are recorded on the result instead of raised.
    """
    started = time.perf_counter()
    try:
        train, test = trial_split(spec, len(labels), trial)
        noisy = inject_label_noise(labels[train], noise_rate, noise_seed(spec, trial, noise_rate))
        observed = PartialLabels(train, noisy, len(labels), noise_rate=noise_rate)

        classifier = SignedGraphClassifier(method, spec.graph, spec.solver, seed=spec.seed + trial)
        signal = classifier.fit_predict(features, observed)

        decisions, truth = signal.decisions[test], labels[test]
        accepted = decisions != 0
        n_accepted = int(accepted.sum())
        n_errors = int(np.sum(decisions[accepted] != truth[accepted]))
        bound_gap = None
        if spec.record_bound_gap:
            bound_gap = first_bound_gap(classifier)
        return TrialResult(
            method=method.value,
            noise_rate=noise_rate,
            trial=trial,
            error_rate=n_errors / n_accepted if n_accepted else 0.0,
            rejection_rate=float(np.mean(~accepted)) if test.size else 0.0,
            n_test=int(test.size),
            n_rejected=int(test.size - n_accepted),
            n_errors=n_errors,
            n_correct=n_accepted - n_errors,
            bound_gap=bound_gap,
            threshold=float(signal.threshold),
            wall_time=time.perf_counter() - started,
        )
    except (ValueError, np.linalg.LinAlgError, ArithmeticError) as e:
        logger.warning("trial %d of %s at noise rate %g failed: %s", trial, method.value, noise_rate, e)
        return TrialResult(method.value, noise_rate, trial, float('nan'), float('nan'),
                           wall_time=time.perf_counter() - started, error=str(e))


def first_bound_gap(classifier: SignedGraphClassifier) -> Optional[float]:
    """
    lambda_min(L) minus the lower bound behind the first identity shift of a fit.

    Min-norm perturbations use no bound and are skipped; None when no
    identity shift was made.
    """
    for _, _, L, perturbation in classifier.perturbations:
        if perturbation.method is PerturbationMethod.IDENTITY_SHIFT:
            return dense_sym_eig(L).min_eigenvalue - perturbation.bound
    return None


def _run_task(task):
    return run_trial(*task)


def run_experiment(spec: ExperimentSpec) -> TrialResultList:
    """
    Runs every method x noise rate x trial combination.

    Each trial uses the same split for all noise rates and methods, so noise
    rates are compared on identical data. Results come back in
    (method, noise rate, trial) order regardless of the worker count.
    """
    features, labels = load_experiment_data(spec)
    logger.info("experiment: %d samples, %d features, methods %s, noise rates %s, %d trials",
                features.n_samples, features.n_features, [m.value for m in spec.methods],
                list(spec.noise_rates), spec.trials)
    tasks = [(features, labels, method, p, trial, spec)
             for method in spec.methods for p in spec.noise_rates for trial in range(spec.trials)]

    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as executor:
            results = list(executor.map(_run_task, tasks))
    else:
        results = [_run_task(task) for task in tasks]

    results = TrialResultList(results)
    if results.failed():
        logger.warning("%d of %d trials failed", len(results.failed()), len(results))
    return results


def default_block_sizes(n: int) -> Tuple[int, ...]:
    sizes = [max(1, int(np.ceil(np.sqrt(n)))), DEFAULT_BLOCK_SIZE]
    return tuple(sorted(set(sizes)))


def run_bound_study(spec: ExperimentSpec) -> pd.DataFrame:
    """
    Compares eval_bound at each block size with the simple and Gershgorin bounds.

    One graph per trial is built from the trial's training labels (at the
    first noise rate) with the first method's negative-edge scheme. Every
    bound is checked against the dense smallest eigenvalue.

    Returns:
        pandas.DataFrame: Columns trial, r, lambda_min_oracle, eval_bound, simple_bound, gershgorin_bound

    Raises:
        BoundSoundnessError: If any bound exceeds the smallest eigenvalue
    """
    features, labels = load_experiment_data(spec)
    method = spec.methods[0]
    noise_rate = spec.noise_rates[0]
    block_sizes = spec.block_sizes or default_block_sizes(features.n_samples)
    rows = []
    for trial in range(spec.trials):
        train, _ = trial_split(spec, len(labels), trial)
        noisy = inject_label_noise(labels[train], noise_rate, noise_seed(spec, trial, noise_rate))
        observed = PartialLabels(train, noisy, len(labels), noise_rate=noise_rate)
        bundle = build_laplacian(build_signed_graph(features, observed, spec.graph, method.graph_scheme))

        oracle = dense_sym_eig(bundle.L).min_eigenvalue
        simple = simple_lower_bound(bundle, seed=spec.seed + trial)
        gershgorin = gershgorin_lower_bound(bundle.L)
        tolerance = SOUNDNESS_TOL * max(1.0, abs(oracle))
        for name, value in (('simple_bound', simple), ('gershgorin_bound', gershgorin)):
            if value > oracle + tolerance:
                raise BoundSoundnessError(name, value, oracle, trial)
        for r in block_sizes:
            bound = eval_bound(bundle.L, r, spec.graph.epsilon, seed=spec.seed + trial, margin=spec.graph.margin)
            if bound > oracle + tolerance:
                raise BoundSoundnessError(f'eval_bound(r={r})', bound, oracle, trial)
            rows.append((trial, r, oracle, bound, simple, gershgorin))
        logger.info("bound study trial %d: lambda_min %.6g, simple %.6g, gershgorin %.6g",
                    trial, oracle, simple, gershgorin)
    return pd.DataFrame(rows, columns=BOUND_COLUMNS)
