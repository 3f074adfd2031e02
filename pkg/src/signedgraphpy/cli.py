"""
Command-line interface.

    signedgraphpy classify --features F.csv --labels L.csv --out DIR
    signedgraphpy experiment --synthetic crescents --method ProposedHybrid --trials 20 --seed 0 --out DIR
    signedgraphpy bound-study --dataset D.csv --block-sizes 10 30 --seed 0 --out DIR
    signedgraphpy synth --kind crescents --n 300 --seed 0 --out data.csv

Exit status is 0 on success, 1 when the run fails and 2 on usage errors.
"""

import argparse
import json
import logging
import os
import sys

from .classifier import Method, SignedGraphClassifier
from .constants import PRESET_NAMES, BOUND_SOURCES, MARGIN_RULES, NEGATIVE_WEIGHT_CONVENTIONS
from .converter import ResultsConverter
from .datasets import SYNTHETIC_GENERATORS, save_dataset
from .exceptions import SignedGraphError
from .experiment import ExperimentSpec, run_experiment, run_bound_study
from .features import FeatureSet, PartialLabels
from .utils import write_json

logger = logging.getLogger(__name__)

# flag destination -> (section of the experiment dictionary, key); None means top level
_OVERRIDES = {
    'dataset': (None, 'dataset_path'),
    'synthetic': (None, 'synthetic'),
    'synthetic_size': (None, 'synthetic_size'),
    'methods': (None, 'methods'),
    'noise_rates': (None, 'noise_rates'),
    'trials': (None, 'trials'),
    'train_fraction': (None, 'train_fraction'),
    'sample_size': (None, 'sample_size'),
    'seed': (None, 'seed'),
    'block_sizes': (None, 'block_sizes'),
    'workers': (None, 'workers'),
    'record_bound_gap': (None, 'record_bound_gap'),
    'mu1': ('solver', 'mu1'),
    'mu2': ('solver', 'mu2'),
    'tau': ('solver', 'reject_threshold'),
    'reject_target': ('solver', 'reject_target'),
    'max_outer_iter': ('solver', 'max_outer_iter'),
    'omega': ('graph', 'omega'),
    'bandwidth': ('graph', 'bandwidth'),
    'block_size': ('graph', 'block_size'),
    'bound_source': ('graph', 'bound_source'),
    'margin': ('graph', 'margin'),
    'negative_weight_convention': ('graph', 'negative_weight_convention'),
}


def _common_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='log progress (-v) or debug details (-vv)')
    parser.add_argument('--config', help='JSON file with experiment settings; flags override it')
    parser.add_argument('--preset', choices=PRESET_NAMES, help='per-dataset parameter preset')
    parser.add_argument('--method', dest='methods', action='append', metavar='METHOD',
                        help=f"one of {', '.join(m.value for m in Method)}; repeat for several")
    parser.add_argument('--mu1', type=float)
    parser.add_argument('--mu2', type=float)
    parser.add_argument('--tau', type=float, help='rejection threshold')
    parser.add_argument('--reject-target', type=float, help='tune tau to reject this fraction')
    parser.add_argument('--max-outer-iter', type=int)
    parser.add_argument('--omega', type=int, help='nearest neighbours per node')
    parser.add_argument('--bandwidth', type=float)
    parser.add_argument('--block-size', type=int, help='block size r used by the classifier')
    parser.add_argument('--bound-source', choices=BOUND_SOURCES)
    parser.add_argument('--margin', choices=MARGIN_RULES)
    parser.add_argument('--negative-weight-convention', choices=NEGATIVE_WEIGHT_CONVENTIONS)
    return parser


def _data_arguments(parser: argparse.ArgumentParser):
    source = parser.add_mutually_exclusive_group()
    source.add_argument('--dataset', help='CSV of features followed by a -1/+1 label column')
    source.add_argument('--synthetic', choices=list(SYNTHETIC_GENERATORS))
    parser.add_argument('--synthetic-size', type=int)
    parser.add_argument('--noise-rates', type=float, nargs='+')
    parser.add_argument('--trials', type=int)
    parser.add_argument('--train-fraction', type=float)
    parser.add_argument('--sample-size', type=int)
    parser.add_argument('--workers', type=int)
    parser.add_argument('--seed', type=int, required=True, help='master seed of splits, noise and tie-breaks')
    parser.add_argument('--out', required=True, help='output directory')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='signedgraphpy',
        description='Robust binary classification on signed similarity graphs.')
    subparsers = parser.add_subparsers(dest='command', required=True)
    common = _common_parser()

    classify = subparsers.add_parser('classify', parents=[common], help='classify one dataset')
    classify.add_argument('--features', required=True, help='CSV with one sample per row, no labels')
    classify.add_argument('--labels', required=True, help='CSV of (index, label) rows')
    classify.add_argument('--seed', type=int)
    classify.add_argument('--out', required=True, help='output directory')

    experiment = subparsers.add_parser('experiment', parents=[common], help='noise sweep over repeated splits')
    _data_arguments(experiment)
    experiment.add_argument('--record-bound-gap', action='store_true', default=None)

    bounds = subparsers.add_parser('bound-study', parents=[common], help='compare eigenvalue lower bounds')
    _data_arguments(bounds)
    bounds.add_argument('--block-sizes', type=int, nargs='+')

    synth = subparsers.add_parser('synth', help='write a synthetic dataset')
    synth.add_argument('-v', '--verbose', action='count', default=0)
    synth.add_argument('--kind', choices=list(SYNTHETIC_GENERATORS), default='crescents')
    synth.add_argument('--n', type=int, default=300)
    synth.add_argument('--seed', type=int, default=0)
    synth.add_argument('--out', required=True, help='output CSV file')
    return parser


def spec_from_args(args: argparse.Namespace) -> ExperimentSpec:
    """Loads --config (if any), applies --preset and overlays explicit flags."""
    data = {}
    if args.config:
        with open(args.config, 'r', encoding='utf-8') as f:
            data = json.load(f)
    for section in ('solver', 'graph'):
        data[section] = dict(data.get(section) or {})
    for dest, (section, key) in _OVERRIDES.items():
        value = getattr(args, dest, None)
        if value is None:
            continue
        if section is None:
            data[key] = value
        else:
            data[section][key] = value
    if args.preset:
        data['preset'] = args.preset
    if getattr(args, 'dataset', None):
        data.pop('synthetic', None)
    return ExperimentSpec.from_dict(data)


def _run_classify(args) -> None:
    spec = spec_from_args(args)
    features = FeatureSet.from_csv(args.features, spec.graph.feature_weights, spec.graph.bandwidth)
    labels = PartialLabels.from_csv(args.labels, features.n_samples)
    classifier = SignedGraphClassifier(spec.methods[0], spec.graph, spec.solver, seed=spec.seed)
    signal = classifier.fit_predict(features, labels)
    logger.info(signal.brief_summary())
    config = {
        'method': classifier.method.value,
        'seed': spec.seed,
        'graph': spec.graph.to_dict(),
        'solver': classifier.solver_config.to_dict(),
    }
    os.makedirs(args.out, exist_ok=True)
    write_json(os.path.join(args.out, 'signal.json'), ResultsConverter.signal_to_dict(signal, config))


def _run_experiment(args) -> None:
    spec = spec_from_args(args)
    results = run_experiment(spec)
    os.makedirs(args.out, exist_ok=True)
    ResultsConverter.write_csv(results.to_frame(), os.path.join(args.out, 'results.csv'))
    ResultsConverter.write_csv(results.summary_frame(), os.path.join(args.out, 'summary.csv'))
    write_json(os.path.join(args.out, 'results.json'), {
        'spec': spec.to_dict(),
        'trials': [r.to_dict() for r in results],
    })
    logger.info("%d trials written to %s", len(results), args.out)


def _run_bound_study(args) -> None:
    spec = spec_from_args(args)
    frame = run_bound_study(spec)
    os.makedirs(args.out, exist_ok=True)
    ResultsConverter.write_csv(frame, os.path.join(args.out, 'bounds.csv'))


def _run_synth(args) -> None:
    features, labels = SYNTHETIC_GENERATORS[args.kind](n_samples=args.n, seed=args.seed)
    directory = os.path.dirname(args.out)
    if directory:
        os.makedirs(directory, exist_ok=True)
    save_dataset(args.out, features, labels)


_COMMANDS = {
    'classify': _run_classify,
    'experiment': _run_experiment,
    'bound-study': _run_bound_study,
    'synth': _run_synth,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    try:
        _COMMANDS[args.command](args)
    except (SignedGraphError, OSError, json.JSONDecodeError) as e:
        logger.error("%s failed: %s", args.command, e)
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
