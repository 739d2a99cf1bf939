# -*- coding: utf-8 -*-
"""
Command-line front end.

    degest generate FAMILY [--n N] [--s S] [--k K] [--d D] [--alpha A] [--p P] [--seed S] --out PATH
    degest estimate GRAPH [--algorithm ALG] [--epsilon E] [--delta D] [--seed S] [--out PATH]
                          [--transcript PATH]
    degest bench SPEC.json --out DIR [--emit-plots]
    degest verify GRAPH --tau T [--repeats R] [--seed S]

Exit codes: 0 ok, 1 input error, 2 infeasible parameters, 3 estimator failure.
"""

__author__ = 'Garrett Pennington'
__date__ = '18/10/26'

import argparse
import json
import logging
import os
import sys
import time
from fractions import Fraction

from .config import DEFAULT_DELTA, DEFAULT_EPSILON, EstimatorConfig, as_fraction
from .core import (DegestError, EmptyGraphError, EstimatorError, InfeasibleParameters,
                   SpecValidationError)
from .estimators import all_advice, no_advice, threshold_advice
from .generators import FAMILIES, generate, write_instance
from .graph import read_edge_list
from .oracle import QueryOracle, trial_seeds
from .structures import RunManifest
from .verify import (MIN_LEMMA_REPEATS, MIN_SWEEP_POINTS, SWEEP_FAMILIES, lemma_checks,
                     run_trials, sweep_alpha, sweep_avg_degree, sweep_epsilon,
                     write_plot_data, write_trials_csv)

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2
EXIT_ESTIMATOR = 3

SWEEP_VARIABLES = ('alpha', 'epsilon', 'avg_degree')


class _InputError(DegestError, ValueError):
    code = 'input'


class _Parser(argparse.ArgumentParser):

    """
    Usage errors are input errors: exit 1, leaving 2 to infeasible parameters.
    """

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, "%s: error: %s\n" % (self.prog, message))


def _version():
    from . import __version__
    return __version__


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    return value


def write_manifest(output, command, parameters, seed, inputs, outputs, started):
    """
    Writes ``<output>.manifest.json``.

    :returns:  str -- manifest path
    """
    manifest = RunManifest({
        'command': command,
        'parameters': dict((k, _jsonable(v)) for k, v in sorted(parameters.items())),
        'seed': seed,
        'version': _version(),
        'inputs': list(inputs),
        'outputs': list(outputs),
        'duration_seconds': round(time.time() - started, 6),
    })
    path = output + '.manifest.json'
    with open(path, 'w', newline='\n') as f:
        f.write(json.dumps(manifest.to_dict(), sort_keys=True, indent=2) + "\n")
    return path


def _arguments(args):
    return dict((k, v) for k, v in vars(args).items() if k not in ('func', 'verbose'))


def parse_algorithm(text):
    """
    ``no_advice``, ``threshold_advice:T`` or ``all_advice:T:D``.

    :returns:  tuple -- (name, tau or None, d_tilde or None)
    """
    parts = text.split(':')
    try:
        if parts == ['no_advice']:
            return 'no_advice', None, None
        if parts[0] == 'threshold_advice' and len(parts) == 2:
            tau = int(parts[1])
            if tau >= 1:
                return 'threshold_advice', tau, None
        if parts[0] == 'all_advice' and len(parts) == 3:
            tau, d_tilde = int(parts[1]), Fraction(parts[2])
            if tau >= 1 and d_tilde > 0:
                return 'all_advice', tau, d_tilde
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(
        "expected no_advice, threshold_advice:T or all_advice:T:D with T >= 1, D > 0; got %r" % text)


def cmd_generate(args):
    started = time.time()
    params = dict((name, getattr(args, name)) for name in ('n', 's', 'k', 'd', 'alpha', 'p'))
    params = dict((k, v) for k, v in params.items() if v is not None)
    try:
        instances = generate(args.family, params, args.seed)
    except InfeasibleParameters:
        raise
    except ValueError as e:
        raise _InputError(str(e))

    outputs = []
    if len(instances) == 1:
        outputs.extend(write_instance(instances[0], args.out))
    else:
        root, ext = os.path.splitext(args.out)
        for instance in instances:
            outputs.extend(write_instance(instance, "%s-%s%s" % (root, instance.case_tag, ext)))
    write_manifest(args.out, 'generate', _arguments(args), args.seed, [], outputs, started)
    for path in outputs:
        log.info("wrote %s", path)
    return EXIT_OK


def cmd_estimate(args):
    started = time.time()
    name, tau, d_tilde = args.algorithm
    graph = read_edge_list(args.graph)
    cfg = EstimatorConfig(epsilon=args.epsilon, delta=args.delta)

    transcript = open(args.transcript, 'w', newline='\n') if args.transcript else None
    o = QueryOracle(graph, args.seed, transcript=transcript)
    try:
        if name == 'no_advice':
            estimate = no_advice(o, cfg)
        elif name == 'threshold_advice':
            estimate = threshold_advice(o, tau, cfg, cfg.delta)
        else:
            estimate = all_advice(o, tau, d_tilde, cfg, cfg.delta)
    except (EstimatorError, EmptyGraphError) as e:
        sys.stdout.write(json.dumps({'error': e.code, 'message': str(e),
                                     'counters': o.counters.dict}, sort_keys=True) + "\n")
        return EXIT_ESTIMATOR
    finally:
        if transcript is not None:
            transcript.close()

    text = estimate.to_json() + "\n"
    sys.stdout.write(text)
    if args.out:
        with open(args.out, 'w', newline='\n') as f:
            f.write(text)
        outputs = [args.out] + ([args.transcript] if args.transcript else [])
        write_manifest(args.out, 'estimate', _arguments(args), args.seed, [args.graph],
                       outputs, started)
    return EXIT_OK


def _is_int(value):
    return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def validate_bench_spec(spec):
    """
    :returns:  EstimatorConfig

    :raises SpecValidationError: listing every problem as "field: message"
    """
    errors = []
    if not isinstance(spec, dict):
        raise SpecValidationError(["spec: must be a JSON object"])

    if not isinstance(spec.get('name'), str) or not spec.get('name'):
        errors.append("name: must be a non-empty string")
    if not _is_int(spec.get('seed')) or spec.get('seed') < 0:
        errors.append("seed: must be an integer >= 0")
    if not _is_int(spec.get('trials')) or spec.get('trials') < 1:
        errors.append("trials: must be an integer >= 1")

    cfg = None
    config = spec.get('config', {})
    if not isinstance(config, dict):
        errors.append("config: must be an object")
    else:
        try:
            cfg = EstimatorConfig.from_dict(config)
        except (TypeError, ValueError) as e:
            errors.append("config: %s" % e)

    instances = spec.get('instances', [])
    if not isinstance(instances, list):
        errors.append("instances: must be a list")
        instances = []
    ids = set()
    for i, item in enumerate(instances):
        where = "instances[%d]" % i
        if not isinstance(item, dict):
            errors.append("%s: must be an object" % where)
            continue
        if not isinstance(item.get('id'), str) or not item.get('id'):
            errors.append("%s.id: must be a non-empty string" % where)
        elif item['id'] in ids:
            errors.append("%s.id: duplicate id %r" % (where, item['id']))
        else:
            ids.add(item['id'])
        if item.get('family') not in FAMILIES:
            errors.append("%s.family: must be one of %s" % (where, ", ".join(FAMILIES)))
        if not isinstance(item.get('params'), dict):
            errors.append("%s.params: must be an object" % where)

    sweeps = spec.get('sweeps')
    if not isinstance(sweeps, list) or not sweeps:
        errors.append("sweeps: must be a non-empty list")
        sweeps = []
    for i, sweep in enumerate(sweeps):
        where = "sweeps[%d]" % i
        if not isinstance(sweep, dict):
            errors.append("%s: must be an object" % where)
            continue
        variable = sweep.get('variable')
        family = sweep.get('family')
        if variable not in SWEEP_VARIABLES:
            errors.append("%s.variable: must be one of %s" % (where, ", ".join(SWEEP_VARIABLES)))
        if variable == 'alpha' and family not in SWEEP_FAMILIES:
            errors.append("%s.family: alpha sweeps take %s" % (where, ", ".join(SWEEP_FAMILIES)))
        elif variable == 'avg_degree' and family != 'fixed_degree_cliques':
            errors.append("%s.family: avg_degree sweeps take fixed_degree_cliques" % where)
        elif variable == 'epsilon' and (family not in FAMILIES or family == 'lb_pair'):
            errors.append("%s.family: epsilon sweeps take a single-instance family" % where)
        if not isinstance(sweep.get('params', {}), dict):
            errors.append("%s.params: must be an object" % where)
        values = sweep.get('values')
        if not isinstance(values, list) or len(values) < MIN_SWEEP_POINTS:
            errors.append("%s.values: need a list of >= %d numbers" % (where, MIN_SWEEP_POINTS))
        elif not all(_is_number(v) for v in values):
            errors.append("%s.values: must all be numbers" % where)
        elif variable == 'alpha' and not all(_is_int(v) and v >= 1 for v in values):
            errors.append("%s.values: alpha values must be integers >= 1" % where)
        elif variable == 'epsilon' and not all(0 < v < 1 for v in values):
            errors.append("%s.values: epsilon values must lie in (0, 1)" % where)

    if errors:
        raise SpecValidationError(errors)
    return cfg


def _run_sweep(sweep, cfg, trials, seed):
    params = sweep.get('params', {})
    values = sweep['values']
    if sweep['variable'] == 'alpha':
        return sweep_alpha(cfg, values, trials, seed, n=params.get('n', 1 << 14),
                           d=as_fraction(params.get('d', 2)), family=sweep['family'])
    if sweep['variable'] == 'avg_degree':
        return sweep_avg_degree(cfg, [as_fraction(v) for v in values], trials, seed,
                                n=params.get('n', 1 << 14), alpha=params.get('alpha', 8))
    generate_seed, trial_seed = trial_seeds(seed, 2)
    instance, = generate(sweep['family'], params, generate_seed)
    return sweep_epsilon(cfg, instance.graph, instance.truth, values, trials, trial_seed,
                         instance_id=sweep['family'])


def cmd_bench(args):
    started = time.time()
    try:
        with open(args.spec) as f:
            spec = json.load(f)
    except ValueError as e:
        raise SpecValidationError(["spec: not valid JSON (%s)" % e])
    cfg = validate_bench_spec(spec)
    trials = spec['trials']
    instances = spec.get('instances', [])
    seeds = trial_seeds(spec['seed'], len(instances) + len(spec['sweeps']))

    if not os.path.isdir(args.out):
        os.makedirs(args.out)

    batches = []
    for item, seed in zip(instances, seeds):
        generate_seed, trial_seed = trial_seeds(seed, 2)
        try:
            built = generate(item['family'], item['params'], generate_seed)
        except InfeasibleParameters:
            raise
        except ValueError as e:
            raise SpecValidationError(["instances[%s].params: %s" % (item['id'], e)])
        for instance in built:
            instance_id = item['id'] if len(built) == 1 else "%s-%s" % (item['id'], instance.case_tag)
            batches.append(run_trials(instance.graph, instance.truth, cfg, trials, trial_seed,
                                      instance_id=instance_id))

    reports = []
    for sweep, seed in zip(spec['sweeps'], seeds[len(instances):]):
        log.info("sweep over %s (%s)", sweep['variable'], sweep['family'])
        report = _run_sweep(sweep, cfg, trials, seed)
        reports.append(report)
        batches.extend(report.batches)

    outputs = []
    csv_path = os.path.join(args.out, 'trials.csv')
    with open(csv_path, 'w', newline='') as f:
        write_trials_csv([record for batch in batches for record in batch.records], f)
    outputs.append(csv_path)

    summary_path = os.path.join(args.out, 'summary.json')
    summary = {
        'name': spec['name'],
        'seed': spec['seed'],
        'config': cfg.to_dict(),
        'batches': [batch.to_dict() for batch in batches],
        'sweeps': [report.to_dict() for report in reports],
    }
    with open(summary_path, 'w', newline='\n') as f:
        f.write(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    outputs.append(summary_path)

    if args.emit_plots:
        for i, report in enumerate(reports):
            path = os.path.join(args.out, "%s-%d.dat" % (report.variable, i))
            with open(path, 'w', newline='\n') as f:
                write_plot_data(report, f)
            outputs.append(path)

    write_manifest(os.path.join(args.out, 'bench'), 'bench', _arguments(args), spec['seed'],
                   [args.spec], outputs, started)
    return EXIT_OK


def _format_value(value):
    if value is None:
        return '-'
    if isinstance(value, list):
        return "[%s]" % ", ".join("%.6g" % v for v in value)
    return "%.6g" % value


def cmd_verify(args):
    graph = read_edge_list(args.graph)
    if args.repeats < MIN_LEMMA_REPEATS:
        raise _InputError("--repeats must be >= %d" % MIN_LEMMA_REPEATS)
    report = lemma_checks(graph, args.tau, args.repeats, args.seed)
    out = sys.stdout
    out.write("%-28s %-14s %-32s %s\n" % ('check', 'measured', 'bound', 'result'))
    for check in report.checks:
        out.write("%-28s %-14s %-32s %s\n" % (check.name, _format_value(check.measured),
                                              _format_value(check.bound),
                                              'PASS' if check.passed else 'FAIL'))
    return EXIT_OK


def build_parser():
    parser = _Parser(prog='degest', description="Sublinear average-degree estimation experiments.")
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help="-v for INFO, -vv for DEBUG logging on stderr")
    sub = parser.add_subparsers(dest='command', parser_class=_Parser)
    sub.required = True

    p = sub.add_parser('generate', help="write a synthetic instance and its sidecar")
    p.add_argument('family', choices=FAMILIES)
    p.add_argument('--n', type=int)
    p.add_argument('--s', type=int)
    p.add_argument('--k', type=int)
    p.add_argument('--d', type=Fraction)
    p.add_argument('--alpha', type=int)
    p.add_argument('--p', type=float)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--out', required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser('estimate', help="estimate the average degree of an edge-list file")
    p.add_argument('graph')
    p.add_argument('--algorithm', type=parse_algorithm, default=('no_advice', None, None))
    p.add_argument('--epsilon', type=float, default=DEFAULT_EPSILON)
    p.add_argument('--delta', type=float, default=DEFAULT_DELTA)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--out')
    p.add_argument('--transcript')
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser('bench', help="run an experiment spec")
    p.add_argument('spec')
    p.add_argument('--out', required=True)
    p.add_argument('--emit-plots', action='store_true')
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser('verify', help="empirical CoinToss / MeanEst checks")
    p.add_argument('graph')
    p.add_argument('--tau', type=int, required=True)
    p.add_argument('--repeats', type=int, default=MIN_LEMMA_REPEATS)
    p.add_argument('--seed', type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    """
    :returns:  int -- exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)]
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s')

    try:
        return args.func(args)
    except SpecValidationError as e:
        for message in e.errors:
            sys.stderr.write("degest: %s\n" % message)
        return EXIT_INPUT
    except InfeasibleParameters as e:
        sys.stderr.write("degest: infeasible parameters: %s\n" % e)
        return EXIT_INFEASIBLE
    except (EstimatorError, EmptyGraphError) as e:
        sys.stderr.write("degest: %s: %s\n" % (e.code, e))
        return EXIT_ESTIMATOR
    except (DegestError, ValueError, EnvironmentError) as e:
        sys.stderr.write("degest: %s\n" % e)
        return EXIT_INPUT
