# -*- coding: utf-8 -*-
"""
Repeated-trial experiments: success rates, query-scaling fits and
empirical checks of the CoinToss / MeanEst guarantees.

Every report is a deterministic function of its inputs and base seed;
trials may run on a thread pool (see ``DEGEST_THREADS``) but results are
reduced in seed order.
"""

__author__ = 'Garrett Pennington'
__date__ = '18/10/26'

import csv
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np
from scipy import stats

from .config import SAMPLE_CHUNK, EstimatorConfig, thread_count
from .core import EmptyGraphError, EstimatorError, InsufficientPoints
from .estimators import (GOOD_THRESHOLD_CUTOFF, no_advice, toss_samples,
                         truncated_degree_samples)
from .generators import gen_fixed_degree_cliques, gen_forest_union
from .graph import partition_by_threshold
from .oracle import QueryOracle, trial_seeds
from .structures import (LemmaReport, PATH_THRESHOLD_FALLBACK, PairedTrialReport,
                         ScalingReport, TRIAL_COLUMNS, TrialBatchReport, TrialRecord)

log = logging.getLogger(__name__)

MIN_SWEEP_POINTS = 4
MIN_LEMMA_REPEATS = 10 ** 4
STANDARD_ERRORS = 4
VARIANCE_SLACK = Fraction(105, 100)

# alpha sweeps
DEGREE_EXPONENT_CEILING = 1.25
RAND_EDGE_SPREAD_LIMIT = 3
TAU_PER_ALPHA_LIMIT = 32

SWEEP_FAMILIES = ('fixed_degree_cliques', 'forest_union')


def within(d_hat, d, epsilon):
    """
    Exact test of (1 - eps) d <= d_hat <= (1 + eps) d.
    """
    return (1 - epsilon) * d <= d_hat <= (1 + epsilon) * d


def stopping_cost(tau):
    return tau * math.log2(max(tau, 2)) ** 4


def _trial(graph, truth, cfg, instance_id, seed, estimator):
    o = QueryOracle(graph, seed)
    row = {'instance_id': instance_id, 'seed': seed}
    try:
        estimate = estimator(o, cfg)
    except (EstimatorError, EmptyGraphError) as e:
        log.warning("%s seed=%d: %s", instance_id, seed, e)
        row.update({'d_hat_num': '', 'd_hat_den': '', 'success': 0, 'tau_used': '',
                    'path': e.code})
    else:
        d_hat = estimate.d_hat
        row.update({
            'd_hat_num': d_hat.numerator,
            'd_hat_den': d_hat.denominator,
            'success': int(within(d_hat, truth.avg_degree, cfg.epsilon_fraction)),
            'tau_used': estimate.tau_used,
            'path': estimate.path,
        })
    for kind in ('degree_random', 'degree_of', 'rand_edge'):
        row[kind] = o.counters.dict[kind]
    return TrialRecord(row)


def _summary(values):
    values = np.asarray(values, dtype=float)
    return {
        'mean': float(values.mean()),
        'median': float(np.median(values)),
        'p95': float(np.percentile(values, 95)),
    }


def run_trials(graph, truth, cfg, trials, base_seed=0, instance_id='instance',
               threads=None, estimator=no_advice):
    """Independent seeded estimator runs on one graph.

    :param graph: instance
    :type graph: degest.graph.Graph
    :param truth: exact reference values
    :type truth: degest.graph.GroundTruth
    :param cfg: accuracy and constants
    :type cfg: degest.config.EstimatorConfig
    :param trials: number of runs, >= 1
    :type trials: int
    :param base_seed: 64-bit seed the per-trial seeds derive from
    :type base_seed: int
    :param threads: worker threads, default from DEGEST_THREADS
    :type threads: int
    :param estimator: callable(oracle, cfg) -> DegreeEstimate
    :type estimator: function

    :returns:  TrialBatchReport
    """
    if trials < 1:
        raise ValueError("need at least one trial, got %r" % (trials,))
    threads = threads or thread_count()
    seeds = trial_seeds(base_seed, trials)

    def one(seed):
        return _trial(graph, truth, cfg, instance_id, seed, estimator)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(one, seeds))
    else:
        records = [one(seed) for seed in seeds]

    done = [r for r in records if not r.failed]
    queries = dict((kind, _summary([r.dict[kind] for r in records]))
                   for kind in ('degree_random', 'degree_of'))
    queries['rand_edge'] = _summary([r.rand_edge_queries for r in records])
    queries['degree'] = _summary([r.degree_queries for r in records])

    report = TrialBatchReport({
        'instance_id': instance_id,
        'trials': trials,
        'success_count': sum(1 for r in records if r.success),
        'failure_count': trials - len(done),
        'fallback_count': sum(1 for r in done if r.path == PATH_THRESHOLD_FALLBACK),
        'queries': queries,
        'mean_tau_used': float(np.mean([r.tau_used for r in done])) if done else None,
        'mean_stopping_cost': float(np.mean([stopping_cost(r.tau_used) for r in done])) if done else None,
        'base_seed': base_seed,
        'epsilon': cfg.epsilon,
        'delta': cfg.delta,
    }, records=records)
    log.info("%s: %d/%d successes, %d failures", instance_id, report.success_count,
             trials, report.failure_count)
    return report


def _disjoint(a, b, epsilon):
    """
    True when [(1 - eps) a, (1 + eps) a] and the same interval around b
    do not meet.
    """
    low, high = sorted([a, b])
    return (1 + epsilon) * low < (1 - epsilon) * high


def run_paired_trials(first, second, cfg, trials, base_seed=0, threads=None,
                      estimator=no_advice):
    """Seed-paired estimator runs on two instances, e.g. a lower-bound pair.

    Trial i on both instances uses the same seed. A pair counts as
    separated when both runs finish and their (1 +- eps) intervals are
    disjoint.

    :param first: instance
    :type first: degest.generators.Instance
    :param second: instance
    :type second: degest.generators.Instance

    :returns:  PairedTrialReport -- ``first`` / ``second`` hold the two batches
    """
    batches = []
    for tag, instance in (('first', first), ('second', second)):
        instance_id = instance.dict.get('case_tag', tag)
        batches.append(run_trials(instance.graph, instance.truth, cfg, trials, base_seed,
                                  instance_id=instance_id, threads=threads,
                                  estimator=estimator))

    eps = cfg.epsilon_fraction
    separated = 0
    for a, b in zip(batches[0].records, batches[1].records):
        if a.failed or b.failed:
            continue
        if _disjoint(Fraction(a.dict['d_hat_num'], a.dict['d_hat_den']),
                     Fraction(b.dict['d_hat_num'], b.dict['d_hat_den']), eps):
            separated += 1

    ratio = second.truth.avg_degree / first.truth.avg_degree
    log.info("paired trials: %d/%d separated (true ratio %s)", separated, trials, ratio)
    return PairedTrialReport({
        'trials': trials,
        'separated_count': separated,
        'truth_ratio': [ratio.numerator, ratio.denominator],
        'base_seed': base_seed,
        'epsilon': cfg.epsilon,
    }, first=batches[0], second=batches[1])


def fit_exponent(xs, ys):
    """
    Least-squares slope of log y against log x.

    :returns:  tuple -- (slope, intercept)

    :raises InsufficientPoints: with fewer than four points
    """
    if len(xs) < MIN_SWEEP_POINTS:
        raise InsufficientPoints("a fit needs >= %d points, got %d" % (MIN_SWEEP_POINTS, len(xs)))
    fit = stats.linregress(np.log(np.asarray(xs, dtype=float)),
                           np.log(np.asarray(ys, dtype=float)))
    return float(fit.slope), float(fit.intercept)


def _corrected_degree_queries(report):
    done = [r for r in report.records if not r.failed]
    if not done:
        return None
    return float(np.mean([r.degree_queries / math.log2(max(r.tau_used, 2)) ** 4 for r in done]))


def scaling_report(variable, batches):
    """
    :param variable: ``alpha``, ``epsilon`` or ``avg_degree``
    :type variable: str
    :param batches: (x, TrialBatchReport) pairs
    :type batches: list

    :returns:  ScalingReport -- its ``batches`` attribute keeps the inputs
    """
    batches = sorted(batches, key=lambda item: item[0])
    points = []
    for x, report in batches:
        points.append({
            'x': x,
            'degree_queries': report.queries['degree']['mean'],
            'rand_edge_queries': report.queries['rand_edge']['mean'],
            'degree_queries_corrected': _corrected_degree_queries(report),
            'mean_tau_used': report.mean_tau_used,
            'success_rate': report.success_rate,
        })
    usable = [p for p in points if p['degree_queries_corrected']]
    slope, intercept = fit_exponent([p['x'] for p in usable],
                                    [p['degree_queries_corrected'] for p in usable])
    raw = [p for p in points if p['degree_queries'] > 0]
    raw_slope, _ = fit_exponent([p['x'] for p in raw], [p['degree_queries'] for p in raw])

    rand_edge = [p['rand_edge_queries'] for p in points]
    spread = max(rand_edge) / min(rand_edge) if min(rand_edge) > 0 else None

    checks = []
    if variable == 'alpha':
        checks.append({'name': 'degree_exponent', 'measured': slope,
                       'bound': DEGREE_EXPONENT_CEILING,
                       'passed': slope <= DEGREE_EXPONENT_CEILING})
        checks.append({'name': 'rand_edge_spread', 'measured': spread,
                       'bound': RAND_EDGE_SPREAD_LIMIT,
                       'passed': spread is not None and spread < RAND_EDGE_SPREAD_LIMIT})
        ratios = [p['mean_tau_used'] / p['x'] for p in points if p['mean_tau_used'] is not None]
        worst = max(ratios) if ratios else None
        checks.append({'name': 'tau_used', 'measured': worst, 'bound': TAU_PER_ALPHA_LIMIT,
                       'passed': worst is not None and worst <= TAU_PER_ALPHA_LIMIT})

    result = ScalingReport({
        'variable': variable,
        'points': points,
        'exponent': slope,
        'intercept': intercept,
        'raw_exponent': raw_slope,
        'rand_edge_spread': spread,
        'checks': checks,
    })
    result.batches = [report for _, report in batches]
    return result



def _require_points(values):
    if len(values) < MIN_SWEEP_POINTS:
        raise InsufficientPoints("a sweep needs >= %d points, got %d"
                                 % (MIN_SWEEP_POINTS, len(values)))


def sweep_alpha(cfg, alphas, trials, base_seed=0, n=1 << 14, d=2,
                family='forest_union', threads=None):
    """
    Query counts against arboricity. ``forest_union`` has average degree
    close to 2*alpha and stops near tau = 2*alpha. ``fixed_degree_cliques``
    keeps the average degree near ``d``, but for small ``d`` its matching
    makes tau = 1 good at every alpha.

    :returns:  ScalingReport
    """
    _require_points(alphas)
    if family not in SWEEP_FAMILIES:
        raise ValueError("alpha sweeps support %s, not %r" % (", ".join(SWEEP_FAMILIES), family))
    seeds = trial_seeds(base_seed, 2 * len(alphas))
    batches = []
    for i, alpha in enumerate(alphas):
        if family == 'fixed_degree_cliques':
            instance = gen_fixed_degree_cliques(n, alpha, d, seeds[2 * i])
        else:
            instance = gen_forest_union(n, alpha, seeds[2 * i])
        report = run_trials(instance.graph, instance.truth, cfg, trials, seeds[2 * i + 1],
                            instance_id="%s-alpha%d" % (family, alpha), threads=threads)
        batches.append((alpha, report))
    return scaling_report('alpha', batches)


def sweep_avg_degree(cfg, degrees, trials, base_seed=0, n=1 << 14, alpha=8, threads=None):
    """
    Query counts against the average degree at fixed arboricity.

    :returns:  ScalingReport
    """
    _require_points(degrees)
    seeds = trial_seeds(base_seed, 2 * len(degrees))
    batches = []
    for i, d in enumerate(degrees):
        instance = gen_fixed_degree_cliques(n, alpha, d, seeds[2 * i])
        x = float(instance.truth.avg_degree)
        report = run_trials(instance.graph, instance.truth, cfg, trials, seeds[2 * i + 1],
                            instance_id="fixed_degree_cliques-d%s" % d, threads=threads)
        batches.append((x, report))
    return scaling_report('avg_degree', batches)


def sweep_epsilon(cfg, graph, truth, epsilons, trials, base_seed=0, instance_id='instance',
                  threads=None):
    """
    Query counts against epsilon on one graph.

    :returns:  ScalingReport
    """
    _require_points(epsilons)
    seeds = trial_seeds(base_seed, len(epsilons))
    batches = []
    for eps, seed in zip(epsilons, seeds):
        report = run_trials(graph, truth, cfg.replace(epsilon=eps), trials, seed,
                            instance_id="%s-eps%s" % (instance_id, eps), threads=threads)
        batches.append((eps, report))
    return scaling_report('epsilon', batches)


def _mean_check(name, samples, exact):
    """
    Sample mean against an exact value, within STANDARD_ERRORS standard errors.
    """
    count = samples.size
    total = int(samples.sum())
    mean = Fraction(total, count)
    se = math.sqrt(float(samples.var(ddof=1)) / count) if count > 1 else 0.0
    if se == 0:
        passed = mean == exact
    else:
        passed = abs(float(mean - exact)) <= STANDARD_ERRORS * se
    return {
        'name': name,
        'measured': float(mean),
        'bound': [float(exact) - STANDARD_ERRORS * se, float(exact) + STANDARD_ERRORS * se],
        'passed': bool(passed),
    }


def _good_verdicts(o, tau, r, repeats):
    """
    Number of ``repeats`` independent r-toss CoinToss runs with
    rho^ >= 5/16, drawn as one stream of repeats * r tosses.
    """
    cut = GOOD_THRESHOLD_CUTOFF
    rows_per_chunk = max(1, SAMPLE_CHUNK // r)
    good = 0
    done = 0
    while done < repeats:
        rows = min(rows_per_chunk, repeats - done)
        tosses = np.concatenate(list(toss_samples(o, tau, rows * r)))
        hits = tosses.reshape(rows, r).sum(axis=1)
        good += int(np.count_nonzero(hits * cut.denominator >= cut.numerator * r))
        done += rows
    return good


def lemma_checks(g, tau, repeats, seed=0, cfg=None, classifier_delta=0.01):
    """Empirical CoinToss / MeanEst checks at one threshold.

    * ``coin_toss_mean``: mean of single-toss runs against exact rho_L
    * ``mean_est_mean``: mean of single-sample runs against exact m_L/n
    * ``mean_est_variance``: sample variance <= tau * (m_L/n) * 1.05
    * ``good_threshold_classifier``: share of CoinToss runs, sized for
      failure probability ``classifier_delta``, landing on the wrong side
      of 5/16. Only asserted when rho_L < 1/4 or rho_L >= 3/8.

    :param g: graph
    :type g: degest.graph.Graph
    :param tau: threshold
    :type tau: int
    :param repeats: runs per check, >= 10^4
    :type repeats: int

    :returns:  LemmaReport
    """
    if repeats < MIN_LEMMA_REPEATS:
        raise ValueError("lemma checks need >= %d repeats, got %d" % (MIN_LEMMA_REPEATS, repeats))
    cfg = cfg or EstimatorConfig()
    part = partition_by_threshold(g, tau)
    rho = part.rho_light
    w_light = Fraction(part.m_light, g.n)
    o = QueryOracle(g, seed)
    checks = []

    if g.m:
        tosses = np.concatenate(list(toss_samples(o, tau, repeats))).astype(np.int64)
        checks.append(_mean_check('coin_toss_mean', tosses, rho))

    w = np.concatenate(list(truncated_degree_samples(o, tau, repeats))).astype(np.int64)
    checks.append(_mean_check('mean_est_mean', w, w_light))
    variance = float(w.var(ddof=1))
    bound = float(tau * w_light * VARIANCE_SLACK)
    checks.append({'name': 'mean_est_variance', 'measured': variance, 'bound': bound,
                   'passed': variance <= bound})

    if g.m:
        r = int(math.ceil(cfg.c_add * math.log(2 / classifier_delta)))
        good = _good_verdicts(o, tau, r, repeats)
        if rho < Fraction(1, 4):
            wrong = good
        elif rho >= Fraction(3, 8):
            wrong = repeats - good
        else:
            wrong = None
        limit = 2 * classifier_delta
        checks.append({
            'name': 'good_threshold_classifier',
            'measured': None if wrong is None else float(wrong) / repeats,
            'bound': limit,
            'passed': True if wrong is None else float(wrong) / repeats <= limit,
            'tosses': r,
        })

    return LemmaReport({
        'tau': int(tau),
        'repeats': int(repeats),
        'seed': int(seed),
        'rho_light': [rho.numerator, rho.denominator],
        'w_light': [w_light.numerator, w_light.denominator],
        'checks': checks,
    })


def write_trials_csv(records, f):
    """
    :param records: TrialRecords
    :type records: list
    :param f: text stream opened with newline=''
    :type f: file
    """
    writer = csv.writer(f, lineterminator='\n')
    writer.writerow(TRIAL_COLUMNS)
    for record in records:
        writer.writerow(record.row())


def write_plot_data(report, f):
    """
    Whitespace-separated columns: x, mean Degree queries, mean RandEdge queries.
    """
    f.write("# %s degree_queries rand_edge_queries\n" % report.variable)
    for point in report.points:
        f.write("%r %r %r\n" % (point['x'], point['degree_queries'], point['rand_edge_queries']))
