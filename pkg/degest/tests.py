"python -m unittest degest.tests"

import contextlib
import io
import json
import os
import shutil
import tempfile
import unittest
from fractions import Fraction

import networkx as nx
import numpy as np
from scipy import stats

from . import __version__
from .cli import main
from .config import (EstimatorConfig, SLOW_TESTS_ENV, THREADS_ENV, as_fraction,
                     thread_count)
from .core import (EmptyGraphError, GraphError, GraphFormatError, InfeasibleParameters,
                   InsufficientPoints, SafetyCapExceeded, VertexOutOfRange, ZeroDensityError)
from .estimators import (all_advice, coin_toss, mean_est, no_advice, no_advice_tosses,
                         plan_all_advice, plan_threshold_advice, threshold_advice)
from .generators import (Instance, gen_clique_matching, gen_er, gen_fixed_degree_cliques,
                         gen_forest_union, gen_lb_pair, generate, lb_pair_parameters,
                         read_sidecar, write_instance)
from .graph import (Graph, build_graph, degeneracy, ground_truth, is_good_threshold,
                    light_edge_floor, nash_williams_arboricity, parse_edge_list,
                    partition_by_threshold, read_edge_list, write_edge_list)
from .oracle import QueryOracle, trial_seeds
from .structures import (PATH_ALL_ADVICE, PATH_THRESHOLD_FALLBACK, TRIAL_COLUMNS, RunManifest,
                         TrialBatchReport, TrialRecord)
from .verify import (fit_exponent, lemma_checks, run_paired_trials, run_trials, scaling_report,
                     stopping_cost, sweep_alpha, sweep_epsilon, within, write_trials_csv)

# Regular graphs are estimated exactly under any constants.
REDUCED = EstimatorConfig(c_add=1, c_mult=1, c_mean=1)

SLOW = bool(os.environ.get(SLOW_TESTS_ENV))


def cycle(n):
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return build_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def star(leaves):
    return build_graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def path(n):
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def circulant3(n):
    half = n // 2
    edges = [(i, (i + 1) % n) for i in range(n)] + [(i, i + half) for i in range(half)]
    return build_graph(n, edges)


TRIANGLE = complete(3)


def _batch(degree, rand_edge, tau):
    record = TrialRecord({'instance_id': 'x', 'seed': 0, 'd_hat_num': 1, 'd_hat_den': 1,
                          'success': 1, 'tau_used': tau, 'degree_random': degree,
                          'degree_of': 0, 'rand_edge': rand_edge, 'path': PATH_ALL_ADVICE})
    return TrialBatchReport({
        'trials': 1,
        'success_count': 1,
        'mean_tau_used': float(tau),
        'queries': {'degree': {'mean': float(degree)}, 'rand_edge': {'mean': float(rand_edge)}},
    }, records=[record])


def _total_queries(report):
    return report.queries['degree']['mean'] + report.queries['rand_edge']['mean']


class GraphTestCase(unittest.TestCase):

    def test_build_graph(self):
        g = star(4)
        assert g.n == 5 and g.m == 4
        assert g.avg_degree == Fraction(8, 5)
        assert g.max_degree == 4
        assert g.adjacency[0] == [1, 2, 3, 4]
        assert g.has_edge(3, 0) and not g.has_edge(1, 2)
        assert TRIANGLE.avg_degree == 2

    def test_build_graph_rejects(self):
        with self.assertRaises(GraphError) as cm:
            build_graph(3, [(0, 1), (1, 1), (0, 5)])
        assert 'out of range' in str(cm.exception)
        assert cm.exception.index == 2

        with self.assertRaises(GraphError) as cm:
            build_graph(3, [(0, 1), (2, 2)])
        assert 'self-loop' in str(cm.exception)

        with self.assertRaises(GraphError) as cm:
            build_graph(3, [(0, 1), (1, 2), (1, 0)])
        assert 'duplicate' in str(cm.exception)
        assert cm.exception.index == 2

    def test_graph_is_immutable(self):
        g = cycle(4)
        with self.assertRaises(ValueError):
            g.degrees[0] = 7

    def test_partition_star(self):
        part = partition_by_threshold(star(4), 1)
        assert part.heavy == frozenset([0])
        assert part.light == frozenset([1, 2, 3, 4])
        assert (part.m_light, part.m_heavy) == (4, 4)
        assert (part.e_hh, part.e_ll, part.e_hl) == (0, 0, 4)
        assert part.rho_light == Fraction(1, 2)

    def test_partition_triangle(self):
        assert partition_by_threshold(TRIANGLE, 1).rho_light == 0
        assert TRIANGLE.partition(2).rho_light == 1
        assert partition_by_threshold(Graph(4), 0).rho_light == 1

    def test_is_good_threshold(self):
        assert is_good_threshold(star(4), 1)
        assert not is_good_threshold(TRIANGLE, 1)
        with self.assertRaises(EmptyGraphError):
            is_good_threshold(Graph(3), 1)

    def test_degeneracy(self):
        assert degeneracy(complete(4)) == 3
        assert degeneracy(path(5)) == 1
        assert degeneracy(cycle(4)) == 2
        assert degeneracy(Graph(5)) == 0

    def test_nash_williams_arboricity(self):
        assert nash_williams_arboricity(complete(4)) == 2
        assert nash_williams_arboricity(complete(5)) == 3
        assert nash_williams_arboricity(path(6)) == 1
        assert nash_williams_arboricity(cycle(4)) == 2

    def test_ground_truth(self):
        truth = ground_truth(complete(4))
        assert truth.arboricity == 2
        assert truth.tau == 16
        assert truth.rho_light == 1
        assert truth.avg_degree == 3

        # K_6 plus isolated vertices: past the exact limit, only bracketed
        g = build_graph(20, [(u, v) for u in range(6) for v in range(u + 1, 6)])
        truth = ground_truth(g)
        assert (truth.arboricity_lower, truth.arboricity_upper) == (1, 5)
        assert truth.arboricity is None

        truth = ground_truth(star(4), tau=1)
        assert truth.rho_light == Fraction(1, 2)

    def test_structural_corpus(self):
        rng = np.random.default_rng(2024)
        for _ in range(500):
            n = int(rng.integers(2, 13))
            p = rng.random()
            edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
            g = build_graph(n, edges)
            alpha = nash_williams_arboricity(g)
            assert g.m <= n * alpha
            if not g.m:
                continue
            assert partition_by_threshold(g, 8 * alpha).rho_light >= Fraction(3, 8)
            for p_factor in (4, 8, 16):
                part = partition_by_threshold(g, p_factor * alpha)
                assert part.m_light >= light_edge_floor(g.m, p_factor)
            assert alpha <= degeneracy(g) <= 2 * alpha - 1

    def test_partition_random(self):
        rng = np.random.default_rng(7)
        for seed in trial_seeds(7, 30):
            n = int(rng.integers(5, 120))
            g = gen_er(n, float(rng.random()) * 0.3, seed).graph
            previous = -1
            for tau in range(0, g.max_degree + 2):
                part = partition_by_threshold(g, tau)
                assert part.m_light + part.m_heavy == 2 * g.m
                assert part.e_ll + part.e_hl + part.e_hh == g.m
                assert part.m_light == 2 * part.e_ll + part.e_hl
                assert part.m_light >= previous
                previous = part.m_light
            assert previous == 2 * g.m

    def test_parse_edge_list(self):
        g = parse_edge_list(["3 2\n", "0 1\n", "1 2\n", "\n", "\n"])
        assert g.edges == [(0, 1), (1, 2)]

    def test_parse_edge_list_errors(self):
        cases = [
            ([], 1),
            (["3 2\n", "0 1\n"], 3),
            (["3 1\n", "0 x\n"], 2),
            (["3 1\n", "0 1 2\n"], 2),
            (["3 2\n", "0 1\n", "1 0\n"], 3),
            (["3 1\n", "0 7\n"], 2),
            (["3 1\n", "0 1\n", "1 2\n"], 3),
            (["3 1\n", "\n", "0 1\n"], 2),
        ]
        for lines, lineno in cases:
            with self.assertRaises(GraphFormatError) as cm:
                parse_edge_list(lines)
            assert cm.exception.lineno == lineno, (lines, cm.exception)
            assert str(cm.exception).startswith("line %d:" % lineno)

    def test_edge_list_file(self):
        tmp = tempfile.mkdtemp()
        try:
            target = os.path.join(tmp, 'c5.txt')
            write_edge_list(cycle(5), target)
            with open(target) as f:
                assert f.readline() == "5 5\n"
            assert read_edge_list(target) == cycle(5)
        finally:
            shutil.rmtree(tmp)


class ConfigTestCase(unittest.TestCase):

    def test_defaults(self):
        cfg = EstimatorConfig()
        assert (cfg.c_add, cfg.c_mult, cfg.c_mean, cfg.c_split) == (512, 32, 576, 3)
        assert cfg.epsilon_fraction == Fraction(1, 10)
        assert EstimatorConfig.from_dict(cfg.to_dict()) == cfg
        assert cfg.replace(epsilon=0.2).epsilon == 0.2

    def test_validation(self):
        for bad in ({'epsilon': 0}, {'epsilon': 1}, {'delta': 0.5}, {'c_mean': 0},
                    {'max_threshold_doublings': 0}):
            with self.assertRaises(ValueError):
                EstimatorConfig(**bad)
        with self.assertRaises(ValueError):
            EstimatorConfig.from_dict({'eps': 0.1})

    def test_as_fraction(self):
        assert as_fraction(0.1) == Fraction(1, 10)
        assert as_fraction(3) == 3
        assert as_fraction('8/5') == Fraction(8, 5)

    def test_thread_count(self):
        assert thread_count({}) == 1
        assert thread_count({THREADS_ENV: '4'}) == 4
        with self.assertLogs('degest.config', 'WARNING'):
            assert thread_count({THREADS_ENV: 'many'}) == 1
        with self.assertLogs('degest.config', 'WARNING'):
            assert thread_count({THREADS_ENV: '0'}) == 1


class OracleTestCase(unittest.TestCase):

    def test_counters(self):
        o = QueryOracle(TRIANGLE, seed=7)
        assert o.degree_of(2) == 2
        o.degree_random()
        o.rand_edge()
        o.degree_of_many([0, 1, 2])
        c = o.counters
        assert (c.degree_of, c.degree_random, c.rand_edge) == (4, 1, 1)
        assert c.degree_total == 5
        before = c.snapshot()
        o.rand_edge_many(10)
        assert (o.counters - before).rand_edge == 10
        with self.assertRaises(ValueError):
            o.counters.increment('pair', -1)

    def test_local_queries(self):
        o = QueryOracle(star(4))
        assert o.full_nbr(0) == [1, 2, 3, 4]
        assert o.neighbour(0, 2) == 3
        assert o.neighbour(1, 1) is None
        assert o.pair(0, 4) and not o.pair(1, 2)
        assert not o.pair(2, 2)
        c = o.counters
        assert (c.full_nbr, c.neighbour, c.pair) == (1, 2, 3)

    def test_errors(self):
        o = QueryOracle(TRIANGLE)
        with self.assertRaises(VertexOutOfRange):
            o.degree_of(3)
        with self.assertRaises(VertexOutOfRange):
            o.degree_of_many([0, -1])
        with self.assertRaises(EmptyGraphError):
            QueryOracle(Graph(3)).rand_edge()
        with self.assertRaises(EmptyGraphError):
            QueryOracle(Graph(0)).degree_random()

    def test_reproducible(self):
        a, b = QueryOracle(cycle(9), 11), QueryOracle(cycle(9), 11)
        for x, y in zip(a.rand_edge_many(200), b.rand_edge_many(200)):
            assert np.array_equal(x, y)
        assert [a.degree_random() for _ in range(20)] == [b.degree_random() for _ in range(20)]
        assert trial_seeds(5, 8) == trial_seeds(5, 8)
        assert len(set(trial_seeds(5, 8))) == 8
        assert len(set(o.seed for o in a.split(4))) == 4

    def test_degree_random_uniform(self):
        o = QueryOracle(path(10), seed=3)
        vertices, _ = o.degree_random_many(50000)
        counts = np.bincount(vertices, minlength=10)
        assert stats.chisquare(counts).pvalue > 0.001

    def test_rand_edge_uniform(self):
        g = build_graph(8, [(0, 1), (0, 2), (0, 3), (0, 4), (4, 5), (5, 6), (6, 7)])
        o = QueryOracle(g, seed=4)
        us, vs = o.rand_edge_many(70000)
        keys = np.minimum(us, vs) * g.n + np.maximum(us, vs)
        index = dict((u * g.n + v, i) for i, (u, v) in enumerate(g.edges))
        counts = np.bincount([index[k] for k in keys.tolist()], minlength=g.m)
        assert stats.chisquare(counts).pvalue > 0.001
        forward = int(np.count_nonzero(us < vs))
        assert stats.binomtest(forward, us.size).pvalue > 0.001

    def test_transcript(self):
        out = io.StringIO()
        o = QueryOracle(TRIANGLE, seed=1, transcript=out)
        o.degree_of(1)
        o.rand_edge_many(3)
        o.neighbour(0, 5)
        records = [json.loads(line) for line in out.getvalue().splitlines()]
        assert len(records) == 5
        assert records[0]['type'] == 'degree_of'
        assert records[0]['args'] == [1] and records[0]['result'] == 2
        assert records[3]['counter_snapshot']['rand_edge'] == 3
        assert records[4]['result'] is None


class EstimatorTestCase(unittest.TestCase):

    def test_coin_toss(self):
        o = QueryOracle(TRIANGLE, seed=2)
        assert coin_toss(o, 2, 100).rho_hat == 1
        assert coin_toss(o, 1, 50).rho_hat == 0
        assert (o.counters.rand_edge, o.counters.degree_of) == (150, 150)
        with self.assertRaises(ValueError):
            coin_toss(o, 1, 0)
        with self.assertRaises(EmptyGraphError):
            coin_toss(QueryOracle(Graph(4)), 1, 10)

    def test_coin_toss_star(self):
        result = coin_toss(QueryOracle(star(4), seed=9), 1, 40000)
        # rho_L = 1/2
        assert abs(float(result.rho_hat) - 0.5) < 4 * (0.25 / 40000) ** 0.5

    def test_mean_est(self):
        o = QueryOracle(TRIANGLE, seed=2)
        assert mean_est(o, 2, 30).w_hat == 2
        assert mean_est(o, 1, 30).w_hat == 0
        assert o.counters.degree_random == 60
        with self.assertRaises(ValueError):
            mean_est(o, 2, 0)

    def test_plan_all_advice(self):
        cfg = EstimatorConfig()
        q, r = plan_all_advice(2, Fraction(1), cfg, 0.1)
        # q = 576 * 2 / (0.1 * 0.01 * 1)
        assert q == 1152000
        assert r == int(np.ceil(28800 * np.log(20)))

    def test_plan_threshold_advice(self):
        cfg = EstimatorConfig()
        assert plan_threshold_advice(1, cfg, 0.05)[0] == 0
        rounds, reps, inner = plan_threshold_advice(8, cfg, 0.05)
        assert rounds == 3
        assert reps == int(np.ceil(np.log2(16 / 0.05)))
        assert abs(inner - 0.05 / 27) < 1e-15
        assert no_advice_tosses(0, cfg) == int(np.ceil(512 * (2 * np.log(2) - np.log(0.1))))

    def test_all_advice(self):
        o = QueryOracle(TRIANGLE, seed=5)
        estimate = all_advice(o, 2, 1, REDUCED, 0.1)
        assert estimate.d_hat == 2
        assert estimate.path == PATH_ALL_ADVICE
        q, r = plan_all_advice(2, 1, REDUCED, 0.1)
        c = estimate.counters
        assert (c.degree_random, c.rand_edge, c.degree_of) == (q, r, r)
        assert estimate.coin_toss.rho_hat == 1

    def test_all_advice_zero_density(self):
        with self.assertRaises(ZeroDensityError):
            all_advice(QueryOracle(TRIANGLE), 1, 1, REDUCED, 0.1)
        with self.assertRaises(ValueError):
            all_advice(QueryOracle(TRIANGLE), 2, 0, REDUCED, 0.1)

    def test_threshold_advice(self):
        estimate = threshold_advice(QueryOracle(cycle(8), seed=1), 2, REDUCED, 0.05)
        assert estimate.d_hat == 2
        assert estimate.d_tilde_used == 1
        assert estimate.tau_used == 2

    def test_threshold_advice_fallback(self):
        estimate = threshold_advice(QueryOracle(star(4), seed=1), 1, REDUCED, 0.05)
        assert estimate.path == PATH_THRESHOLD_FALLBACK
        assert estimate.d_tilde_used == Fraction(1, 2)

    def test_threshold_advice_cap(self):
        cfg = REDUCED.replace(max_threshold_doublings=1)
        with self.assertRaises(SafetyCapExceeded):
            threshold_advice(QueryOracle(complete(9)), 8, cfg, 0.05)

    def test_no_advice_regular(self):
        for g, d in ((cycle(7), 2), (complete(9), 8), (circulant3(8), 3), (complete(5), 4)):
            for seed in trial_seeds(17, 50):
                estimate = no_advice(QueryOracle(g, seed), REDUCED)
                assert estimate.d_hat == d, (g, seed, estimate)

    def test_no_advice_accounting(self):
        cfg = REDUCED
        estimate = no_advice(QueryOracle(cycle(6), seed=3), cfg)
        assert estimate.tau_used == 2

        rounds, reps, inner = plan_threshold_advice(2, cfg, cfg.delta / 2.0)
        q_inner, r_inner = plan_all_advice(2, Fraction(1), cfg, inner)
        q_final, r_final = plan_all_advice(2, Fraction(1), cfg, cfg.delta / 2.0 / 2)
        tosses = no_advice_tosses(0, cfg) + no_advice_tosses(1, cfg)
        c = estimate.counters
        assert rounds == 1
        assert c.rand_edge == tosses + reps * r_inner + r_final
        assert c.degree_of == c.rand_edge
        assert c.degree_random == reps * q_inner + q_final

    def test_no_advice_deterministic(self):
        a = no_advice(QueryOracle(star(6), seed=21), REDUCED)
        b = no_advice(QueryOracle(star(6), seed=21), REDUCED)
        assert a.to_json() == b.to_json()

    def test_no_advice_errors(self):
        with self.assertRaises(EmptyGraphError):
            no_advice(QueryOracle(Graph(3)), REDUCED)
        with self.assertRaises(SafetyCapExceeded):
            no_advice(QueryOracle(complete(9)), REDUCED.replace(max_threshold_doublings=2))

    def test_zero_estimate(self):
        g = build_graph(2000, [(0, 1)])
        cfg = REDUCED.replace(epsilon=0.9)
        with self.assertLogs('degest.verify', 'WARNING'):
            report = run_trials(g, ground_truth(g), cfg, 50, base_seed=5)
        assert report.failure_count > 0
        for record in report.records:
            if record.failed:
                assert record.path == 'zero_estimate'
            else:
                assert record.dict['d_hat_num'] > 0

    def test_no_advice_star(self):
        truth = Fraction(8, 5)
        for seed in trial_seeds(99, 20):
            estimate = no_advice(QueryOracle(star(4), seed), EstimatorConfig())
            assert within(estimate.d_hat, truth, Fraction(1, 10)), estimate


class GeneratorTestCase(unittest.TestCase):

    def test_clique_matching(self):
        instance = gen_clique_matching(10, 4, 1, seed=3)
        assert instance.graph.m == 9
        assert sorted(instance.graph.degrees.tolist()) == [1] * 6 + [3] * 4
        assert instance.components == {4: 1, 2: 3}
        assert instance.truth.arboricity == 2
        assert instance.truth.avg_degree == Fraction(9, 5)
        assert gen_clique_matching(10, 4, 1, seed=3).graph == instance.graph

    def test_clique_matching_infeasible(self):
        for args in ((10, 4, 3), (11, 4, 1), (10, 1, 1)):
            with self.assertRaises(InfeasibleParameters):
                gen_clique_matching(*args)

    def test_lb_pair_parameters(self):
        plan = lb_pair_parameters(4096, 4, 32)
        assert plan['k'] == 16
        assert plan['regime'] == 'low_degree'
        assert plan['queries'] == ['degree', 'neighbour', 'rand_edge', 'pair']
        assert lb_pair_parameters(4096, 8, 32)['regime'] == 'high_degree'

        plan = lb_pair_parameters(4096, 4, 33)
        assert plan['k'] == 16
        assert plan['adjustment'] == {'k': 1, 'n': 0}

        with self.assertRaises(InfeasibleParameters) as cm:
            lb_pair_parameters(4096, 8, 16)
        assert 'alpha/4' in str(cm.exception)
        with self.assertRaises(InfeasibleParameters):
            lb_pair_parameters(4096, 2, 32)

    def test_lb_pair(self):
        single, double = gen_lb_pair(4096, 4, 32, seed=1)
        assert (single.case_tag, double.case_tag) == ('single_k', 'double_k')
        assert single.graph.n == double.graph.n == 4096
        assert (single.graph.m, double.graph.m) == (9728, 17408)
        ratio = double.truth.avg_degree / single.truth.avg_degree
        assert ratio == Fraction(17408, 9728) and ratio >= Fraction(3, 2)
        assert single.components == {32: 16, 2: 1792}
        assert single.dict['lb_pair']['regime'] == 'low_degree'
        assert single.seed == double.seed == 1

    def test_fixed_degree_cliques(self):
        instance = gen_fixed_degree_cliques(1000, 4, 3, seed=2)
        assert instance.truth.arboricity == 4
        assert instance.graph.m == 1508
        assert abs(float(instance.truth.avg_degree) - 3) < 0.1

    def test_forest_union(self):
        tree = gen_forest_union(60, 1, seed=4)
        assert tree.graph.m == 59
        assert nx.is_tree(tree.graph.to_networkx())
        assert tree.truth.arboricity == 1

        instance = gen_forest_union(200, 3, seed=5)
        assert instance.graph.m <= 3 * 199
        assert instance.arboricity_bound == 3
        assert instance.truth.arboricity_lower <= 3
        assert instance.truth.degeneracy <= 5

    def test_er(self):
        instance = gen_er(50, 0.1, seed=3)
        assert instance.graph.m == nx.fast_gnp_random_graph(50, 0.1, seed=3).number_of_edges()
        with self.assertRaises(InfeasibleParameters):
            gen_er(10, 1.5)

    def test_generate(self):
        assert len(generate('lb_pair', {'n': 4096, 'd': 4, 'alpha': 32}, 1)) == 2
        instance, = generate('clique_matching', {'n': 10, 's': 4, 'k': 1})
        assert instance.graph.m == 9
        with self.assertRaises(ValueError):
            generate('clique_matching', {'n': 10, 's': 4})
        with self.assertRaises(ValueError):
            generate('petersen', {})

    def test_write_instance(self):
        tmp = tempfile.mkdtemp()
        try:
            instance = gen_clique_matching(10, 4, 1, seed=3)
            target = os.path.join(tmp, 'cm.txt')
            assert write_instance(instance, target) == [target, target + '.json']
            assert read_edge_list(target) == instance.graph
            sidecar = read_sidecar(target)
            assert sidecar['family'] == 'clique_matching'
            assert sidecar['truth']['avg_degree'] == [9, 5]
        finally:
            shutil.rmtree(tmp)

    def test_recorded_arboricity_is_exact(self):
        instances = [gen_clique_matching(n, s, k, seed=n)
                     for n, s, k in ((12, 4, 2), (10, 5, 2), (14, 6, 1), (12, 3, 2), (9, 3, 3))]
        instances += [gen_fixed_degree_cliques(12, 2, 2, seed=1),
                      gen_fixed_degree_cliques(12, 3, 2, seed=2)]
        for instance in instances:
            assert instance.truth.arboricity == nash_williams_arboricity(instance.graph), instance

    def test_forest_union_small(self):
        for seed in trial_seeds(12, 10):
            g = gen_forest_union(12, 3, seed).graph
            alpha = nash_williams_arboricity(g)
            assert alpha <= 3
            assert g.m <= 3 * 11
            assert degeneracy(g) <= 2 * 3 - 1

    def test_er_edge_count(self):
        n, p = 10 ** 4, 1e-3
        m = gen_er(n, p, seed=11).graph.m
        expected = n * (n - 1) / 2 * p
        assert abs(m - expected) <= 4 * (expected * (1 - p)) ** 0.5

    def test_write_instance_families(self):
        tmp = tempfile.mkdtemp()
        try:
            instances = [gen_forest_union(30, 2, seed=1), gen_er(40, 0.1, seed=2)]
            instances += list(gen_lb_pair(1024, 4, 16, seed=3))
            for i, instance in enumerate(instances):
                target = os.path.join(tmp, 'g%d.txt' % i)
                write_instance(instance, target)
                assert read_edge_list(target) == instance.graph
                sidecar = read_sidecar(target)
                assert sidecar['family'] == instance.family
                d = instance.truth.avg_degree
                assert sidecar['truth']['avg_degree'] == [d.numerator, d.denominator]
            assert read_sidecar(os.path.join(tmp, 'g3.txt'))['case_tag'] == 'double_k'
        finally:
            shutil.rmtree(tmp)


class VerifyTestCase(unittest.TestCase):

    def test_within(self):
        eps = Fraction(1, 10)
        assert within(Fraction(9, 5), 2, eps)
        assert within(Fraction(11, 5), 2, eps)
        assert not within(Fraction(221, 100), 2, eps)

    def test_run_trials(self):
        g = cycle(6)
        report = run_trials(g, ground_truth(g), REDUCED, 10, base_seed=3, instance_id='c6')
        assert report.success_count == 10 and report.success_rate == 1.0
        assert report.failure_count == 0 and report.fallback_count == 0
        assert report.mean_tau_used == 2.0
        assert report.mean_stopping_cost == stopping_cost(2)
        assert [r.seed for r in report.records] == trial_seeds(3, 10)
        assert report.queries['rand_edge']['median'] > 0

    def test_run_trials_deterministic(self):
        g = star(5)
        truth = ground_truth(g)
        a = run_trials(g, truth, REDUCED, 6, base_seed=8, threads=1)
        b = run_trials(g, truth, REDUCED, 6, base_seed=8, threads=3)
        assert a.to_dict() == b.to_dict()
        first, second = io.StringIO(), io.StringIO()
        write_trials_csv(a.records, first)
        write_trials_csv(b.records, second)
        assert first.getvalue() == second.getvalue()
        assert first.getvalue().splitlines()[0] == ",".join(TRIAL_COLUMNS)

    def test_run_trials_failures(self):
        g = Graph(4)
        with self.assertLogs('degest.verify', 'WARNING'):
            report = run_trials(g, ground_truth(g), REDUCED, 3)
        assert report.failure_count == 3 and report.success_count == 0
        assert report.mean_tau_used is None
        assert set(r.path for r in report.records) == {'empty_graph'}

    def test_fit_exponent(self):
        xs = [1, 2, 4, 8]
        slope, intercept = fit_exponent(xs, [3 * x ** 2 for x in xs])
        self.assertAlmostEqual(slope, 2.0)
        self.assertAlmostEqual(intercept, np.log(3))
        with self.assertRaises(InsufficientPoints):
            fit_exponent(xs[:3], xs[:3])
        with self.assertRaises(InsufficientPoints):
            sweep_alpha(REDUCED, [2], 5)

    def test_sweep_epsilon(self):
        g = cycle(6)
        report = sweep_epsilon(REDUCED, g, ground_truth(g), [0.05, 0.4, 0.1, 0.2], 3,
                               base_seed=4, instance_id='c6')
        assert report.variable == 'epsilon'
        assert report.column('x') == [0.05, 0.1, 0.2, 0.4]
        assert report.column('success_rate') == [1.0] * 4
        assert -2.2 < report.exponent < -1.8
        assert len(report.batches) == 4
        assert report.checks == []

    def test_sweep_alpha(self):
        report = sweep_alpha(REDUCED, [2, 3, 4, 5], 2, base_seed=6, n=256, d=3,
                             family='fixed_degree_cliques')
        assert report.column('x') == [2, 3, 4, 5]
        assert all(point['mean_tau_used'] is not None for point in report.points)

        report = sweep_alpha(REDUCED, [1, 2, 3, 4], 2, base_seed=6, n=200)
        assert report.batches[0].instance_id == 'forest_union-alpha1'
        assert [check.name for check in report.checks] == ['degree_exponent', 'rand_edge_spread',
                                                           'tau_used']
        assert report.check('tau_used').passed

    def test_scaling_checks(self):
        alphas = [2, 4, 8, 16]
        # corrected Degree counts are 100 * alpha
        report = scaling_report('alpha', [
            (a, _batch(100 * a * np.log2(2 * a) ** 4, 1000 * (1 + a / 16.0), 2 * a))
            for a in alphas])
        self.assertAlmostEqual(report.exponent, 1.0)
        assert report.raw_exponent > report.exponent
        self.assertAlmostEqual(report.rand_edge_spread, 2000 / 1125.0)
        assert report.check('tau_used').measured == 2
        assert report.passed

        report = scaling_report('alpha', [(a, _batch(100 * a, 1000 * a, 64 * a)) for a in alphas])
        assert not report.check('rand_edge_spread').passed
        assert report.check('rand_edge_spread').measured == 8
        assert not report.check('tau_used').passed
        assert not report.passed

    def test_epsilon_halving(self):
        cfg = EstimatorConfig(c_mean=1, c_mult=1)
        g = star(4)
        truth = ground_truth(g)
        coarse = run_trials(g, truth, cfg, 10, base_seed=3)
        fine = run_trials(g, truth, cfg.replace(epsilon=0.05), 10, base_seed=3)
        assert coarse.mean_tau_used == fine.mean_tau_used == 1.0
        ratio = _total_queries(fine) / _total_queries(coarse)
        assert 2.5 <= ratio <= 6, ratio

    def test_paired_trials(self):
        first = Instance(cycle(8), {'truth': ground_truth(cycle(8)).to_dict()})
        second = Instance(complete(5), {'truth': ground_truth(complete(5)).to_dict()})
        report = run_paired_trials(first, second, REDUCED, 10, base_seed=2)
        assert report.separated_count == 10 and report.separation_rate == 1.0
        assert report.truth_ratio == 2
        assert [r.seed for r in report.first.records] == [r.seed for r in report.second.records]

        report = run_paired_trials(first, first, REDUCED, 4)
        assert report.separated_count == 0

    def test_lemma_checks_star(self):
        report = lemma_checks(star(4), 1, 10000, seed=12)
        assert report.passed, report
        assert abs(report.check('mean_est_mean').measured - 0.8) < 0.05
        assert report.check('good_threshold_classifier').measured == 0.0

    def test_lemma_checks_triangle(self):
        report = lemma_checks(TRIANGLE, 2, 10000)
        assert report.check('mean_est_variance').measured == 0.0
        assert report.passed

        report = lemma_checks(TRIANGLE, 1, 10000)
        assert report.check('good_threshold_classifier').measured <= 0.01
        assert report.passed

    def test_lemma_checks_repeats(self):
        with self.assertRaises(ValueError):
            lemma_checks(TRIANGLE, 1, 100)

    def test_lemma_checks_random_pairs(self):
        rng = np.random.default_rng(31)
        for seed in trial_seeds(31, 20):
            n = int(rng.integers(30, 301))
            g = gen_er(n, (2 + 6 * float(rng.random())) / (n - 1), seed).graph
            low = max(2, int(np.ceil(float(g.avg_degree))))
            tau = int(rng.integers(low, max(low, g.max_degree) + 1))
            report = lemma_checks(g, tau, 10 ** 5, seed=seed, cfg=REDUCED)
            for name in ('coin_toss_mean', 'mean_est_mean', 'mean_est_variance'):
                assert report.check(name).passed, (n, tau, report.check(name).to_dict())


@contextlib.contextmanager
def captured():
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        yield out, err


class CliTestCase(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def _path(self, name):
        return os.path.join(self.tmp, name)

    def _write_graph(self, name, g):
        target = self._path(name)
        write_edge_list(g, target)
        return target

    def test_generate(self):
        target = self._path('cm.txt')
        with captured():
            code = main(['generate', 'clique_matching', '--n', '10', '--s', '4', '--k', '1',
                         '--out', target])
        assert code == 0
        assert read_edge_list(target).m == 9
        assert os.path.exists(target + '.json')
        with open(target + '.manifest.json') as f:
            manifest = RunManifest(json.load(f))
        assert manifest.command == 'generate'
        assert manifest.outputs == [target, target + '.json']
        assert manifest.inputs == []
        assert manifest.seed == 0 and manifest.version == __version__
        assert manifest.parameters['family'] == 'clique_matching'
        assert manifest.duration >= 0

    def test_generate_forest(self):
        target = self._path('tree.txt')
        with captured():
            assert main(['generate', 'forest_union', '--n', '30', '--alpha', '1',
                         '--out', target]) == 0
        assert nx.is_forest(read_edge_list(target).to_networkx())

    def test_generate_lb_pair(self):
        target = self._path('lb.txt')
        with captured():
            assert main(['generate', 'lb_pair', '--n', '4096', '--d', '4', '--alpha', '32',
                         '--out', target]) == 0
        assert read_edge_list(self._path('lb-single_k.txt')).m == 9728
        assert read_edge_list(self._path('lb-double_k.txt')).m == 17408

    def test_generate_errors(self):
        with captured() as (_, err):
            assert main(['generate', 'lb_pair', '--n', '4096', '--d', '8', '--alpha', '16',
                         '--out', self._path('x.txt')]) == 2
        assert 'alpha/4' in err.getvalue()
        with captured():
            assert main(['generate', 'forest_union', '--alpha', '2',
                         '--out', self._path('x.txt')]) == 1

    def test_estimate(self):
        graph = self._write_graph('c4.txt', cycle(4))
        target = self._path('est.json')
        with captured() as (out, _):
            code = main(['estimate', graph, '--epsilon', '0.5', '--seed', '3', '--out', target])
        assert code == 0
        assert json.loads(out.getvalue())['d_hat'] == [2, 1]
        with open(target) as f:
            assert f.read() == out.getvalue()
        assert os.path.exists(target + '.manifest.json')

        with captured() as (again, _):
            main(['estimate', graph, '--epsilon', '0.5', '--seed', '3'])
        assert again.getvalue() == out.getvalue()

    def test_estimate_zero_density(self):
        graph = self._write_graph('k3.txt', TRIANGLE)
        with captured() as (out, _):
            assert main(['estimate', graph, '--algorithm', 'all_advice:1:1']) == 3
        assert json.loads(out.getvalue())['error'] == 'zero_density'

    def test_estimate_transcript(self):
        graph = self._write_graph('k3.txt', TRIANGLE)
        transcript = self._path('queries.jsonl')
        with captured() as (out, _):
            assert main(['estimate', graph, '--algorithm', 'all_advice:2:1', '--epsilon', '0.9',
                         '--transcript', transcript]) == 0
        q, r = plan_all_advice(2, 1, EstimatorConfig(epsilon=0.9), 0.1)
        with open(transcript) as f:
            lines = f.readlines()
        assert len(lines) == q + 2 * r
        assert json.loads(lines[-1])['counter_snapshot']['rand_edge'] == r

    def test_estimate_bad_input(self):
        bad = self._path('bad.txt')
        with open(bad, 'w') as f:
            f.write("3 1\n0 zero\n")
        with captured() as (_, err):
            assert main(['estimate', bad]) == 1
        assert 'line 2' in err.getvalue()
        with captured():
            assert main(['estimate', bad, '--algorithm', 'all_advice:1']) == 1

    def test_verify(self):
        graph = self._write_graph('star.txt', star(4))
        with captured() as (out, _):
            assert main(['verify', graph, '--tau', '1', '--seed', '5']) == 0
        text = out.getvalue()
        assert 'coin_toss_mean' in text and 'PASS' in text and 'FAIL' not in text

        with captured():
            assert main(['verify', graph, '--tau', '1', '--repeats', '10']) == 1

    def _bench_spec(self, **changes):
        spec = {
            'name': 'smoke',
            'seed': 7,
            'trials': 2,
            'config': {'c_add': 1, 'c_mult': 1, 'c_mean': 1},
            'instances': [{'id': 'cm', 'family': 'clique_matching',
                           'params': {'n': 40, 's': 4, 'k': 2}}],
            'sweeps': [
                {'variable': 'epsilon', 'family': 'clique_matching',
                 'params': {'n': 40, 's': 4, 'k': 2}, 'values': [0.4, 0.3, 0.2, 0.1]},
                {'variable': 'alpha', 'family': 'fixed_degree_cliques',
                 'params': {'n': 256, 'd': 3}, 'values': [2, 3, 4, 5]},
            ],
        }
        spec.update(changes)
        target = self._path('spec.json')
        with open(target, 'w') as f:
            json.dump(spec, f)
        return target

    def test_bench(self):
        spec = self._bench_spec()
        outputs = []
        for name in ('run1', 'run2'):
            out_dir = self._path(name)
            with captured():
                assert main(['bench', spec, '--out', out_dir, '--emit-plots']) == 0
            outputs.append(out_dir)

        for name in ('trials.csv', 'summary.json'):
            with open(os.path.join(outputs[0], name)) as a, open(os.path.join(outputs[1], name)) as b:
                assert a.read() == b.read()

        with open(os.path.join(outputs[0], 'trials.csv')) as f:
            rows = f.read().splitlines()
        assert rows[0] == ",".join(TRIAL_COLUMNS)
        assert len(rows) == 1 + 2 + 4 * 2 + 4 * 2
        for name in ('epsilon-0.dat', 'alpha-1.dat', 'bench.manifest.json'):
            assert os.path.exists(os.path.join(outputs[0], name))
        with open(os.path.join(outputs[0], 'summary.json')) as f:
            summary = json.load(f)
        assert len(summary['sweeps']) == 2
        assert len(summary['sweeps'][1]['points']) == 4

    def test_bench_validation(self):
        spec = self._bench_spec(sweeps=[], trials=0)
        with captured() as (_, err):
            assert main(['bench', spec, '--out', self._path('out')]) == 1
        assert 'sweeps:' in err.getvalue()
        assert 'trials:' in err.getvalue()

        spec = self._bench_spec(sweeps=[{'variable': 'alpha', 'family': 'er',
                                         'params': {}, 'values': [2, 4]}])
        with captured() as (_, err):
            assert main(['bench', spec, '--out', self._path('out')]) == 1
        assert 'sweeps[0].family' in err.getvalue()
        assert 'sweeps[0].values' in err.getvalue()


@unittest.skipUnless(SLOW, "set %s=1 for desk-scale runs" % SLOW_TESTS_ENV)
class DeskScaleTestCase(unittest.TestCase):

    # Reduced Chebyshev and multiplicative constants; c_add stays at its default.
    DESK = EstimatorConfig(c_mean=1, c_mult=1)

    def test_perfect_matching(self):
        n = 10 ** 4
        g = build_graph(n, [(i, i + 1) for i in range(0, n, 2)])
        report = run_trials(g, ground_truth(g), EstimatorConfig(), 200, base_seed=1)
        assert report.success_rate >= 0.85

    def test_star_success_rate(self):
        g = star(4)
        report = run_trials(g, ground_truth(g), EstimatorConfig(), 500, base_seed=2)
        assert report.success_rate >= 0.85

    def test_clique_matching_success_rate(self):
        instance = gen_clique_matching(4000, 16, 200, seed=4)
        report = run_trials(instance.graph, instance.truth, self.DESK, 200, base_seed=4)
        assert report.success_rate >= 0.85
        assert report.mean_tau_used == 16.0

    def test_forest_union_success_rate(self):
        instance = gen_forest_union(4000, 4, seed=6)
        report = run_trials(instance.graph, instance.truth, self.DESK, 200, base_seed=6)
        assert report.success_rate >= 0.85

    def test_lower_bound_pair_separation(self):
        single, double = gen_lb_pair(1024, 4, 16, seed=8)
        report = run_paired_trials(single, double, self.DESK, 100, base_seed=8)
        assert report.truth_ratio == Fraction(4096, 2304)
        assert report.truth_ratio >= Fraction(3, 2)
        assert report.separation_rate >= 0.85

    def test_alpha_sweep(self):
        report = sweep_alpha(EstimatorConfig(c_mean=1), [2, 4, 8, 16, 32], 5, n=1 << 14)
        assert report.check('tau_used').passed, report.check('tau_used').to_dict()
        assert report.check('rand_edge_spread').passed, report.rand_edge_spread
        assert report.check('degree_exponent').passed, report.exponent
        assert 0 < report.raw_exponent <= 1.25, report.raw_exponent

    def test_epsilon_halving(self):
        g = star(4)
        truth = ground_truth(g)
        coarse = run_trials(g, truth, EstimatorConfig(epsilon=0.1), 3, base_seed=3)
        fine = run_trials(g, truth, EstimatorConfig(epsilon=0.05), 3, base_seed=3)
        assert 2.5 <= _total_queries(fine) / _total_queries(coarse) <= 6


if __name__ == '__main__':
    unittest.main()
