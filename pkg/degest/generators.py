# -*- coding: utf-8 -*-

__author__ = 'Garrett Pennington'
__date__ = '18/10/26'

import json
import logging
import math
from fractions import Fraction

import networkx as nx
import numpy as np

from .config import as_fraction
from .core import DegestObject, InfeasibleParameters, fraction_pair
from .graph import Graph, GroundTruth, ground_truth, write_edge_list
from .oracle import trial_seeds

log = logging.getLogger(__name__)

FAMILIES = ('clique_matching', 'lb_pair', 'forest_union', 'er', 'fixed_degree_cliques')

# Attempts at redrawing a forest edge that collides with an earlier forest.
_RESAMPLE_LIMIT = 32


def _rng(seed):
    return np.random.Generator(np.random.PCG64(int(seed)))


class Instance(DegestObject):

    """
    A generated graph plus the metadata written to its sidecar JSON.
    """

    def __init__(self, graph, response=None, **params):
        super(Instance, self).__init__(response, **params)
        self.graph = graph

    @property
    def family(self):
        return self.dict['family']

    @property
    def parameters(self):
        return self.dict['params']

    @property
    def seed(self):
        return self.dict['seed']

    @property
    def truth(self):
        return GroundTruth(self.dict['truth'])

    @property
    def arboricity_bound(self):
        """
        Constructive upper bound on the arboricity, if the family has one.
        """
        return self.dict.get('arboricity_bound')


class LowerBoundInstance(Instance):

    """
    k disjoint cliques of size s plus a perfect matching on the rest.
    """

    @property
    def n(self):
        return self.dict['params']['n']

    @property
    def s(self):
        return self.dict['params']['s']

    @property
    def k(self):
        return self.dict['params']['k']

    @property
    def case_tag(self):
        """
        ``single_k`` or ``double_k``.
        """
        return self.dict['case_tag']

    @property
    def nominal_arboricity(self):
        return self.dict['nominal_arboricity']

    @property
    def components(self):
        """
        Component multiset as {size: count}.
        """
        sizes = {}
        if self.k:
            sizes[self.s] = self.k
        pairs = (self.n - self.k * self.s) // 2
        if pairs:
            sizes[2] = sizes.get(2, 0) + pairs
        return sizes


def _clique_matching_edges(n, s, k):
    iu, ju = np.triu_indices(s, 1)
    offsets = (np.arange(k, dtype=np.int64) * s)[:, None]
    clique = np.stack([(offsets + iu).ravel(), (offsets + ju).ravel()], axis=1)
    start = k * s
    left = np.arange(start, n, 2, dtype=np.int64)
    matching = np.stack([left, left + 1], axis=1)
    return np.concatenate([clique.reshape(-1, 2), matching])


def clique_matching_arboricity(n, s, k):
    """
    Exact arboricity of k K_s plus a matching: ceil(s/2) for the cliques,
    1 for the matching.
    """
    alpha = -(-s // 2) if k else 0
    if n > k * s:
        alpha = max(alpha, 1)
    return alpha


def gen_clique_matching(n, s, k, seed=0, case_tag='single_k', family='clique_matching'):
    """
    :param n: vertex count
    :type n: int
    :param s: clique size, >= 2
    :type s: int
    :param k: clique count
    :type k: int
    :param seed: 64-bit seed for the vertex relabelling
    :type seed: int

    :returns:  LowerBoundInstance

    :raises InfeasibleParameters: naming the violated condition
    """
    if s < 2:
        raise InfeasibleParameters("clique size: need s >= 2, got %d" % s)
    if k < 0:
        raise InfeasibleParameters("clique count: need k >= 0, got %d" % k)
    if k * s > n:
        raise InfeasibleParameters("need k*s <= n, got %d*%d > %d" % (k, s, n))
    if (n - k * s) % 2:
        raise InfeasibleParameters("need n - k*s even for the matching, got %d" % (n - k * s))

    relabel = _rng(seed).permutation(n)
    edges = relabel[_clique_matching_edges(n, s, k)]
    graph = Graph(n, edges)
    assert 2 * graph.m == k * s * (s - 1) + (n - k * s)

    alpha = clique_matching_arboricity(n, s, k)
    log.info("%s: n=%d s=%d k=%d m=%d arboricity=%d", family, n, s, k, graph.m, alpha)
    return LowerBoundInstance(graph, {
        'family': family,
        'params': {'n': n, 's': s, 'k': k},
        'seed': int(seed),
        'case_tag': case_tag,
        'nominal_arboricity': s,
        'arboricity_bound': alpha,
        'truth': ground_truth(graph, known_arboricity=alpha).to_dict(),
    })


def lb_pair_parameters(n, d, alpha_nominal):
    """
    Regime checks and rounding for the k / 2k lower-bound pair, without
    building any graph.

    :param n: vertex count
    :type n: int
    :param d: target average degree
    :type d: Fraction
    :param alpha_nominal: clique size
    :type alpha_nominal: int

    :returns:  dict -- {n, k, k_exact, adjustment, regime, queries}

    :raises InfeasibleParameters: naming the violated inequality
    """
    d = as_fraction(d)
    alpha = int(alpha_nominal)
    if alpha < 2:
        raise InfeasibleParameters("need alpha >= 2, got %d" % alpha)
    if d < 4:
        raise InfeasibleParameters("need d >= 4, got %s" % d)
    if d > Fraction(alpha, 4):
        raise InfeasibleParameters("need d <= alpha/4, got d=%s > %s" % (d, Fraction(alpha, 4)))

    if d * d >= alpha:
        regime = 'high_degree'
    else:
        regime = 'low_degree'
        # sqrt(alpha) <= n^(1/3)
        if alpha ** 3 > n ** 2:
            raise InfeasibleParameters("low-degree regime needs sqrt(alpha) <= n^(1/3)")

    k_exact = Fraction(n) * d / (alpha * alpha)
    k = int(math.floor(k_exact + Fraction(1, 2)))
    adjustment = {'k': 0, 'n': 0}
    if alpha % 2 and k % 2:
        # k*alpha must be even so both instances leave a matchable remainder
        step = -1 if (k_exact < k and k > 1) else 1
        k += step
        adjustment['k'] = step
    if k < 1:
        raise InfeasibleParameters("need k = n*d/alpha^2 >= 1, got %s" % k_exact)
    if (n - k * alpha) % 2:
        n -= 1
        adjustment['n'] = -1
    if 8 * 2 * k > n:
        raise InfeasibleParameters("need 2k <= n/8, got 2k=%d with n=%d" % (2 * k, n))
    if 2 * k * alpha > n:
        raise InfeasibleParameters("need 2k*alpha <= n, got %d > %d" % (2 * k * alpha, n))

    queries = ['degree', 'neighbour', 'rand_edge']
    if alpha * alpha <= n:
        queries.append('pair')
        if alpha ** 5 <= n ** 2:
            queries.append('full_nbr')

    return {
        'n': n,
        'k': k,
        'k_exact': fraction_pair(k_exact),
        'adjustment': adjustment,
        'regime': regime,
        'queries': queries,
    }


def gen_lb_pair(n, d, alpha_nominal, seed=0):
    """
    The two indistinguishability instances: k and 2k cliques of size
    alpha_nominal, matching on the rest, equal n.

    :returns:  tuple -- (single_k, double_k) LowerBoundInstances
    """
    plan = lb_pair_parameters(n, d, alpha_nominal)
    if plan['adjustment'] != {'k': 0, 'n': 0}:
        log.info("lb_pair adjusted %s to keep the matching feasible", plan['adjustment'])

    seeds = trial_seeds(seed, 2)
    pair = (
        gen_clique_matching(plan['n'], alpha_nominal, plan['k'], seeds[0], 'single_k', 'lb_pair'),
        gen_clique_matching(plan['n'], alpha_nominal, 2 * plan['k'], seeds[1], 'double_k', 'lb_pair'),
    )
    ratio = pair[1].truth.avg_degree / pair[0].truth.avg_degree
    if ratio < Fraction(3, 2):
        raise InfeasibleParameters("average-degree ratio %s below 3/2" % ratio)

    for instance in pair:
        instance.dict['instance_seed'] = instance.dict['seed']
        instance.dict['seed'] = int(seed)
        instance.dict['lb_pair'] = dict(plan, target_d=fraction_pair(as_fraction(d)),
                                        ratio=fraction_pair(ratio))
    return pair


def gen_fixed_degree_cliques(n, alpha, d, seed=0):
    """
    Cliques of size 2*alpha (arboricity exactly alpha) plus a matching,
    with k picked so the average degree 1 + k*s*(s-2)/n is nearest to d.

    :returns:  LowerBoundInstance
    """
    if alpha < 2:
        raise InfeasibleParameters("need alpha >= 2, got %d" % alpha)
    if n % 2:
        raise InfeasibleParameters("need even n, got %d" % n)
    s = 2 * alpha
    k_exact = Fraction(n) * (as_fraction(d) - 1) / (s * (s - 2))
    k = max(1, int(math.floor(k_exact + Fraction(1, 2))))
    if k * s > n:
        raise InfeasibleParameters("need k*s <= n, got %d*%d > %d" % (k, s, n))
    instance = gen_clique_matching(n, s, k, seed, family='fixed_degree_cliques')
    instance.dict['params'].update({'alpha': alpha, 'd': fraction_pair(as_fraction(d))})
    return instance


def gen_forest_union(n, alpha, seed=0):
    """
    Union of alpha random spanning trees. Edges that repeat an earlier
    tree's edge are redrawn, and dropped if no fresh edge turns up, so
    the arboricity is at most alpha.

    :returns:  Instance
    """
    if alpha < 1:
        raise InfeasibleParameters("need alpha >= 1, got %d" % alpha)
    if n < 2:
        raise InfeasibleParameters("need n >= 2, got %d" % n)

    rng = _rng(seed)
    seen = set()
    edges = []
    dropped = 0
    positions = np.arange(1, n)
    for _ in range(alpha):
        order = rng.permutation(n)
        parent_pos = (rng.random(n - 1) * positions).astype(np.int64)
        child = order[1:]
        parent = order[parent_pos]
        lo = np.minimum(child, parent)
        hi = np.maximum(child, parent)
        keys = (lo * n + hi).tolist()

        fresh = []
        for i, key in enumerate(keys):
            if key in seen:
                key = None
                for _ in range(_RESAMPLE_LIMIT):
                    p = int(order[rng.integers(0, i + 1)])
                    c = int(child[i])
                    candidate = min(c, p) * n + max(c, p)
                    if candidate not in seen:
                        key = candidate
                        break
                if key is None:
                    dropped += 1
                    continue
            fresh.append(key)
        seen.update(fresh)
        edges.extend(fresh)

    pairs = [(key // n, key % n) for key in edges]
    graph = Graph(n, pairs)
    log.info("forest_union: n=%d alpha=%d m=%d (%d edges dropped)", n, alpha, graph.m, dropped)
    return Instance(graph, {
        'family': 'forest_union',
        'params': {'n': n, 'alpha': alpha},
        'seed': int(seed),
        'arboricity_bound': alpha,
        'truth': ground_truth(graph, known_arboricity=1 if alpha == 1 else None).to_dict(),
    })


def gen_er(n, p, seed=0):
    """
    Erdos-Renyi G(n, p).

    :returns:  Instance
    """
    if not 0 <= p <= 1:
        raise InfeasibleParameters("need 0 <= p <= 1, got %r" % (p,))
    g = nx.fast_gnp_random_graph(n, p, seed=int(seed) % (1 << 32))
    graph = Graph(n, list(g.edges()))
    log.info("er: n=%d p=%r m=%d", n, p, graph.m)
    response = {
        'family': 'er',
        'params': {'n': n, 'p': p},
        'seed': int(seed),
    }
    if n:
        response['truth'] = ground_truth(graph).to_dict()
    return Instance(graph, response)


def write_instance(instance, path):
    """
    Writes the edge list to ``path`` and the metadata to ``path + '.json'``.

    :returns:  list -- paths written
    """
    write_edge_list(instance.graph, path)
    sidecar = path + '.json'
    with open(sidecar, 'w', newline='\n') as f:
        f.write(json.dumps(instance.to_dict(), sort_keys=True, indent=2) + "\n")
    return [path, sidecar]


def read_sidecar(path):
    """
    :returns: dict -- metadata written by :func:`write_instance`
    """
    with open(path + '.json') as f:
        return json.load(f)


FAMILY_PARAMS = {
    'clique_matching': ('n', 's', 'k'),
    'lb_pair': ('n', 'd', 'alpha'),
    'forest_union': ('n', 'alpha'),
    'er': ('n', 'p'),
    'fixed_degree_cliques': ('n', 'alpha', 'd'),
}


def generate(family, params, seed=0):
    """
    Builds the instance(s) of one family from a parameter dict.

    :param family: one of :data:`FAMILIES`
    :type family: str
    :param params: the family's parameters, see :data:`FAMILY_PARAMS`
    :type params: dict

    :returns:  tuple -- one Instance, or two for ``lb_pair``

    :raises ValueError: unknown family, missing or unexpected parameters
    """
    if family not in FAMILY_PARAMS:
        raise ValueError("unknown family %r, expected one of %s" % (family, ", ".join(FAMILIES)))
    wanted = FAMILY_PARAMS[family]
    missing = [name for name in wanted if params.get(name) is None]
    if missing:
        raise ValueError("%s needs %s" % (family, ", ".join("--%s" % name for name in missing)))
    extra = sorted(name for name in params if name not in wanted and params[name] is not None)
    if extra:
        raise ValueError("%s does not take %s" % (family, ", ".join(extra)))

    p = params
    if family == 'clique_matching':
        return (gen_clique_matching(int(p['n']), int(p['s']), int(p['k']), seed),)
    if family == 'lb_pair':
        return gen_lb_pair(int(p['n']), as_fraction(p['d']), int(p['alpha']), seed)
    if family == 'forest_union':
        return (gen_forest_union(int(p['n']), int(p['alpha']), seed),)
    if family == 'er':
        return (gen_er(int(p['n']), float(p['p']), seed),)
    return (gen_fixed_degree_cliques(int(p['n']), int(p['alpha']), as_fraction(p['d']), seed),)
