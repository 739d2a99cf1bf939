# -*- coding: utf-8 -*-

__author__ = 'Garrett Pennington'
__date__ = '18/10/26'

import io
import logging
from fractions import Fraction

import networkx as nx
import numpy as np

from .config import EXACT_ARBORICITY_LIMIT
from .core import (DegestObject, EmptyGraphError, GraphError, GraphFormatError,
                   fraction_pair, pair_fraction)

log = logging.getLogger(__name__)

# Subset enumeration is 2^n; refuse outright past this.
_NASH_WILLIAMS_HARD_LIMIT = 24


def _readonly(array):
    array.setflags(write=False)
    return array


class Graph(object):

    """
    Immutable simple undirected graph on vertices 0..n-1.

    Adjacency is kept in compressed (CSR) form: the neighbours of v are
    ``indices[indptr[v]:indptr[v + 1]]``, in ascending order.

    >>> g = build_graph(3, [(0, 1), (1, 2), (0, 2)])
    >>> g.m, list(g.degrees)
    (3, [2, 2, 2])
    """

    def __init__(self, n, edge_list=()):
        """
        :param n: vertex count
        :type n: int
        :param edge_list: unordered vertex pairs
        :type edge_list: iterable

        :raises GraphError: endpoint out of range, self-loop or duplicate edge.
            The error's ``index`` attribute is the position of the offending pair.
        """
        n = int(n)
        if n < 0:
            raise GraphError("vertex count must be >= 0, got %d" % n)

        pairs = np.asarray(list(edge_list), dtype=np.int64)
        if pairs.size == 0:
            pairs = np.empty((0, 2), dtype=np.int64)
        if pairs.ndim != 2 or pairs.shape[1] != 2:
            raise GraphError("edges must be pairs of vertex ids")

        bad = np.flatnonzero((pairs < 0).any(axis=1) | (pairs >= n).any(axis=1))
        if bad.size:
            i = int(bad[0])
            raise self._error("edge (%d, %d): endpoint out of range [0, %d)"
                              % (pairs[i, 0], pairs[i, 1], n), i)

        loops = np.flatnonzero(pairs[:, 0] == pairs[:, 1])
        if loops.size:
            i = int(loops[0])
            raise self._error("edge (%d, %d): self-loop" % (pairs[i, 0], pairs[i, 1]), i)

        lo = pairs.min(axis=1)
        hi = pairs.max(axis=1)
        keys = lo * max(n, 1) + hi
        _, first, counts = np.unique(keys, return_index=True, return_counts=True)
        if (counts > 1).any():
            dup_keys = set(keys[first[counts > 1]].tolist())
            seen = set()
            for i, key in enumerate(keys.tolist()):
                if key in dup_keys:
                    if key in seen:
                        raise self._error("edge (%d, %d): duplicate edge"
                                          % (pairs[i, 0], pairs[i, 1]), i)
                    seen.add(key)

        self.n = n
        self.m = int(pairs.shape[0])
        self.edge_array = _readonly(np.stack([lo, hi], axis=1))

        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        self.degrees = _readonly(np.bincount(src, minlength=n).astype(np.int64))
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(self.degrees, out=indptr[1:])
        self.indptr = _readonly(indptr)
        self.indices = _readonly(dst[order])

    @staticmethod
    def _error(message, index):
        error = GraphError(message)
        error.index = index
        return error

    def __repr__(self):
        return "<degest.graph.Graph n=%d m=%d>" % (self.n, self.m)

    def __eq__(self, other):
        return (isinstance(other, Graph) and self.n == other.n
                and np.array_equal(self.edge_array, other.edge_array))

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    @property
    def edges(self):
        """
        :returns: list -- (u, v) pairs with u < v, in input order
        """
        return [tuple(e) for e in self.edge_array.tolist()]

    @property
    def adjacency(self):
        """
        :returns: list -- per-vertex ascending neighbour lists
        """
        return [self.neighbours(v).tolist() for v in range(self.n)]

    @property
    def max_degree(self):
        return int(self.degrees.max()) if self.n else 0

    @property
    def avg_degree(self):
        """
        :returns: Fraction -- exactly 2m/n
        """
        if self.n == 0:
            raise EmptyGraphError("average degree of the empty vertex set")
        return Fraction(2 * self.m, self.n)

    def degree(self, v):
        return int(self.degrees[v])

    def neighbours(self, v):
        """
        :returns: numpy.ndarray -- read-only ascending neighbour ids of v
        """
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def has_edge(self, u, v):
        row = self.neighbours(u)
        i = int(np.searchsorted(row, v))
        return i < row.size and int(row[i]) == v

    def partition(self, tau):
        return partition_by_threshold(self, tau)

    def to_networkx(self):
        """
        :returns: networkx.Graph -- copy with nodes 0..n-1
        """
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g


def build_graph(n, edge_list):
    """
    Builds a :class:`Graph`, rejecting (never dropping) bad edges.

    :param n: vertex count
    :type n: int
    :param edge_list: unordered vertex pairs
    :type edge_list: iterable

    :returns:  Graph
    """
    return Graph(n, edge_list)


class Partition(DegestObject):

    """
    Heavy/light split of V at threshold tau: v is heavy iff d(v) > tau.
    """

    @property
    def tau(self):
        return self.dict['tau']

    @property
    def heavy(self):
        return frozenset(self.dict['heavy'])

    @property
    def light(self):
        return frozenset(self.dict['light'])

    @property
    def m_heavy(self):
        return self.dict['m_heavy']

    @property
    def m_light(self):
        return self.dict['m_light']

    @property
    def e_hh(self):
        return self.dict['e_hh']

    @property
    def e_ll(self):
        return self.dict['e_ll']

    @property
    def e_hl(self):
        return self.dict['e_hl']

    @property
    def rho_light(self):
        """
        m_light / 2m, or 1 on an edgeless graph.

        :returns: Fraction
        """
        m = self.e_hh + self.e_ll + self.e_hl
        if m == 0:
            return Fraction(1)
        return Fraction(self.m_light, 2 * m)


def partition_by_threshold(g, tau):
    """
    :param g: graph
    :type g: Graph
    :param tau: degree threshold, >= 0
    :type tau: int

    :returns:  Partition
    """
    if tau < 0:
        raise ValueError("threshold must be >= 0, got %r" % (tau,))
    light_mask = g.degrees <= tau
    light = np.flatnonzero(light_mask)
    heavy = np.flatnonzero(~light_mask)

    lu = light_mask[g.edge_array[:, 0]]
    lv = light_mask[g.edge_array[:, 1]]
    e_ll = int(np.count_nonzero(lu & lv))
    e_hh = int(np.count_nonzero(~lu & ~lv))
    e_hl = g.m - e_ll - e_hh

    m_light = int(g.degrees[light].sum())
    m_heavy = int(g.degrees[heavy].sum())
    assert m_light == 2 * e_ll + e_hl
    assert m_heavy == 2 * e_hh + e_hl

    return Partition({
        'tau': int(tau),
        'heavy': tuple(heavy.tolist()),
        'light': tuple(light.tolist()),
        'm_heavy': m_heavy,
        'm_light': m_light,
        'e_hh': e_hh,
        'e_ll': e_ll,
        'e_hl': e_hl,
    })


def is_good_threshold(g, tau):
    """
    tau is good iff m_light >= m/2, i.e. rho_light >= 1/4.

    :raises EmptyGraphError: when g has no edges
    """
    if g.m == 0:
        raise EmptyGraphError("goodness is undefined without edges")
    return 2 * partition_by_threshold(g, tau).m_light >= g.m


def light_edge_floor(m, p):
    """
    Lower bound m(1 - 2/p) on m_light for any tau >= p * arboricity.

    :returns: Fraction
    """
    return Fraction(m) * (1 - Fraction(2, p))


def degeneracy(g):
    """
    Largest k with a nonempty k-core.

    :returns: int
    """
    if g.m == 0:
        return 0
    return max(nx.core_number(g.to_networkx()).values())


def _popcount(x):
    return bin(x).count('1')


def nash_williams_arboricity(g):
    """
    Exact arboricity as the max over vertex subsets S, |S| >= 2, of
    ceil(m_S / (|S| - 1)), with m_S the induced edge count.

    Induced edge counts are built incrementally over subsets:
    m(S) = m(S - v) + |N(v) & S| for v the lowest member of S.

    :returns: int
    """
    n = g.n
    if n > _NASH_WILLIAMS_HARD_LIMIT:
        raise ValueError("subset enumeration refused for n=%d > %d"
                         % (n, _NASH_WILLIAMS_HARD_LIMIT))
    masks = [0] * n
    for u, v in g.edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u

    size = 1 << n
    induced = [0] * size
    best = 0
    for subset in range(1, size):
        low = subset & -subset
        v = low.bit_length() - 1
        rest = subset ^ low
        induced[subset] = induced[rest] + _popcount(masks[v] & rest)
        k = _popcount(subset)
        if k >= 2:
            best = max(best, -(-induced[subset] // (k - 1)))
    return best


class GroundTruth(DegestObject):

    """
    Exact reference values for a graph. Rationals are stored as
    [numerator, denominator] pairs.
    """

    @property
    def n(self):
        return self.dict['n']

    @property
    def m(self):
        return self.dict['m']

    @property
    def avg_degree(self):
        return pair_fraction(self.dict['avg_degree'])

    @property
    def tau(self):
        """
        Threshold at which rho_light was evaluated.
        """
        return self.dict['tau']

    @property
    def rho_light(self):
        return pair_fraction(self.dict['rho_light'])

    @property
    def arboricity_lower(self):
        return self.dict['arboricity_lower']

    @property
    def arboricity_upper(self):
        return self.dict['arboricity_upper']

    @property
    def arboricity_exact(self):
        return self.arboricity_lower == self.arboricity_upper

    @property
    def arboricity(self):
        """
        :returns: int -- exact arboricity, or None when only bracketed
        """
        if self.arboricity_exact:
            return self.arboricity_lower
        return None

    @property
    def degeneracy(self):
        return self.dict['degeneracy']

    @property
    def max_degree(self):
        return self.dict['max_degree']


def ground_truth(g, exact_arboricity_limit=EXACT_ARBORICITY_LIMIT, tau=None,
                 known_arboricity=None):
    """
    :param g: nonempty graph
    :type g: Graph
    :param exact_arboricity_limit: largest n for subset enumeration
    :type exact_arboricity_limit: int
    :param tau: threshold for rho_light; defaults to 8 * arboricity upper bound
    :type tau: int
    :param known_arboricity: exact arboricity known by construction
    :type known_arboricity: int

    :returns:  GroundTruth
    """
    if g.n == 0:
        raise GraphError("ground truth needs at least one vertex")

    core = degeneracy(g)
    if known_arboricity is not None:
        lower = upper = int(known_arboricity)
    elif g.n <= exact_arboricity_limit:
        lower = upper = nash_williams_arboricity(g)
    else:
        lower = -(-g.m // (g.n - 1)) if g.n > 1 else 0
        upper = core

    if tau is None:
        tau = 8 * upper
    rho = partition_by_threshold(g, tau).rho_light

    return GroundTruth({
        'n': g.n,
        'm': g.m,
        'avg_degree': fraction_pair(g.avg_degree),
        'tau': int(tau),
        'rho_light': fraction_pair(rho),
        'arboricity_lower': lower,
        'arboricity_upper': upper,
        'degeneracy': core,
        'max_degree': g.max_degree,
    })


def format_edge_list(g):
    """
    :returns: str -- "n m" header then one "u v" line per edge, LF-terminated
    """
    out = io.StringIO()
    out.write("%d %d\n" % (g.n, g.m))
    for u, v in g.edge_array.tolist():
        out.write("%d %d\n" % (u, v))
    return out.getvalue()


def write_edge_list(g, path):
    with open(path, 'w', newline='\n') as f:
        f.write(format_edge_list(g))


def _parse_ints(line, lineno, count):
    tokens = line.split()
    if len(tokens) != count:
        raise GraphFormatError("expected %d integers, found %d fields" % (count, len(tokens)), lineno)
    try:
        values = [int(t) for t in tokens]
    except ValueError:
        raise GraphFormatError("non-integer field in %r" % line.strip(), lineno)
    if any(v < 0 for v in values):
        raise GraphFormatError("negative value in %r" % line.strip(), lineno)
    return values


def parse_edge_list(lines):
    """
    Parses the edge-list format. Trailing blank lines are tolerated;
    anything else out of place is a :class:`GraphFormatError` naming the line.

    :param lines: iterable of text lines
    :type lines: iterable

    :returns:  Graph
    """
    lines = [line.rstrip('\r\n') for line in lines]
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise GraphFormatError("empty file: missing 'n m' header", 1)

    n, m = _parse_ints(lines[0], 1, 2)
    body = lines[1:]
    pairs = []
    for i, line in enumerate(body):
        if i == m:
            raise GraphFormatError("unexpected line past the %d declared edges" % m, i + 2)
        pairs.append(_parse_ints(line, i + 2, 2))
    if len(pairs) < m:
        raise GraphFormatError("header declares %d edges, found %d" % (m, len(pairs)), len(lines) + 1)

    try:
        return Graph(n, pairs)
    except GraphError as e:
        index = getattr(e, 'index', None)
        raise GraphFormatError(str(e), None if index is None else index + 2)


def read_edge_list(path):
    """
    :param path: edge-list file
    :type path: str

    :returns:  Graph
    """
    with open(path, 'r') as f:
        return parse_edge_list(f)
