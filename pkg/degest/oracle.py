# -*- coding: utf-8 -*-

__author__ = 'Garrett Pennington'
__date__ = '18/10/26'

import json
import logging

import numpy as np

from .core import DegestObject, EmptyGraphError, VertexOutOfRange

log = logging.getLogger(__name__)

QUERY_TYPES = ('degree_random', 'degree_of', 'rand_edge', 'neighbour', 'pair', 'full_nbr')


def trial_seeds(base_seed, count):
    """
    Derives ``count`` independent 64-bit seeds from one base seed.

    :param base_seed: 64-bit seed
    :type base_seed: int
    :param count: number of child seeds
    :type count: int

    :returns:  list -- ints, identical for identical arguments
    """
    state = np.random.SeedSequence(int(base_seed)).generate_state(count, dtype=np.uint64)
    return [int(s) for s in state]


class QueryCounters(DegestObject):

    """
    Per-type query counts. Counters only ever go up.
    """

    def __init__(self, response=None):
        counts = dict((kind, 0) for kind in QUERY_TYPES)
        counts.update(response or {})
        super(QueryCounters, self).__init__(counts)

    def increment(self, kind, by=1):
        if by < 0:
            raise ValueError("counters are never decremented")
        self.dict[kind] += int(by)

    def snapshot(self):
        """
        :returns: QueryCounters -- independent copy
        """
        return QueryCounters(dict(self.dict))

    def __sub__(self, other):
        return QueryCounters(dict((k, self.dict[k] - other.dict[k]) for k in QUERY_TYPES))

    @property
    def degree_random(self):
        return self.dict['degree_random']

    @property
    def degree_of(self):
        return self.dict['degree_of']

    @property
    def rand_edge(self):
        return self.dict['rand_edge']

    @property
    def neighbour(self):
        return self.dict['neighbour']

    @property
    def pair(self):
        return self.dict['pair']

    @property
    def full_nbr(self):
        return self.dict['full_nbr']

    @property
    def degree_total(self):
        """
        Both Degree flavours together, i.e. the single Degree budget of
        the query model.
        """
        return self.degree_random + self.degree_of

    @property
    def total(self):
        return sum(self.dict.values())


class QueryOracle(object):

    """Query access to a graph

    Exposes only the Degree / RandEdge / Neighbour / Pair / FullNbr
    queries and counts every one of them. Randomness comes from a
    PCG64 stream seeded with a 64-bit seed, so equal seeds and equal
    call sequences give equal answers.

    An oracle is single-threaded; use :meth:`split` to get one per trial.

    >>> o = QueryOracle(build_graph(3, [(0, 1), (1, 2), (0, 2)]), seed=7)
    >>> o.degree_of(2)
    2
    >>> o.counters.degree_of
    1

    """

    def __init__(self, graph, seed=0, transcript=None):
        """
        :param graph: graph to answer queries about
        :type graph: degest.graph.Graph
        :param seed: 64-bit seed
        :type seed: int
        :param transcript: optional text stream receiving one JSON line per query
        :type transcript: file
        """
        self._graph = graph
        self.seed = int(seed)
        self._rng = np.random.Generator(np.random.PCG64(self.seed))
        self.counters = QueryCounters()
        self._transcript = transcript

    def split(self, count):
        """
        :returns: list -- ``count`` fresh oracles on the same graph with
            independent streams
        """
        return [QueryOracle(self._graph, seed) for seed in trial_seeds(self.seed, count)]

    def _call(self, kind, args, result, count=1):
        """
        Accounts for ``count`` queries of one type and, when a transcript
        is attached, writes them out. For batches ``args`` and ``result``
        are per-query sequences.
        """
        if self._transcript is None:
            self.counters.increment(kind, count)
            return
        if count == 1:
            args, result = [args], [result]
        for a, r in zip(args, result):
            self.counters.increment(kind)
            record = {
                'type': kind,
                'args': a,
                'result': r,
                'counter_snapshot': dict(self.counters.dict),
            }
            self._transcript.write(json.dumps(record, sort_keys=True) + "\n")

    def _check(self, v):
        if not 0 <= v < self._graph.n:
            raise VertexOutOfRange("vertex %r out of range" % (v,))
        return int(v)

    def _check_many(self, vertices):
        vertices = np.asarray(vertices, dtype=np.int64)
        if vertices.size and (vertices.min() < 0 or vertices.max() >= self._graph.n):
            raise VertexOutOfRange("vertex batch has ids out of range")
        return vertices

    def coins(self, size):
        """
        Fair bits for callers that randomise on their own. Not a query.

        :returns: numpy.ndarray -- ``size`` values in {0, 1}
        """
        return self._rng.integers(0, 2, size=size)

    # queries
    def degree_random(self):
        """Degree of a uniformly random vertex.

        :returns:  tuple -- (vertex, degree)
        """
        if self._graph.n == 0:
            raise EmptyGraphError("no vertex to sample")
        v = int(self._rng.integers(self._graph.n))
        d = self._graph.degree(v)
        self._call('degree_random', [], [v, d])
        return v, d

    def degree_random_many(self, size):
        """
        ``size`` independent :meth:`degree_random` queries.

        :returns:  tuple -- (vertices, degrees) numpy arrays
        """
        if self._graph.n == 0:
            raise EmptyGraphError("no vertex to sample")
        vertices = self._rng.integers(0, self._graph.n, size=size)
        degrees = self._graph.degrees[vertices]
        if self._transcript is not None:
            self._call('degree_random', [[]] * size,
                       [[int(v), int(d)] for v, d in zip(vertices, degrees)], size)
        else:
            self._call('degree_random', None, None, size)
        return vertices, degrees

    def degree_of(self, v):
        """Degree of a given vertex.

        :returns:  int
        """
        v = self._check(v)
        d = self._graph.degree(v)
        self._call('degree_of', [v], d)
        return d

    def degree_of_many(self, vertices):
        """
        One :meth:`degree_of` query per entry of ``vertices``.

        :returns:  numpy.ndarray
        """
        vertices = self._check_many(vertices)
        degrees = self._graph.degrees[vertices]
        if self._transcript is not None:
            self._call('degree_of', [[int(v)] for v in vertices],
                       [int(d) for d in degrees], vertices.size)
        else:
            self._call('degree_of', None, None, vertices.size)
        return degrees

    def rand_edge(self):
        """Uniformly random edge, endpoints in random order.

        :returns:  tuple -- (u, v)
        """
        if self._graph.m == 0:
            raise EmptyGraphError("no edge to sample")
        i = int(self._rng.integers(self._graph.m))
        u, v = (int(x) for x in self._graph.edge_array[i])
        if self._rng.integers(2):
            u, v = v, u
        self._call('rand_edge', [], [u, v])
        return u, v

    def rand_edge_many(self, size):
        """
        ``size`` independent :meth:`rand_edge` queries.

        :returns:  tuple -- (us, vs) numpy arrays
        """
        if self._graph.m == 0:
            raise EmptyGraphError("no edge to sample")
        picked = self._graph.edge_array[self._rng.integers(0, self._graph.m, size=size)]
        flip = self._rng.integers(0, 2, size=size).astype(bool)
        us = np.where(flip, picked[:, 1], picked[:, 0])
        vs = np.where(flip, picked[:, 0], picked[:, 1])
        if self._transcript is not None:
            self._call('rand_edge', [[]] * size,
                       [[int(u), int(v)] for u, v in zip(us, vs)], size)
        else:
            self._call('rand_edge', None, None, size)
        return us, vs

    def neighbour(self, v, i):
        """The i-th neighbour of v in ascending order.

        :returns:  int -- vertex id, or None when i >= d(v)
        """
        v = self._check(v)
        row = self._graph.neighbours(v)
        result = int(row[i]) if 0 <= i < row.size else None
        self._call('neighbour', [v, i], result)
        return result

    def pair(self, u, v):
        """Adjacency test.

        :returns:  bool
        """
        u, v = self._check(u), self._check(v)
        result = u != v and self._graph.has_edge(u, v)
        self._call('pair', [u, v], result)
        return result

    def full_nbr(self, v):
        """Entire neighbourhood of v.

        :returns:  list -- ascending vertex ids
        """
        v = self._check(v)
        result = self._graph.neighbours(v).tolist()
        self._call('full_nbr', [v], result)
        return result
