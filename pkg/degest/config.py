"""
Default constants for the estimators and the experiment runner.

The universal constant of the analysis is split into three concrete
ones, each sized from the concentration bound it feeds:

C_ADD   additive Chernoff at accuracy 1/16: r >= 2*16^2*ln(2/delta)
C_MULT  multiplicative Chernoff for rho >= 1/4
C_MEAN  Chebyshev for MeanEst, with E[w] >= d/4 and the d~ <= 16d slack,
        accuracy eps/3 folded in (576 = 64 * 3^2)
"""

import logging
import os
from fractions import Fraction

from .core import DegestObject

log = logging.getLogger(__name__)

C_ADD = 512
C_MULT = 32
C_MEAN = 576
C_SPLIT = 3
MAX_THRESHOLD_DOUBLINGS = 64

DEFAULT_EPSILON = 0.1
DEFAULT_DELTA = 0.1

EXACT_ARBORICITY_LIMIT = 15

# Largest batch handed to numpy in one go.
SAMPLE_CHUNK = 1 << 20

THREADS_ENV = 'DEGEST_THREADS'
SLOW_TESTS_ENV = 'DEGEST_SLOW_TESTS'


def thread_count(environ=None):
    """
    Worker threads for trial batches, read from DEGEST_THREADS.

    :returns: int -- at least 1
    """
    environ = os.environ if environ is None else environ
    raw = environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        threads = int(raw)
    except ValueError:
        log.warning("ignoring %s=%r: not an integer", THREADS_ENV, raw)
        return 1
    if threads < 1:
        log.warning("ignoring %s=%r: must be >= 1", THREADS_ENV, raw)
        return 1
    return threads


def as_fraction(value):
    """
    Exact rational for a user-facing number. Floats go through their
    shortest decimal text, so 0.1 becomes 1/10 and not the binary
    neighbour of 0.1.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


class EstimatorConfig(DegestObject):

    """
    Accuracy targets and constants shared by all estimators.

    >>> cfg = EstimatorConfig(epsilon=0.1, delta=0.1)
    >>> cfg.c_mean
    576
    """

    _fields = ('epsilon', 'delta', 'c_add', 'c_mult', 'c_mean', 'c_split',
               'max_threshold_doublings')

    def __init__(self, epsilon=DEFAULT_EPSILON, delta=DEFAULT_DELTA,
                 c_add=C_ADD, c_mult=C_MULT, c_mean=C_MEAN, c_split=C_SPLIT,
                 max_threshold_doublings=MAX_THRESHOLD_DOUBLINGS):
        """
        :param epsilon: target relative accuracy, in (0, 1)
        :type epsilon: float
        :param delta: target failure probability, in (0, 1/2)
        :type delta: float

        :raises ValueError: on any out-of-range value
        """
        if not 0 < epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1), got %r" % (epsilon,))
        if not 0 < delta < 0.5:
            raise ValueError("delta must lie in (0, 1/2), got %r" % (delta,))
        for name, value in (('c_add', c_add), ('c_mult', c_mult),
                            ('c_mean', c_mean), ('c_split', c_split)):
            if value < 1:
                raise ValueError("%s must be >= 1, got %r" % (name, value))
        if int(max_threshold_doublings) != max_threshold_doublings or max_threshold_doublings < 1:
            raise ValueError("max_threshold_doublings must be a positive integer")

        super(EstimatorConfig, self).__init__({
            'epsilon': epsilon,
            'delta': delta,
            'c_add': c_add,
            'c_mult': c_mult,
            'c_mean': c_mean,
            'c_split': c_split,
            'max_threshold_doublings': int(max_threshold_doublings),
        })

    @classmethod
    def from_dict(cls, data):
        """
        :param data: mapping with any subset of the config fields
        :type data: dict

        :raises ValueError: on unknown keys
        """
        unknown = set(data) - set(cls._fields)
        if unknown:
            raise ValueError("unknown config field(s): %s" % ", ".join(sorted(unknown)))
        return cls(**data)

    def replace(self, **changes):
        """
        :returns: EstimatorConfig -- copy with the given fields changed
        """
        data = dict(self.dict)
        data.update(changes)
        return EstimatorConfig(**data)

    @property
    def epsilon(self):
        return self.dict['epsilon']

    @property
    def delta(self):
        return self.dict['delta']

    @property
    def c_add(self):
        return self.dict['c_add']

    @property
    def c_mult(self):
        return self.dict['c_mult']

    @property
    def c_mean(self):
        return self.dict['c_mean']

    @property
    def c_split(self):
        return self.dict['c_split']

    @property
    def max_threshold_doublings(self):
        return self.dict['max_threshold_doublings']

    @property
    def epsilon_fraction(self):
        """
        epsilon as an exact rational, for interval membership tests.

        :returns: Fraction
        """
        return as_fraction(self.epsilon)
