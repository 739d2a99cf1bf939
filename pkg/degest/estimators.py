# -*- coding: utf-8 -*-
"""
Average-degree estimators over a :class:`~degest.oracle.QueryOracle`.

The stack, bottom up:

* :func:`coin_toss` estimates rho_L, the fraction of edge endpoints
  whose degree is at most tau, from RandEdge + Degree queries.
* :func:`mean_est` estimates m_L / n from degrees of random vertices,
  truncated to zero above tau.
* :func:`all_advice` returns mean_est / coin_toss, which is a
  (1 +- eps) estimate of d given a good tau and advice d~ <= 16 d.
* :func:`threshold_advice` searches d~ = tau/2, tau/4, ... for the
  first advice the estimator itself does not refute.
* :func:`no_advice` doubles tau until coin_toss reports rho >= 5/16.

None of them ever needs n, m or the arboricity.
"""

__author__ = 'Garrett Pennington'
__date__ = '18/10/26'

import logging
import math
from fractions import Fraction

import numpy as np

from .config import SAMPLE_CHUNK, as_fraction
from .core import SafetyCapExceeded, ZeroDensityError, ZeroEstimateError
from .structures import (CoinTossResult, DegreeEstimate, MeanEstResult,
                         PATH_ALL_ADVICE, PATH_THRESHOLD_FALLBACK)

log = logging.getLogger(__name__)

GOOD_THRESHOLD_CUTOFF = Fraction(5, 16)


def _chunks(total):
    while total > 0:
        size = min(total, SAMPLE_CHUNK)
        yield size
        total -= size


def ceil_log2(x):
    """
    ceil(log2(x)) for an integer x >= 1.
    """
    return (int(x) - 1).bit_length()


def toss_samples(o, tau, r):
    """
    Yields arrays of CoinToss indicators X_i, ``r`` in total.
    Each X_i costs one RandEdge and one Degree query.
    """
    for size in _chunks(r):
        us, vs = o.rand_edge_many(size)
        w = np.where(o.coins(size).astype(bool), vs, us)
        yield o.degree_of_many(w) <= tau


def truncated_degree_samples(o, tau, q):
    """
    Yields arrays of MeanEst samples w_i = d_i [d_i <= tau], ``q`` in total.
    """
    for size in _chunks(q):
        _, degrees = o.degree_random_many(size)
        w = np.where(degrees <= tau, degrees, 0)
        assert (w >= 0).all() and (w <= tau).all()
        yield w


def coin_toss(o, tau, r):
    """Light-edge density estimate.

    :param o: oracle
    :type o: degest.oracle.QueryOracle
    :param tau: threshold
    :type tau: int
    :param r: number of tosses, >= 1
    :type r: int

    :returns:  CoinTossResult

    :raises EmptyGraphError: when the graph has no edges
    """
    if r < 1:
        raise ValueError("CoinToss needs r >= 1, got %r" % (r,))
    hits = 0
    for chunk in toss_samples(o, tau, r):
        hits += int(np.count_nonzero(chunk))
    return CoinTossResult({'hits': hits, 'tosses': int(r)}, tau=tau)


def mean_est(o, tau, q):
    """Truncated mean degree estimate.

    :param o: oracle
    :type o: degest.oracle.QueryOracle
    :param tau: threshold
    :type tau: int
    :param q: number of Degree samples, >= 1
    :type q: int

    :returns:  MeanEstResult
    """
    if q < 1:
        raise ValueError("MeanEst needs q >= 1, got %r" % (q,))
    total = 0
    for chunk in truncated_degree_samples(o, tau, q):
        total += int(chunk.sum())
    return MeanEstResult({'total': total, 'samples': int(q)}, tau=tau)


def plan_all_advice(tau, d_tilde, cfg, delta):
    """
    Sample sizes of one AllAdvice call.

    q = ceil(c_mean * tau / (delta * eps^2 * d~))
    r = ceil(max(c_add, c_mult / (eps/3)^2) * ln(2 / delta))

    :returns:  tuple -- (q, r)
    """
    eps = cfg.epsilon_fraction
    delta_f = as_fraction(delta)
    q = math.ceil(as_fraction(cfg.c_mean) * tau / (delta_f * eps * eps * as_fraction(d_tilde)))
    per_log = max(float(cfg.c_add), float(cfg.c_mult) * 9 / float(eps * eps))
    r = math.ceil(per_log * math.log(2 / float(delta_f)))
    return max(1, int(q)), max(1, int(r))


def plan_threshold_advice(tau, cfg, delta):
    """
    Loop shape of one ThresholdAdvice call.

    :returns:  tuple -- (rounds, reps, inner_delta) where rounds = ceil(log2 tau),
        reps = ceil(log2((rounds + 1)^2 / delta)) and
        inner_delta = delta / (c_split * max(1, rounds)^2)
    """
    rounds = ceil_log2(tau)
    reps = int(math.ceil(math.log2((rounds + 1) ** 2 / float(delta))))
    inner_delta = float(delta) / (cfg.c_split * max(1, rounds) ** 2)
    return rounds, max(1, reps), inner_delta


def no_advice_tosses(i, cfg):
    """
    r_i = ceil(c_add * ln(2^(i+2) / delta)) tosses at tau = 2^i.
    """
    return int(math.ceil(cfg.c_add * ((i + 2) * math.log(2) - math.log(cfg.delta))))


def _advice_ratio(o, tau, d_tilde, cfg, delta_local):
    q, r = plan_all_advice(tau, d_tilde, cfg, delta_local)
    mean = mean_est(o, tau, q)
    coin = coin_toss(o, tau, r)
    if coin.hits == 0:
        raise ZeroDensityError("no light endpoint in %d tosses at tau=%d" % (r, tau))
    return mean.w_hat / coin.rho_hat, coin, mean


def all_advice(o, tau, d_tilde, cfg, delta_local):
    """Estimate d from a threshold and degree advice.

    :param tau: threshold, >= 1
    :type tau: int
    :param d_tilde: degree advice, > 0
    :type d_tilde: Fraction
    :param cfg: accuracy and constants
    :type cfg: degest.config.EstimatorConfig
    :param delta_local: failure budget of this call
    :type delta_local: float

    :returns:  DegreeEstimate

    :raises ZeroDensityError: when no toss lands on a light endpoint
    :raises ZeroEstimateError: when every MeanEst sample is zero
    """
    if tau < 1:
        raise ValueError("AllAdvice needs tau >= 1, got %r" % (tau,))
    d_tilde = as_fraction(d_tilde)
    if d_tilde <= 0:
        raise ValueError("AllAdvice needs d~ > 0, got %s" % (d_tilde,))

    d_hat, coin, mean = _advice_ratio(o, tau, d_tilde, cfg, delta_local)
    if d_hat == 0:
        raise ZeroEstimateError("all %d MeanEst samples were zero at tau=%d" % (mean.samples, tau))
    return DegreeEstimate.build(d_hat, tau, d_tilde, PATH_ALL_ADVICE, o.counters, o.seed,
                                coin_toss=coin, mean_est=mean)


def threshold_advice(o, tau, cfg, delta_local):
    """Estimate d from a (believed good) threshold alone.

    Tries d~_i = tau / 2^i for i = 1 .. ceil(log2 tau); the first d~_i
    not exceeding the minimum of ``reps`` AllAdvice estimates is used
    for a final AllAdvice call. If none qualifies, falls back to
    d~ = tau / 2^(ceil(log2 tau) + 1) and marks the result.

    :returns:  DegreeEstimate

    :raises ZeroEstimateError: when the final MeanEst sees only zeros
    """
    if tau < 1:
        raise ValueError("ThresholdAdvice needs tau >= 1, got %r" % (tau,))
    rounds, reps, inner_delta = plan_threshold_advice(tau, cfg, delta_local)
    if rounds > cfg.max_threshold_doublings:
        raise SafetyCapExceeded("tau=%d needs %d rounds, cap is %d"
                                % (tau, rounds, cfg.max_threshold_doublings))

    for i in range(1, rounds + 1):
        d_tilde = Fraction(tau, 2 ** i)
        d_min = min(_advice_ratio(o, tau, d_tilde, cfg, inner_delta)[0] for _ in range(reps))
        log.debug("tau=%d round %d: d~=%s d_min=%s (%d reps)", tau, i, d_tilde, d_min, reps)
        # Valid d~
        if d_min >= d_tilde:
            return all_advice(o, tau, d_tilde, cfg, float(delta_local) / 2)

    d_tilde = Fraction(tau, 2 ** (rounds + 1))
    log.info("tau=%d: no advice accepted in %d rounds, falling back to d~=%s",
             tau, rounds, d_tilde)
    estimate = all_advice(o, tau, d_tilde, cfg, float(delta_local) / 2)
    estimate.dict['path'] = PATH_THRESHOLD_FALLBACK
    return estimate


def no_advice(o, cfg):
    """Estimate d with no advice at all.

    Doubles tau = 1, 2, 4, ... and hands the first tau with
    rho^ >= 5/16 to :func:`threshold_advice` with budget delta/2.

    :param o: oracle
    :type o: degest.oracle.QueryOracle
    :param cfg: accuracy and constants
    :type cfg: degest.config.EstimatorConfig

    :returns:  DegreeEstimate

    :raises EmptyGraphError: when the graph has no edges
    :raises SafetyCapExceeded: after max_threshold_doublings rejected thresholds
    """
    for i in range(cfg.max_threshold_doublings):
        tau = 2 ** i
        r = no_advice_tosses(i, cfg)
        coin = coin_toss(o, tau, r)
        log.debug("tau=%d: rho^=%s over %d tosses", tau, coin.rho_hat, r)
        # Getting good threshold
        if coin.rho_hat >= GOOD_THRESHOLD_CUTOFF:
            return threshold_advice(o, tau, cfg, cfg.delta / 2.0)
    raise SafetyCapExceeded("no good threshold within %d doublings"
                            % cfg.max_threshold_doublings)
