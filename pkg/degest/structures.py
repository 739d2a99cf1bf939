# -*- coding: utf-8 -*-

from .core import DegestObject, fraction_pair, pair_fraction
from .oracle import QueryCounters

PATH_ALL_ADVICE = 'all_advice'
PATH_THRESHOLD_FALLBACK = 'threshold_fallback'


class CoinTossResult(DegestObject):

    """
    Light-endpoint frequency over r tosses.
    """

    @property
    def hits(self):
        return self.dict['hits']

    @property
    def tosses(self):
        return self.dict['tosses']

    @property
    def rho_hat(self):
        """
        hits / tosses, a multiple of 1/r in [0, 1].

        :returns: Fraction
        """
        return pair_fraction([self.hits, self.tosses])


class MeanEstResult(DegestObject):

    """
    Mean of q truncated degree samples.
    """

    @property
    def total(self):
        """
        Sum of the truncated samples.
        """
        return self.dict['total']

    @property
    def samples(self):
        return self.dict['samples']

    @property
    def w_hat(self):
        """
        :returns: Fraction
        """
        return pair_fraction([self.total, self.samples])


class DegreeEstimate(DegestObject):

    """
    Average-degree estimate plus how it was obtained.

    ``params`` carries the final CoinToss / MeanEst results under
    ``coin_toss`` and ``mean_est``.
    """

    @classmethod
    def build(cls, d_hat, tau_used, d_tilde_used, path, counters, seed, **params):
        return cls({
            'd_hat': fraction_pair(d_hat),
            'tau_used': int(tau_used),
            'd_tilde_used': fraction_pair(d_tilde_used),
            'path': path,
            'counters': dict(counters.dict),
            'seed': seed,
        }, **params)

    @property
    def d_hat(self):
        """
        :returns: Fraction
        """
        return pair_fraction(self.dict['d_hat'])

    @property
    def tau_used(self):
        return self.dict['tau_used']

    @property
    def d_tilde_used(self):
        """
        :returns: Fraction -- degree advice of the final AllAdvice call
        """
        return pair_fraction(self.dict['d_tilde_used'])

    @property
    def path(self):
        """
        ``all_advice`` or ``threshold_fallback``. A safety-cap stop raises
        :class:`~degest.core.SafetyCapExceeded` instead.
        """
        return self.dict['path']

    @property
    def counters(self):
        return QueryCounters(self.dict['counters'])

    @property
    def seed(self):
        return self.dict['seed']

    @property
    def coin_toss(self):
        return self.params.get('coin_toss')

    @property
    def mean_est(self):
        return self.params.get('mean_est')


TRIAL_COLUMNS = ('instance_id', 'seed', 'd_hat_num', 'd_hat_den', 'success',
                 'tau_used', 'degree_random', 'degree_of', 'rand_edge', 'path')


class TrialRecord(DegestObject):

    """
    One CSV row: a single seeded estimator run. On estimator failure the
    d_hat and tau fields are empty and ``path`` holds the error code.
    """

    def row(self):
        """
        :returns: list -- values in :data:`TRIAL_COLUMNS` order
        """
        return [self.dict.get(column, '') for column in TRIAL_COLUMNS]

    @property
    def success(self):
        return bool(self.dict['success'])

    @property
    def failed(self):
        return self.dict['d_hat_num'] == ''

    @property
    def tau_used(self):
        return self.dict['tau_used']

    @property
    def path(self):
        return self.dict['path']

    @property
    def seed(self):
        return self.dict['seed']

    @property
    def degree_queries(self):
        return self.dict['degree_random'] + self.dict['degree_of']

    @property
    def rand_edge_queries(self):
        return self.dict['rand_edge']


class TrialBatchReport(DegestObject):

    """
    Summary of a batch of seeded trials on one instance.
    The per-trial rows are kept in :attr:`records`.
    """

    def __init__(self, response=None, records=None, **params):
        super(TrialBatchReport, self).__init__(response, **params)
        self.records = list(records or [])

    @property
    def instance_id(self):
        return self.dict['instance_id']

    @property
    def trials(self):
        return self.dict['trials']

    @property
    def success_count(self):
        return self.dict['success_count']

    @property
    def success_rate(self):
        return float(self.success_count) / self.trials

    @property
    def failure_count(self):
        """
        Trials that ended in an estimator error.
        """
        return self.dict['failure_count']

    @property
    def fallback_count(self):
        return self.dict['fallback_count']

    @property
    def queries(self):
        """
        {query type: {'mean': .., 'median': .., 'p95': ..}}

        :returns: dict
        """
        return self.dict['queries']

    @property
    def mean_tau_used(self):
        return self.dict['mean_tau_used']

    @property
    def mean_stopping_cost(self):
        """
        Mean of tau * log2(tau)^4 over completed trials.
        """
        return self.dict['mean_stopping_cost']

    @property
    def base_seed(self):
        return self.dict['base_seed']


class Check(DegestObject):

    """
    One named pass/fail measurement against a bound.
    """

    @property
    def name(self):
        return self.dict['name']

    @property
    def measured(self):
        return self.dict['measured']

    @property
    def bound(self):
        return self.dict['bound']

    @property
    def passed(self):
        return self.dict['passed']


class _CheckedReport(DegestObject):

    @property
    def checks(self):
        return self.list_to_instance_list(self.dict['checks'], Check)

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    def check(self, name):
        for item in self.checks:
            if item.name == name:
                return item
        raise KeyError(name)


class ScalingReport(_CheckedReport):

    """
    Query counts against one swept variable, with the log-log slope of
    the Degree counts before and after the log2(tau)^4 correction.

    ``checks`` holds ``degree_exponent`` and ``rand_edge_spread``, plus
    ``tau_used`` for alpha sweeps.
    """

    @property
    def variable(self):
        return self.dict['variable']

    @property
    def points(self):
        """
        :returns: list -- dicts sorted by ``x``
        """
        return self.dict['points']

    @property
    def exponent(self):
        """
        Slope of the corrected Degree counts.
        """
        return self.dict['exponent']

    @property
    def intercept(self):
        return self.dict['intercept']

    @property
    def raw_exponent(self):
        return self.dict['raw_exponent']

    @property
    def rand_edge_spread(self):
        """
        Largest over smallest mean RandEdge count across the points.
        """
        return self.dict['rand_edge_spread']

    def column(self, name):
        return [point[name] for point in self.points]


class LemmaReport(_CheckedReport):

    """
    Empirical checks of the CoinToss / MeanEst guarantees at one threshold.
    """


class PairedTrialReport(DegestObject):

    """
    Seed-paired runs on two instances, counting the pairs whose
    (1 +- eps) intervals around the two estimates are disjoint.
    """

    def __init__(self, response=None, first=None, second=None, **params):
        super(PairedTrialReport, self).__init__(response, **params)
        self.first = first
        self.second = second

    @property
    def trials(self):
        return self.dict['trials']

    @property
    def separated_count(self):
        return self.dict['separated_count']

    @property
    def separation_rate(self):
        return float(self.separated_count) / self.trials

    @property
    def truth_ratio(self):
        """
        :returns: Fraction -- second average degree over first
        """
        return pair_fraction(self.dict['truth_ratio'])


class RunManifest(DegestObject):

    """
    Provenance written next to every CLI output.
    """

    @property
    def command(self):
        return self.dict['command']

    @property
    def parameters(self):
        return self.dict['parameters']

    @property
    def seed(self):
        return self.dict['seed']

    @property
    def version(self):
        return self.dict['version']

    @property
    def inputs(self):
        return self.dict['inputs']

    @property
    def outputs(self):
        return self.dict['outputs']

    @property
    def duration(self):
        return self.dict['duration_seconds']
