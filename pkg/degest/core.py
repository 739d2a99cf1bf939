# -*- coding: utf-8 -*-

__author__ = 'Garrett Pennington'
__date__ = '18/10/26'

import json
from fractions import Fraction


class DegestError(Exception):

    """
    Base class for all degest errors
    """

    #: Short machine-readable tag, used in CSV rows and CLI output.
    code = 'error'


class GraphError(DegestError, ValueError):
    code = 'graph'


class GraphFormatError(GraphError):

    """
    Malformed edge-list file. ``lineno`` is 1-based, or None when the
    problem is not tied to a single line (e.g. a missing edge line).
    """
    code = 'format'

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = "line %d: %s" % (lineno, message)
        super(GraphFormatError, self).__init__(message)
        self.lineno = lineno


class VertexOutOfRange(DegestError, IndexError):
    code = 'vertex_range'


class EmptyGraphError(DegestError, ValueError):
    code = 'empty_graph'


class InfeasibleParameters(DegestError, ValueError):
    code = 'infeasible'


class InsufficientPoints(DegestError, ValueError):
    code = 'insufficient_points'


class SpecValidationError(DegestError, ValueError):

    """
    Experiment spec failed validation.

    :param errors: list of "field.path: message" strings
    :type errors: list
    """
    code = 'spec'

    def __init__(self, errors):
        self.errors = list(errors)
        super(SpecValidationError, self).__init__("; ".join(self.errors))


class EstimatorError(DegestError):
    code = 'estimator'


class ZeroDensityError(EstimatorError):

    """
    CoinToss saw no light endpoint, so d = w/rho cannot be formed.
    Signals a threshold that is not good.
    """
    code = 'zero_density'


class ZeroEstimateError(EstimatorError):

    """
    Every MeanEst sample of the final AllAdvice call was zero, so the
    estimate would be d = 0.
    """
    code = 'zero_estimate'


class SafetyCapExceeded(EstimatorError):
    code = 'safety_cap'


def fraction_pair(value):
    """
    :returns: list -- [numerator, denominator] of a rational, or None
    """
    if value is None:
        return None
    value = Fraction(value)
    return [value.numerator, value.denominator]


def pair_fraction(pair):
    """
    Inverse of :func:`fraction_pair`.
    """
    if pair is None:
        return None
    return Fraction(int(pair[0]), int(pair[1]))


class DegestObject(object):

    """
    Base class for all degest records.

    Records keep their state in a plain dict, so that serialisation is
    just :meth:`to_dict`; subclasses expose the fields as properties.
    """

    def __init__(self, response=None, **params):
        """
        :param response: Dict holding the record's fields.
        :type response: dict
        :param params: Optional dict of parameters that produced the record
        :type params: dict

        """
        self.dict = response or dict()
        self.params = params or dict()

    def __repr__(self):
        return "<%s.%s %s>" % (self.__module__, self.__class__.__name__,
                               self.to_json())

    def __eq__(self, other):
        return type(self) is type(other) and self.to_dict() == other.to_dict()

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    def to_dict(self):
        """
        :returns:  dict -- Dictionary representation of the record
        """
        return self.dict

    def to_json(self):
        """
        Deterministic JSON text: sorted keys, no trailing whitespace.

        :returns:  str
        """
        return json.dumps(self.to_dict(), sort_keys=True, separators=(',', ': '))

    def list_to_instance_list(self, _list, _Class):
        """
        Takes a list of record dicts and returns a list
        of record instances, defined by the _Class param.

        :param _list: List of dicts describing a record.
        :type _list: list
        :param _Class: The record class to create a list of.
        :type _Class: core.DegestObject

        :returns:  list -- List of record instances
        """
        items = []
        for item in _list or []:
            items.append(_Class(item))
        return items
