"""Custom exceptions for the contextlab package"""


class InvalidArgumentError(Exception):
    """Raised when an argument is outside the domain of an operation"""


class GraphValidationError(Exception):
    """Raised when a commutation graph is structurally invalid (e.g., a self-loop)"""


class ResourceLimitError(Exception):
    """Raised when an exhaustive operation is asked to handle too many vertices"""


class InfeasibleMarginalsError(Exception):
    """Raised when marginals sum above 1 on a set of mutually exclusive observables"""


class NumericalDegeneracyError(Exception):
    """Raised when the stable-set LP returns a solution with a suspicious residual"""


class ParseError(Exception):
    """Raised when an input file cannot be parsed"""
