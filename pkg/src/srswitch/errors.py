"""Error taxonomy shared by the library and the command line tool.

ValidationError covers malformed inputs: bad model files, inconsistent
parameters, out-of-range arguments (including a requested time step above
the stability bound). NumericalError covers failures of an otherwise
well-posed computation: eigensolver residuals out of tolerance, non-finite
results, undetectable transitions. The CLI maps them to exit codes 1 and 2
respectively.
"""


class SrswitchError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(SrswitchError):
    """Invalid input: model files, parameters, or argument combinations."""


class NumericalError(SrswitchError):
    """A well-posed computation failed or left its accuracy envelope."""
