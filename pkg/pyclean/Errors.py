"""
Exceptions raised by the decomposition library.

Every exception carries an `errnum`, which is the exit code the command line
reports when the exception reaches the dispatch layer:

* `InputError` (2): malformed or non-finite matrices, bad dimensions, bad options.
* `MatrixFileError` (2): a matrix file could not be parsed; carries `lineno`.
* `PreconditionError` (2): an operation was given inputs outside its hypotheses.
* `NumericalFailure` (3): a computation did not converge or failed its own checks.
* `AmbiguousCutError` (3): a singular value sits on a requested spectral cut.
* `AmbiguousSplitError` (3): a compression eigenvalue sits on a Halmos split boundary.
* `VerificationFailure` (1): a certificate failed verification.
"""

from .Constants import CleanConstants


__all__ = (
        'CleanError',
        'InputError',
        'MatrixFileError',
        'PreconditionError',
        'NumericalFailure',
        'AmbiguousCutError',
        'AmbiguousSplitError',
        'VerificationFailure',
    )


class CleanError(Exception):
    errnum = CleanConstants.EXIT_NUMERICAL

    def __init__(self, message, errnum=None):
        if errnum is not None:
            self.errnum = errnum
        self.message = message
        super(CleanError, self).__init__(message, self.errnum)

    def __str__(self):
        return self.message


class InputError(CleanError):
    errnum = CleanConstants.EXIT_BAD_INPUT


class MatrixFileError(InputError):

    def __init__(self, message, lineno=None, filename=None):
        self.lineno = lineno
        self.filename = filename
        if lineno is not None:
            message = "line %i: %s" % (lineno, message)
        if filename is not None:
            message = "%s: %s" % (filename, message)
        super(MatrixFileError, self).__init__(message)


class PreconditionError(InputError):
    pass


class NumericalFailure(CleanError):
    errnum = CleanConstants.EXIT_NUMERICAL


class AmbiguousCutError(NumericalFailure):

    def __init__(self, cut, sigma):
        self.cut = cut
        self.sigma = sigma
        super(AmbiguousCutError, self).__init__("Singular value %.17g is ambiguous at cut %.17g" % (sigma, cut))


class AmbiguousSplitError(NumericalFailure):

    def __init__(self, message, value=None):
        self.value = value
        super(AmbiguousSplitError, self).__init__(message)


class VerificationFailure(CleanError):
    errnum = CleanConstants.EXIT_VERIFY_FAILED
