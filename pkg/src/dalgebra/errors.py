"""Exception hierarchy shared by every module of the toolkit."""


class DAlgebraError(Exception):
    """Base class for all toolkit errors."""


class DomainMismatch(DAlgebraError):
    pass


class TruncationError(DAlgebraError):
    """Raised when a coefficient beyond the known order is requested."""


class NotUnit(DAlgebraError):
    """A division needed an invertible element and did not get one."""


class NotSquare(DAlgebraError):
    pass


class InsufficientTerms(DAlgebraError):
    def __init__(self, required, available, what=""):
        self.required = required
        self.available = available
        msg = "need %d terms, have %d" % (required, available)
        if what:
            msg = "%s: %s" % (what, msg)
        super().__init__(msg)


class NonPrimeModulus(DAlgebraError):
    pass


class RecurrenceError(DAlgebraError):
    """Leading factor vanished, or the recurrence reads terms not yet computed."""

    def __init__(self, msg, n=None):
        self.n = n
        super().__init__(msg)


class NonUniqueExtension(DAlgebraError):
    def __init__(self, index):
        self.index = index
        super().__init__("coefficient %d is not determined by the equation" % index)


class Inconsistent(DAlgebraError):
    def __init__(self, index, residual=None):
        self.index = index
        self.residual = residual
        super().__init__("no value of coefficient %d satisfies the equation" % index)


class SolverOverflowBudget(DAlgebraError):
    pass


class FormatError(DAlgebraError):
    def __init__(self, msg, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = str(path)
        if line is not None:
            where += ":%d" % line
        super().__init__("%s: %s" % (where, msg) if where else msg)


class ZeroResultant(DAlgebraError):
    pass


class NotFound(DAlgebraError):
    """Clean negative result; carries a human readable certificate."""

    def __init__(self, certificate, details=None):
        self.certificate = certificate
        self.details = details or []
        super().__init__(certificate)
