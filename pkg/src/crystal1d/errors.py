"""Exception hierarchy shared by every module."""


class Crystal1DError(Exception):
    """Base class for all errors raised by crystal1d."""


class InputError(Crystal1DError):
    """Malformed potential file, configuration, or argument."""


class QuadratureNonconvergence(Crystal1DError):
    pass


class NotAdmissible(Crystal1DError):
    """The potential fails the admissibility sampler."""

    def __init__(self, report, message=None):
        self.report = report
        kinds = sorted({v.kind for v in report.violations})
        super().__init__(message or f"potential is not admissible ({', '.join(kinds)})")


class MassNonpositive(InputError):
    pass


class WrongCase(Crystal1DError):
    """Operation requires a potential that is positive on both half-lines."""


class EmptySet(Crystal1DError):
    pass


class NotNonnegative(InputError):
    pass


class NoCandidates(Crystal1DError):
    pass
