"""Exception taxonomy shared across the package.

Each error class maps to a distinct CLI exit code (see cli.EXIT_CODES),
so failures stay machine-distinguishable end to end.
"""


class SegrefuchsError(Exception):
    """Base class for all package-specific failures."""


class FormatError(SegrefuchsError):
    """Malformed file or JSON payload."""


class OrderTooLowError(SegrefuchsError):
    """Truncation order below the 3m+2 floor required downstream."""

    def __init__(self, order, required, msg=None):
        super().__init__(msg or "order %d too low, need >= %d"
                         % (order, required))
        self.order = order
        self.required = required


class RealityViolation(SegrefuchsError):
    """Reality residual of a complex defining function is nonzero."""

    def __init__(self, residual):
        super().__init__("reality condition violated; leading residual "
                         "term %r" % _leading(residual))
        self.residual = residual


class NotNormalizableError(SegrefuchsError):
    """Leading defining coefficient cannot be scaled to 1 inside Q(i,sqrt2)."""


class NonFuchsianError(SegrefuchsError):
    """Fuchsian-only construction applied to a non-Fuchsian surface."""

    def __init__(self, msg, ledger_row=None, entry=None, pole=None):
        super().__init__(msg)
        self.ledger_row = ledger_row
        self.entry = entry
        self.pole = pole


class DivisibilityError(SegrefuchsError):
    """A pushforward component misses its required eta-divisibility."""

    def __init__(self, j, needed, found):
        super().__init__("component j=%d needs eta^%d with an even-power "
                         "quotient, found valuation %d" % (j, needed, found))
        self.j = j
        self.needed = needed
        self.found = found


class NonConvergenceError(SegrefuchsError):
    """Numeric continuation failed to converge within the step budget."""


def _leading(series):
    if series.is_zero():
        return 0
    e = min(series.terms, key=lambda t: (sum(t), t))
    return {tuple(zip(series.vars, e)): series.terms[e]}
