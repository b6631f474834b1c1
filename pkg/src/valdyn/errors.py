"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`ValdynError`; the command line maps these to exit code 1.
"""


class ValdynError(Exception):
    """Base class for domain errors."""


class MapSyntaxError(ValdynError):
    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnknownIdentifier(MapSyntaxError):
    pass


class MixedFieldError(ValdynError):
    """Quadratic reals with different radicands were combined."""


class NestedExtension(ValdynError):
    """A second algebraic extension would be needed."""


class NonDominant(ValdynError):
    pass


class Unstable(ValdynError):
    def __init__(self, values):
        super().__init__(f"topological degree trials disagree: {values}")
        self.values = values


class ZeroPolynomial(ValdynError):
    pass


class CurveValueIndeterminate(ValdynError):
    pass


class NotCenteredAtInfinity(ValdynError):
    pass


class TruncatedDatum(ValdynError):
    pass


class NotDivisorial(ValdynError):
    pass


class UnknownPrime(ValdynError):
    pass


class NotAdjacent(ValdynError):
    pass


class DegenerateImage(ValdynError):
    """d(F, v) = 0: the image valuation is trivial."""


class RefinementLimit(ValdynError):
    def __init__(self, max_refine, partial=None):
        super().__init__(f"pushforward refinement exceeded {max_refine} steps")
        self.max_refine = max_refine
        self.partial = partial


class NonIntegralDegree(ValdynError):
    pass


class TooLarge(ValdynError):
    pass


class NoRecurrenceFound(ValdynError):
    def __init__(self, max_order):
        super().__init__(f"no integer linear recurrence of order <= {max_order}")
        self.max_order = max_order


class NotConverged(ValdynError):
    def __init__(self, max_iter, report=None):
        super().__init__(f"eigenvaluation search did not converge in {max_iter} iterations")
        self.max_iter = max_iter
        self.report = report


class NotAnEigenvaluation(ValdynError):
    def __init__(self, p, q):
        super().__init__(f"monomial valuation (-{p}/{q}, -1) is not fixed by the pushforward")
        self.p = p
        self.q = q


class NotApplicable(ValdynError):
    pass


class Inconclusive(ValdynError):
    pass


class GreenError(ValdynError):
    pass
