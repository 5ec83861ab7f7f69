"""Exception hierarchy shared by all modules."""


class KGraphError(Exception):
    """Base class for every error raised by the package."""


class ParseError(KGraphError):
    pass


class DanglingEdgeEndpoint(KGraphError):
    pass


class NonBijectiveSquares(KGraphError):
    def __init__(self, pair, detail=""):
        self.pair = pair
        super().__init__(f"squares for colors {pair} do not give a bijection: {detail}")


class InconsistentTriple(KGraphError):
    def __init__(self, colors, word):
        self.colors = colors
        self.word = word
        super().__init__(f"colors {colors}: word {word} reorders inconsistently")


class NotComposable(KGraphError):
    pass


class DegreeOutOfRange(KGraphError):
    pass


class MixedRanges(KGraphError):
    pass


class RangeMismatch(KGraphError):
    pass


class BudgetExceeded(KGraphError):
    pass


class GraphMismatch(KGraphError):
    pass


class ClosedFormDisagreement(KGraphError):
    pass


class NotAcyclic(KGraphError):
    pass


class NotLocallyConvex(KGraphError):
    pass


class NotInPhiImage(KGraphError):
    pass


class MixedDegrees(KGraphError):
    pass


class DegreeMismatch(KGraphError):
    pass


class LengthMismatch(KGraphError):
    pass


class PreconditionViolated(KGraphError):
    pass


class NotExhaustive(KGraphError):
    pass


class LBudgetExceeded(KGraphError):
    pass


class EmptySet(KGraphError):
    pass


class IdentityFailure(KGraphError):
    def __init__(self, node, detail=""):
        self.node = node
        super().__init__(f"identity failed at node {node}: {detail}")
