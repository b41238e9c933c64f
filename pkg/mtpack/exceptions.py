from typing import Optional


class MtpackError(Exception):
    """Base class for every error raised by mtpack"""


class InputError(MtpackError):
    """Raised when an input instance, file or argument is malformed"""


class HypothesisError(MtpackError):
    """Raised when an instance does not satisfy a theorem's hypothesis"""


class InternalConsistencyError(MtpackError):
    """
    Raised when a result contradicts a proven statement. Either the
    implementation has a bug or the instance is a counterexample, so the
    instance travels with the error.
    """

    def __init__(self, message: str, instance: Optional[str] = None):
        super().__init__(message)
        self.instance = instance


class InvalidSpec(InputError):
    """Raised when a generator, oracle or campaign specification is invalid"""


class EmptyGraph(InputError):
    """Raised when an operation needs at least one vertex"""


class _PairError(InputError):
    """Validation error naming an offending vertex pair"""

    label = "pair"

    def __init__(self, u: int, v: int):
        super().__init__(f"{self.label} ({u}, {v})")
        self.u = u
        self.v = v


class MissingArc(_PairError):
    """A pair of vertices in distinct parts has no orientation"""

    label = "missing arc between"


class DoubleArc(_PairError):
    """A pair of vertices in distinct parts is oriented both ways"""

    label = "both arcs present between"


class IntraPartArc(_PairError):
    """An arc joins two vertices of the same part"""

    label = "arc inside a part"


class OverlappingSets(InputError):
    """Raised when two vertex sets that must be disjoint share a vertex"""


class VertexNotOnCycle(InputError):
    """Raised when a cycle path is requested between vertices not on the cycle"""


class BadArity(InputError):
    """Raised when a BT size list does not have an even length of at least 4"""


class SizeMismatch(InputError):
    """Raised when a blow-up size list does not match the tournament order"""


class MtgSyntaxError(InputError):
    """Raised on a malformed line of an mtg file"""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class CountMismatch(InputError):
    """Raised when the declared arc or part count differs from the lines read"""


class HypothesisViolated(HypothesisError):
    """Raised when the minimum out-degree (or part count) is too small"""


class PreconditionViolated(HypothesisError):
    """Raised when a lemma's arc-direction precondition fails"""


class NotTriangleFree(HypothesisError):
    """Raised when a triangle-free algorithm is given a triangle"""


class TriangleFree(HypothesisError):
    """Raised when diversification is requested on a triangle-free instance"""


class NotAnExtension(HypothesisError):
    """Raised when some pair of parts is joined in both directions"""


class NotStrong(HypothesisError):
    """Raised when a strong digraph is required"""


class ExhaustedAttempts(HypothesisError):
    """Raised when rejection sampling hits its attempt cap"""


class BudgetExceeded(MtpackError):
    """Raised when an oracle search exceeds its node or cycle budget"""


class ObservationViolated(InternalConsistencyError):
    """Sinks of a multipartite tournament span several parts or are unreachable"""


class NonBipartiteTerminal(InternalConsistencyError):
    """The terminal component of a triangle-free instance has three or more parts"""


class InternalExhaustion(InternalConsistencyError):
    """A search guaranteed to succeed by a theorem ran out of options"""
