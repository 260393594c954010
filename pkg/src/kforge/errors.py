"""Exception hierarchy.

Everything raised on purpose by this package derives from KforgeError, so
callers can catch one type at the CLI boundary. Subclasses are split by what
the caller can do about them: fix the input shape, supply different
hypotheses, or raise a search budget.
"""


class KforgeError(Exception):
    """Base class for all errors raised deliberately by kforge."""


class ShapeMismatchError(KforgeError):
    """Matrix or vector dimensions do not fit the requested operation."""


class InputFormatError(KforgeError):
    """A JSON document or CLI argument does not match the wire format."""


class IllDefinedHomomorphismError(KforgeError):
    """The matrix does not send the domain's relations into the codomain's."""


class NotHereditaryError(KforgeError):
    """The vertex set admits an edge leaving it, so it cannot be split on."""


class NotSaturatedError(KforgeError):
    """Some regular vertex outside the set feeds only into the set."""


class HasBreakingVerticesError(KforgeError):
    """Splitting is blocked by infinite emitters that become regular."""


class BudgetExceededError(KforgeError):
    """A search hit its configured size cap before finding an answer."""


class RankViolationError(KforgeError):
    """A rank precondition (for example k1 rank vs free rank) fails."""


class UnsupportedRieszInputError(KforgeError):
    """The Riesz decision procedure has no rule for this order tag."""


class UnsupportedOrderTagError(KforgeError):
    """An order-tag predicate cannot be decided for this tag."""


class TargetNotExactError(KforgeError):
    """The six-term data handed to a constructor is not exact."""


class EndMapsNotIsoError(KforgeError):
    """A sequence comparison got end maps that are not isomorphisms."""


class NoWitnessError(KforgeError):
    """The dominate adjustment has no usable positivity witness matrix."""


class NoDominatedRowError(KforgeError):
    """The unit adjustment needs a strictly dominated row pair in B."""


class NeedsTwoQuotientVerticesError(KforgeError):
    """The unit adjustment needs at least two quotient-side vertices."""


class NoSplittingError(KforgeError):
    """No integer splitting exists for the requested split-mode assembly."""


class NotAdhesiveError(KforgeError):
    """A required adhesiveness witness was not found within budget."""


class HypothesesNotEvidencedError(KforgeError):
    """A named proof case was requested but its hypotheses do not hold."""


class RealizationCheckError(KforgeError):
    """A realization pipeline produced output that failed its own audit."""
