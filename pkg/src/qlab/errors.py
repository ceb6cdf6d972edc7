"""Exception hierarchy shared by every qlab module."""


class QlabError(Exception):
    pass


class ValidationError(QlabError):
    """A structure failed one of its defining laws.

    ``law`` names the failed law and ``witness`` is a tuple of element
    labels exhibiting the failure.
    """

    law = "validation"

    def __init__(self, message, witness=()):
        super().__init__(message)
        self.witness = tuple(witness)


class NotAPoset(ValidationError):
    law = "poset"


class NotALattice(ValidationError):
    law = "lattice"


class NoBottom(ValidationError):
    law = "bottom"


class NoTop(ValidationError):
    law = "top"


class Trivial(ValidationError):
    law = "non-trivial"


class AssocFail(ValidationError):
    law = "associativity"


class DistribFail(ValidationError):
    law = "distributivity"


class UnitFail(ValidationError):
    law = "unit"


class JoinFail(ValidationError):
    law = "join-preservation"


class ProductFail(ValidationError):
    law = "product-preservation"


class AssocActionFail(ValidationError):
    law = "action-associativity"


class UnitActionFail(ValidationError):
    law = "action-unit"


class EquivarianceFail(ValidationError):
    law = "equivariance"


class InvariantFail(ValidationError):
    law = "invariant"


class SearchBoundExceeded(QlabError):
    pass


class TheoremViolation(QlabError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class HypothesisUnmet(QlabError):
    pass


class NoBasis(QlabError):
    pass


class StructureSyntaxError(QlabError):
    def __init__(self, message, line, col=1):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class UnknownReference(QlabError):
    pass
