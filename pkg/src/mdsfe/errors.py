"""Domain error hierarchy.

Every error carries a stable ``code`` string so the CLI can emit
machine-readable diagnostics.
"""


class MdsError(Exception):
    code = "Error"

    def __init__(self, message=""):
        super().__init__(message or self.code)
        self.message = message or self.code


class DivisionByZero(MdsError):
    code = "DivisionByZero"


class ConductorOverflow(MdsError):
    code = "ConductorOverflow"


class NotPrime(MdsError):
    code = "NotPrime"


class Reducible(MdsError):
    code = "Reducible"


class EvenCharacteristic(MdsError):
    code = "EvenCharacteristic"


class OrderNotDividing(MdsError):
    code = "OrderNotDividing"


class DegreeTooLarge(MdsError):
    code = "DegreeTooLarge"


class NotSquarefree(MdsError):
    code = "NotSquarefree"


class MissingNij(MdsError):
    code = "MissingNij"


class NoClosedForm(MdsError):
    code = "NoClosedForm"


class UnknownLocalBlock(MdsError):
    code = "UnknownLocalBlock"

    def __init__(self, prime=None, exponents=None, message=""):
        self.prime = prime
        self.exponents = exponents
        super().__init__(message or f"no closed form for local block {prime!r}^{exponents!r}")


class Requires1Mod4(MdsError):
    code = "Requires1Mod4"


class NotDirichletNode(MdsError):
    code = "NotDirichletNode"


class SupportViolation(MdsError):
    code = "SupportViolation"


class UnknownEntries(MdsError):
    code = "UnknownEntries"


class PossiblyInfiniteGroupoid(MdsError):
    code = "PossiblyInfiniteGroupoid"


class NotConverged(MdsError):
    code = "NotConverged"

    def __init__(self, unknowns=None, message=""):
        self.unknowns = unknowns or []
        super().__init__(message or f"{len(self.unknowns)} coefficients left undetermined")


class InconsistentSystem(MdsError):
    code = "InconsistentSystem"


class Inadmissible(MdsError):
    code = "Inadmissible"


class InadmissibleDiagonal(MdsError):
    code = "InadmissibleDiagonal"


class NotInGeneGroup(MdsError):
    code = "NotInGeneGroup"


class Truncated(MdsError):
    code = "Truncated"


class Unclassifiable(MdsError):
    code = "Unclassifiable"


class NotAnchored(MdsError):
    code = "NotAnchored"

    def __init__(self, vertices=None, message=""):
        self.vertices = vertices or []
        super().__init__(message or f"{len(self.vertices)} Betti entries not anchored")


class RelationViolated(MdsError):
    code = "RelationViolated"


class UnsupportedType(MdsError):
    code = "UnsupportedType"


class BadParameters(MdsError):
    code = "BadParameters"


class Usage(MdsError):
    code = "Usage"
