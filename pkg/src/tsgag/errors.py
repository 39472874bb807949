"""Exception hierarchy shared by all tsgag modules."""


class TSGagError(Exception):
    """Base class for every error raised by tsgag."""


class DomainError(TSGagError, ValueError):
    """A parameter lies outside its admissible domain."""

    def __init__(self, param, message=None):
        self.param = param
        super().__init__(message or f"parameter {param!r} out of domain")


class ParseError(TSGagError, ValueError):
    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)


# time scale construction
class EmptySpec(TSGagError, ValueError):
    pass


class DegenerateInterval(TSGagError, ValueError):
    pass


class NonpositiveAtomWeight(TSGagError, ValueError):
    pass


class OverlappingComponents(TSGagError, ValueError):
    pass


# quadrature
class SingularEvaluation(TSGagError, ArithmeticError):
    """A function was evaluated exactly at one of its declared singular points."""


class NonconvergedQuadrature(TSGagError, ArithmeticError):
    """Refinement exhausted its budget without meeting the requested tolerance."""


class DivergentSeminorm(TSGagError, ArithmeticError):
    """The Gagliardo seminorm of the function is (numerically) infinite."""


# inequalities
class FewerThanTwoWeights(TSGagError, ValueError):
    pass


class MethodUnavailable(TSGagError, ValueError):
    pass


class InvalidSampleCount(TSGagError, ValueError):
    pass


class BetaOutOfRange(TSGagError, ValueError):
    pass


class X0NotInT(TSGagError, ValueError):
    pass


# galerkin
class MeshTooCoarse(TSGagError, ValueError):
    pass


class SingularMass(TSGagError, ArithmeticError):
    pass


class NoNonzeroEigenvalue(TSGagError, ArithmeticError):
    pass


class SingularSystem(TSGagError, ArithmeticError):
    pass


# rlcompare
class TAtOrBelowA(TSGagError, ValueError):
    pass
