"""Exception hierarchy shared by every module of the package."""


class VHLError(Exception):
    """Base class for all errors raised by vhl."""


class PreconditionError(VHLError):
    """An operation was called outside its domain (CLI exit code 2)."""


# core
class NonCommuting(PreconditionError):
    pass


class IrrationalSpectrum(PreconditionError):
    pass


class DimensionMismatch(PreconditionError):
    pass


# heisenberg
class ExoticIntegerExponent(PreconditionError):
    pass


class IndexOutOfRange(PreconditionError):
    pass


class NotInvariant(PreconditionError):
    pass


# lattice
class NotEven(PreconditionError):
    pass


class NotIntegral(PreconditionError):
    pass


class DependentGenerators(PreconditionError):
    pass


class DegenerateForm(PreconditionError):
    pass


# fock / latticeva
class NonRestrictedAmbient(PreconditionError):
    pass


class NonNilpotent(PreconditionError):
    pass


class NonIntegerEigenvalue(PreconditionError):
    pass


class DualMembership(PreconditionError):
    pass


class XDependence(VHLError):
    """A coefficient that must vanish did not; signals a real failure."""


# affinep
class NotIsotropic(PreconditionError):
    pass


# text formats / cli
class ParseError(PreconditionError):
    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(field)
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)


class ValidationError(PreconditionError):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
