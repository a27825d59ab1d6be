"""Exception hierarchy shared by all modules."""


class ArithdynError(Exception):
    """Base for all library errors."""


class NotPrimeError(ArithdynError):
    pass


class NotIrreducibleError(ArithdynError):
    pass


class FieldMismatchError(ArithdynError):
    """Elements of different field contexts were mixed."""


class DivisionByZeroError(ArithdynError, ZeroDivisionError):
    pass


class IndeterminateError(ArithdynError):
    """0/0 (or an equivalent deadlock); the caller must switch to a lifted field."""


class NotPAdicIntegerError(ArithdynError):
    pass


class NotAUnitError(ArithdynError):
    pass


class ResidueCollapseError(ArithdynError):
    """The quadratic extension collapses: the residue of a is a square mod p."""


class SingularHitError(ArithdynError):
    """A map denominator vanished in the backend field."""

    def __init__(self, description):
        super().__init__(description)
        self.description = description


class ParameterViolationError(ArithdynError):
    pass


class UnsupportedPrimeError(ArithdynError):
    pass


class NotConfinedError(ArithdynError):
    pass


class AmbiguousFiberError(ArithdynError):
    pass


class AmbiguityUnresolvedError(ArithdynError):
    pass


class DegenerateParametersError(ArithdynError):
    pass


class TauVanishesError(ArithdynError):
    pass


class GVanishesError(ArithdynError):
    pass


class SigmaVanishesError(ArithdynError):
    pass


class FGVanishesError(ArithdynError):
    pass


class TrueIndeterminateError(ArithdynError):
    """The unreduced backend itself divided 0/0 at a lattice cell."""

    def __init__(self, message, cell=None):
        super().__init__(message)
        self.cell = cell


class DegenerateSeriesError(ArithdynError):
    pass


class UnsupportedForExtensionFieldError(ArithdynError):
    pass


class ConfigError(ArithdynError):
    """Bad CLI / run configuration (exit code 2)."""
