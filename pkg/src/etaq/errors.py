"""Exception types shared across the package."""


class EtaqError(Exception):
    """Base class for library-specific failures."""


class SpecSyntaxError(EtaqError, ValueError):
    """Malformed eta-product specification string."""


class ModulusMismatchError(EtaqError, ValueError):
    """Operands carry incompatible coefficient moduli."""


class PrecisionError(EtaqError):
    """A computation needs more coefficients than are available."""
