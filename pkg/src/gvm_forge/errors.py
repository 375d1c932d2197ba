"""Exception types raised across the package."""


class GVMError(ValueError):
    """Base class for all errors raised by gvm_forge."""


class ZeroUnit(GVMError):
    """A Laurent unit a_i was specialized to zero."""


class DimensionMismatch(GVMError):
    """Operands were built for different values of n."""


class OutOfSubalgebra(GVMError):
    """A Lie element outside sl(n+1) + C h_{n+2} was applied to the inducing module."""


class SymbolicUndecidable(GVMError):
    """An arithmetic question about a symbolic parameter has no definite answer."""


class BadDegree(GVMError):
    """A degree bound N is too small for the requested exponent vector."""


class ConstraintViolated(GVMError):
    """Concrete parameters do not satisfy the constraint a construction requires."""


class ConfigError(GVMError):
    """Invalid command-line or run configuration."""
