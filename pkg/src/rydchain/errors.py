"""Error types shared across the package."""


class CapacityError(RuntimeError):
    """Requested problem size exceeds the configured dense-simulation limit."""


class GeometryError(ValueError):
    """Atom configuration is degenerate (coincident or non-finite positions)."""


class NumericalError(RuntimeError):
    """A numerical guarantee was violated (norm drift, non-convergence, cross-check failure)."""
