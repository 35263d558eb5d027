"""Exception hierarchy shared by all modules."""


class StableDenoiseError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(StableDenoiseError, ValueError):
    """A parameter lies outside its documented domain."""


class ShapeError(StableDenoiseError, ValueError):
    """An array argument has the wrong length or dimensionality."""


class ModelError(StableDenoiseError, ValueError):
    """A model specification is invalid (e.g. non-causal coefficients)."""


class UnsupportedOrderError(ModelError):
    """The requested AR order is outside what the estimator supports."""


class NumericalError(StableDenoiseError, RuntimeError):
    """A linear system was singular or too ill-conditioned to trust."""


class DegenerateDataError(NumericalError):
    """The data produced an empty or invalid noise-level search interval."""


class TrainingDivergence(StableDenoiseError, RuntimeError):
    """Training produced a non-finite loss. Carries the epoch index."""

    def __init__(self, epoch: int, message: str = ""):
        self.epoch = epoch
        super().__init__(message or f"non-finite training loss at epoch {epoch}")
