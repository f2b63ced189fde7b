"""Shared exception types used across the package."""


class ArgumentError(ValueError):
    """A caller-supplied value is outside the documented domain."""


class DimensionError(ArgumentError):
    """Array shapes do not line up for the requested operation."""


class FormatError(ValueError):
    """A binary or JSON artifact does not match its documented layout."""


class StateError(RuntimeError):
    """An operation was invoked on an object in the wrong state."""


class NumericError(RuntimeError):
    """A computation produced a non-finite value."""


class NonFiniteLossError(NumericError):
    """Training loss went NaN/Inf; carries where it happened."""

    def __init__(self, iteration: int, sample_ids: list):
        self.iteration = iteration
        self.sample_ids = sample_ids
        super().__init__(
            f"non-finite loss at iteration {iteration} (batch samples {sample_ids})"
        )
