"""Exception types shared across the package."""


class SglabError(Exception):
    """Base class for all package-specific errors."""


class UndefinedProbabilityError(SglabError, ValueError):
    """A conditional probability was requested for a word with no occurrences."""


class DegenerateCorrelationError(SglabError, ValueError):
    """Pearson correlation is undefined because one sample set has zero variance."""


class TrainingDivergedError(SglabError, RuntimeError):
    """Training produced NaN/inf values; carries the epoch where it happened."""

    def __init__(self, epoch: int, message: str | None = None):
        self.epoch = epoch
        super().__init__(message or f"training diverged at epoch {epoch}")


class VocabularyMismatchError(SglabError, ValueError):
    """An embedding file's word list does not line up with the corpus vocabulary."""
