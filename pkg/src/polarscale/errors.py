"""Exception types shared across the package."""


class PolarscaleError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(PolarscaleError):
    """Invalid settings: bad hyperparameters, bad mode/flag combinations."""


class DataError(PolarscaleError):
    """Invalid or insufficient input data: empty corpus, malformed files,
    seeds that never occur, vocabulary mismatches."""


class OutOfVocabularyError(PolarscaleError):
    """A term was requested that is not in the model vocabulary."""

    def __init__(self, term: str):
        super().__init__(f"term not in vocabulary: {term!r}")
        self.term = term


class TrainingDivergedError(PolarscaleError):
    """Non-finite values appeared in the model during training."""


class UnmatchedPatternWarning(UserWarning):
    """A seed or dictionary pattern matched nothing in the vocabulary."""
