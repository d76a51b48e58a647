"""Exception types raised by the toolkit."""


class EmbalignError(Exception):
    """Base class for all toolkit errors."""


class CorpusFormatError(EmbalignError):
    """Parallel text files that cannot be paired or parsed."""


class VectorFormatError(EmbalignError):
    """Malformed embedding vector files."""


class MappingError(EmbalignError):
    """Invalid inputs to embedding-space mapping (seeds, dimensions, flags)."""


class AlignerError(EmbalignError):
    """Inconsistent model state during training or decoding."""


class SymmetrizationError(EmbalignError):
    """Directional alignments that cannot be combined."""


class GoldFormatError(EmbalignError):
    """Malformed gold alignment files."""


class EvalError(EmbalignError):
    """Predictions and gold that cannot be scored together."""


class ConfigError(EmbalignError):
    """Rejected configuration values."""
