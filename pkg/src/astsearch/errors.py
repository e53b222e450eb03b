"""Exception types shared across the toolkit."""


class AstSearchError(Exception):
    """Base class for all toolkit errors."""


# --- parsing / tree errors ---

class ParseError(AstSearchError):
    """Source text could not be parsed into a tree."""

    def __init__(self, message: str, offset: int = 0):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class UnsupportedLanguage(AstSearchError):
    """Requested language has no registered grammar."""


class NodeNotInTree(AstSearchError):
    """Node id is absent from the tree, or violates the operation's precondition."""


class TerminalNodeGiven(AstSearchError):
    """Operation requires a non-terminal node but received a leaf."""


class MalformedTree(AstSearchError):
    """Tree violates a structural invariant (depths, reachability, id uniqueness)."""


# --- embedding errors ---

class EmptyCorpus(AstSearchError):
    """Training corpus has no usable sequences."""


class DegenerateVocab(AstSearchError):
    """Fewer than two distinct tokens survive the frequency cutoff."""


class EmptySequence(AstSearchError):
    """Token sequence to embed is empty."""


class FormatVersionMismatch(AstSearchError):
    """Serialized model file is truncated, corrupt, or has an unknown version."""


# --- translator errors ---

class ShapeMismatch(AstSearchError):
    """Internal tensor shape consistency check failed."""


class DivergedLoss(AstSearchError):
    """Training loss became non-finite."""

    def __init__(self, step: int):
        super().__init__(f"non-finite loss at training step {step}")
        self.step = step


# --- search errors ---

class DimMismatch(AstSearchError):
    """Vector or matrix dimensions disagree."""


class IdOrderMismatch(AstSearchError):
    """Two id lists must be identical and identically ordered."""


class TargetDimTooLarge(AstSearchError):
    """Requested projection dimension exceeds what the data supports."""


class UnknownQuery(AstSearchError):
    """Query id not present in the similarity matrix."""


# --- metrics errors ---

class EmptyCaseSet(AstSearchError):
    """Metric requires at least one search case."""


class CaseSetMismatch(AstSearchError):
    """Two case lists do not describe the same queries."""


class MissingConfiguration(AstSearchError):
    """An aggregate requires a full grid of per-configuration values."""


class LengthMismatch(AstSearchError):
    """Hypothesis and reference lists differ in length."""


# --- corpus / io errors ---

class SchemaError(AstSearchError):
    """A dataset line is malformed."""

    def __init__(self, message: str, line_number: int, field: str | None = None):
        detail = f"line {line_number}"
        if field:
            detail += f", field {field!r}"
        super().__init__(f"{message} ({detail})")
        self.line_number = line_number
        self.field = field


class CacheConsistencyError(AstSearchError):
    """A cached artifact does not match the key it was stored under."""


class ConfigError(AstSearchError):
    """Invalid configuration value or combination."""
