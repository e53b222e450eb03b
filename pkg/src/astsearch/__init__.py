"""AST-summary augmented code search toolkit."""

__version__ = "0.1.0"
