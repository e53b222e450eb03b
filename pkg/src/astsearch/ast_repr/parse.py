"""Language dispatch for source-to-tree parsing."""

from astsearch.errors import ParseError, UnsupportedLanguage
from astsearch.ast_repr.tree import Ast, LANGUAGES
from astsearch.ast_repr.java_parser import parse_java
from astsearch.ast_repr.python_parser import parse_python

_PARSERS = {
    "java": parse_java,
    "python": parse_python,
}


def parse_code(source: str, language: str) -> Ast:
    """Parse source text into a validated concrete-syntax tree.

    Raises ParseError (with byte offset) on malformed input and
    UnsupportedLanguage for languages without a registered grammar.
    """
    if language not in _PARSERS:
        raise UnsupportedLanguage(
            f"language {language!r} not supported; expected one of {LANGUAGES}")
    if not source or not source.strip():
        raise ParseError("empty source", 0)
    return _PARSERS[language](source)
