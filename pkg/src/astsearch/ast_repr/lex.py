"""Shared lexing primitives for the language front-ends."""

from dataclasses import dataclass

from astsearch.errors import ParseError

NAME = "name"
NUMBER = "number"
STRING = "string"
CHAR = "char"
OP = "op"
NEWLINE = "newline"
INDENT = "indent"
DEDENT = "dedent"
EOF = "eof"


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int  # byte offset of the first character in the utf-8 source


class Scanner:
    """Cursor over source text with byte-offset tracking for error reports."""

    def __init__(self, source: str):
        self.source = source
        self.pos = 0
        # byte offset of each character position, so errors report byte offsets
        self._byte_offsets = [0]
        total = 0
        for ch in source:
            total += len(ch.encode("utf-8"))
            self._byte_offsets.append(total)

    def byte_offset(self, pos: int | None = None) -> int:
        return self._byte_offsets[self.pos if pos is None else pos]

    def at_end(self) -> bool:
        return self.pos >= len(self.source)

    def peek(self, ahead: int = 0) -> str:
        i = self.pos + ahead
        return self.source[i] if i < len(self.source) else ""

    def advance(self, count: int = 1) -> None:
        self.pos += count

    def starts_with(self, text: str) -> bool:
        return self.source.startswith(text, self.pos)

    def error(self, message: str, pos: int | None = None) -> ParseError:
        return ParseError(message, self.byte_offset(pos))


def longest_operator(scanner: Scanner, operators: list[str]) -> str | None:
    """Match the longest operator from a length-descending candidate list."""
    for op in operators:
        if scanner.starts_with(op):
            return op
    return None


def scan_identifier(scanner: Scanner) -> str:
    start = scanner.pos
    while not scanner.at_end() and (scanner.peek().isalnum() or scanner.peek() == "_"):
        scanner.advance()
    return scanner.source[start:scanner.pos]


def is_identifier_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"
