"""Line-based serialization of extracted representations."""

from pathlib import Path

from astsearch.ast_repr.ops import AstTransRepr
from astsearch.ast_repr.tree import Ast


def write_repr_lines(path: str | Path, reprs: list[AstTransRepr]) -> None:
    """One candidate per line, tokens space-separated, UTF-8."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for r in reprs:
            f.write(r.text() + "\n")


def read_repr_lines(path: str | Path) -> list[list[str]]:
    with open(path, encoding="utf-8") as f:
        return [line.rstrip("\n").split() if line.strip() else [] for line in f]


def write_extraction_manifest(path: str | Path, rows: list[tuple[str, AstTransRepr, Ast]]) -> None:
    """TSV of candidate-id -> token-count, node-count, max-depth."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("candidate_id\ttoken_count\tnode_count\tmax_depth\n")
        for candidate_id, repr_, ast in rows:
            f.write(f"{candidate_id}\t{len(repr_.tokens)}\t{len(repr_.node_ids)}\t"
                    f"{ast.max_depth()}\n")
