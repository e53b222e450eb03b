"""Concrete-syntax trees and their depth-k non-terminal textual summaries."""

from astsearch.ast_repr.tree import Ast, AstNode, NodeId, TreeBuilder, LANGUAGES
from astsearch.ast_repr.ops import (
    AstTransRepr, ReprConfig, ancestors, dep_rep, node_seq, text_rep, text_seq,
)
from astsearch.ast_repr.parse import parse_code
from astsearch.ast_repr.io import (
    read_repr_lines, write_extraction_manifest, write_repr_lines,
)

__all__ = [
    "Ast", "AstNode", "NodeId", "TreeBuilder", "LANGUAGES",
    "AstTransRepr", "ReprConfig",
    "ancestors", "dep_rep", "node_seq", "text_rep", "text_seq",
    "parse_code", "read_repr_lines", "write_repr_lines", "write_extraction_manifest",
]
