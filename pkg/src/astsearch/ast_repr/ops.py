"""Depth-k non-terminal summary of a tree.

A leaf is represented by its ancestor at a fixed depth (or its parent when
the leaf sits above that depth); the deduplicated sequence of those
representatives, rendered as ``type#L`` / ``type#R`` tokens, is the tree's
textual summary used as the translation target language.
"""

from dataclasses import dataclass

from astsearch.errors import NodeNotInTree, TerminalNodeGiven
from astsearch.ast_repr.tree import Ast, AstNode, NodeId

LEFT_MARK = "#L"
RIGHT_MARK = "#R"


@dataclass(frozen=True)
class ReprConfig:
    """Extraction settings; depth_k counts levels below the root."""
    depth_k: int = 5

    def __post_init__(self):
        if self.depth_k < 0:
            raise ValueError("depth_k must be >= 0")


@dataclass(frozen=True)
class AstTransRepr:
    """Ordered summary tokens plus the non-terminal ids that produced them."""
    tokens: tuple[str, ...]
    node_ids: tuple[NodeId, ...]

    def text(self) -> str:
        return " ".join(self.tokens)


def ancestors(ast: Ast, leaf_id: NodeId) -> list[AstNode]:
    """Path from the root down to the parent of ``leaf_id`` (inclusive).

    The list index equals each node's depth, so ``ancestors(...)[k]`` is the
    unique ancestor at depth k. Length equals the leaf's depth.
    """
    leaf = ast.node(leaf_id)
    if not leaf.is_terminal:
        raise NodeNotInTree(f"node {leaf_id!r} is not a terminal node")
    path: list[AstNode] = []
    current = ast.parent(leaf_id)
    while current is not None:
        path.append(current)
        current = ast.parent(current.id)
    path.reverse()
    return path


def dep_rep(ast: Ast, leaf_id: NodeId, k: int) -> AstNode:
    """Representative of a leaf at depth k: the depth-k ancestor when the
    leaf is deeper than k, otherwise the leaf's parent."""
    if k < 0:
        raise ValueError("k must be >= 0")
    path = ancestors(ast, leaf_id)
    if not path:
        raise NodeNotInTree(f"leaf {leaf_id!r} is the root; it has no representative")
    leaf_depth = len(path)
    if leaf_depth > k:
        return path[k]
    return path[-1]


def text_rep(ast: Ast, node_id: NodeId) -> list[str]:
    """Render a non-terminal as its own type marked ``#L`` followed by each
    child's type marked ``#R``, in child order."""
    node = ast.node(node_id)
    if node.is_terminal:
        raise TerminalNodeGiven(f"node {node_id!r} has no children")
    tokens = [node.node_type + LEFT_MARK]
    for child_id in node.children:
        tokens.append(ast.node(child_id).node_type + RIGHT_MARK)
    return tokens


def node_seq(ast: Ast, k: int) -> list[AstNode]:
    """Representatives of all leaves in first-occurrence order.

    Deduplication keeps the first hit per node id; iteration follows
    left-to-right leaf order, so the output is deterministic.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    seen: set[NodeId] = set()
    out: list[AstNode] = []
    for leaf in ast.leaves():
        rep = dep_rep(ast, leaf.id, k)
        if rep.id not in seen:
            seen.add(rep.id)
            out.append(rep)
    return out


def text_seq(ast: Ast, k: int) -> AstTransRepr:
    """Concatenated text_rep of node_seq(ast, k); the tree's depth-k summary."""
    tokens: list[str] = []
    ids: list[NodeId] = []
    for node in node_seq(ast, k):
        tokens.extend(text_rep(ast, node.id))
        ids.append(node.id)
    return AstTransRepr(tokens=tuple(tokens), node_ids=tuple(ids))
