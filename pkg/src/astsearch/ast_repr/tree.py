"""Typed concrete-syntax tree: nodes, tree container, structural validation."""

from dataclasses import dataclass, field

from astsearch.errors import MalformedTree, NodeNotInTree

NodeId = int | str

LANGUAGES = ("java", "python")


@dataclass(frozen=True)
class AstNode:
    """One node of a concrete-syntax tree.

    Terminal nodes carry the source text span in ``text``; for punctuation,
    operators and keywords ``node_type`` is the literal itself (e.g. ``"&&"``).
    """
    id: NodeId
    node_type: str
    depth: int
    children: tuple[NodeId, ...] = ()
    is_terminal: bool = False
    text: str | None = None


@dataclass
class Ast:
    """A tree of AstNodes plus derived parent links and leaf order.

    Immutable after construction; safe to share across workers.
    """
    root: NodeId
    nodes: dict[NodeId, AstNode]
    source_language: str
    _parent: dict[NodeId, NodeId] = field(default_factory=dict, repr=False)
    _leaf_ids: list[NodeId] = field(default_factory=list, repr=False)

    def __post_init__(self):
        self._validate()
        self._parent = {}
        for node in self.nodes.values():
            for child_id in node.children:
                self._parent[child_id] = node.id
        self._leaf_ids = [n.id for n in self.walk() if n.is_terminal]

    def _validate(self):
        if self.root not in self.nodes:
            raise MalformedTree(f"root id {self.root!r} not among nodes")
        root = self.nodes[self.root]
        if root.depth != 0:
            raise MalformedTree("root node must have depth 0")
        seen_as_child: set[NodeId] = set()
        for node in self.nodes.values():
            if node.is_terminal != (len(node.children) == 0):
                raise MalformedTree(
                    f"node {node.id!r}: is_terminal must hold exactly when children is empty")
            for child_id in node.children:
                if child_id not in self.nodes:
                    raise MalformedTree(f"node {node.id!r} references missing child {child_id!r}")
                if child_id in seen_as_child:
                    raise MalformedTree(f"node {child_id!r} has two parents (tree, not DAG)")
                seen_as_child.add(child_id)
                child = self.nodes[child_id]
                if child.depth != node.depth + 1:
                    raise MalformedTree(
                        f"node {child_id!r}: depth {child.depth} != parent depth {node.depth} + 1")
        non_root = set(self.nodes) - {self.root}
        if seen_as_child != non_root:
            unreachable = non_root - seen_as_child
            extra = seen_as_child - non_root
            if self.root in seen_as_child:
                raise MalformedTree("root appears as a child")
            raise MalformedTree(f"unreachable nodes: {sorted(map(str, unreachable | extra))}")

    def node(self, node_id: NodeId) -> AstNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise NodeNotInTree(f"node {node_id!r} not in tree") from None

    def parent(self, node_id: NodeId) -> AstNode | None:
        """Parent node, or None for the root."""
        self.node(node_id)
        parent_id = self._parent.get(node_id)
        return None if parent_id is None else self.nodes[parent_id]

    def walk(self):
        """Depth-first pre-order traversal from the root."""
        stack = [self.root]
        while stack:
            node = self.nodes[stack.pop()]
            yield node
            stack.extend(reversed(node.children))

    def leaves(self) -> list[AstNode]:
        """Terminal nodes in source order (comments are never materialized)."""
        return [self.nodes[i] for i in self._leaf_ids]

    def max_depth(self) -> int:
        return max(n.depth for n in self.nodes.values())

    def terminal_texts(self) -> list[str]:
        """In-order terminal source texts; equals the lexer token stream."""
        return [leaf.text or "" for leaf in self.leaves()]


class TreeBuilder:
    """Incremental helper used by the parsers to assemble a validated Ast."""

    def __init__(self, language: str):
        self.language = language
        self.nodes: dict[NodeId, AstNode] = {}
        self._counter = 0

    def _next_id(self) -> int:
        self._counter += 1
        return self._counter

    def terminal(self, node_type: str, text: str, depth: int = -1) -> NodeId:
        node_id = self._next_id()
        self.nodes[node_id] = AstNode(node_id, node_type, depth, (), True, text)
        return node_id

    def interior(self, node_type: str, children: list[NodeId], depth: int = -1) -> NodeId:
        node_id = self._next_id()
        self.nodes[node_id] = AstNode(node_id, node_type, depth, tuple(children), False, None)
        return node_id

    def build(self, root_id: NodeId) -> Ast:
        """Finalize: recompute depths from the root and validate."""
        fixed: dict[NodeId, AstNode] = {}
        stack = [(root_id, 0)]
        while stack:
            node_id, depth = stack.pop()
            node = self.nodes[node_id]
            fixed[node_id] = AstNode(node.id, node.node_type, depth, node.children,
                                     node.is_terminal, node.text)
            for child_id in node.children:
                stack.append((child_id, depth + 1))
        return Ast(root=root_id, nodes=fixed, source_language=self.language)
