"""
Rank-labeled binary trees on the nodes 1..n.

A rank-labeled tree numbers its nodes in in-order, so the left subtree of node t
holds exactly the nodes t - lambda(t) .. t - 1 and the right subtree the nodes
t + 1 .. t + rho(t). Trees are stored as child arrays indexed by node, with
``NO_CHILD`` (0) for a missing child; index 0 of each array is unused.
"""

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field

from ..config import get_settings
from ..errors import CapExceededError, DomainError
from ..log import get_component_logger

logger = get_component_logger("btiepi.ranktree")

NO_CHILD = 0


@dataclass(frozen=True, slots=True)
class RankTree:
    n: int
    left_child: tuple[int, ...]
    right_child: tuple[int, ...]
    root: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError("a rank tree needs at least one node")
        if len(self.left_child) != self.n + 1 or len(self.right_child) != self.n + 1:
            raise DomainError(f"child arrays must have length n + 1 = {self.n + 1}")

    @classmethod
    def from_children(
        cls, n: int, root: int, left: dict[int, int] | None = None, right: dict[int, int] | None = None
    ) -> "RankTree":
        """Build a tree from sparse child maps ``{node: child}``."""
        left_child = [NO_CHILD] * (n + 1)
        right_child = [NO_CHILD] * (n + 1)
        for node, child in (left or {}).items():
            left_child[node] = child
        for node, child in (right or {}).items():
            right_child[node] = child
        return cls(n, tuple(left_child), tuple(right_child), root)

    @classmethod
    def from_parents(cls, parents: Sequence[int]) -> "RankTree":
        """
        Build a tree from a parent list (index 0 unused, 0 marks the root).

        Whether a child is left or right follows from the ranks.
        """
        n = len(parents) - 1
        left = [NO_CHILD] * (n + 1)
        right = [NO_CHILD] * (n + 1)
        roots = [t for t in range(1, n + 1) if parents[t] == 0]
        if len(roots) != 1:
            raise DomainError(f"a parent list needs exactly one root, found {len(roots)}")
        for t in range(1, n + 1):
            p = parents[t]
            if p == 0:
                continue
            side = left if t < p else right
            if side[p] != NO_CHILD:
                raise DomainError(f"node {p} has two children on the same side")
            side[p] = t
        return cls(n, tuple(left), tuple(right), roots[0])

    @classmethod
    def right_spine(cls, n: int) -> "RankTree":
        """Root 1, every node t < n has right child t + 1."""
        return cls.from_children(n, 1, right={t: t + 1 for t in range(1, n)})

    @classmethod
    def left_spine(cls, n: int) -> "RankTree":
        """Root n, every node t > 1 has left child t - 1."""
        return cls.from_children(n, n, left={t: t - 1 for t in range(2, n + 1)})

    @classmethod
    def from_text(cls, text: str) -> "RankTree":
        """Parse the nested form ``((1) 2 (3))``."""
        return _TreeParser(text).parse()

    def left(self, t: int) -> int | None:
        child = self.left_child[t]
        return child or None

    def right(self, t: int) -> int | None:
        child = self.right_child[t]
        return child or None

    def parents(self) -> list[int]:
        """Parent of every node, 0 for the root (index 0 unused)."""
        parent = [0] * (self.n + 1)
        for t in range(1, self.n + 1):
            for child in (self.left_child[t], self.right_child[t]):
                if child != NO_CHILD:
                    parent[child] = t
        return parent

    def parent(self, t: int) -> int | None:
        return self.parents()[t] or None

    def depths(self) -> list[int]:
        """Depth of every node; the root has depth 0."""
        depth = [0] * (self.n + 1)
        stack = [self.root]
        while stack:
            t = stack.pop()
            for child in (self.left_child[t], self.right_child[t]):
                if child != NO_CHILD:
                    depth[child] = depth[t] + 1
                    stack.append(child)
        return depth

    def depth(self, t: int) -> int:
        return self.depths()[t]

    def depth_order(self) -> list[int]:
        """Nodes sorted by depth, ties by node index (breadth-first order)."""
        depth = self.depths()
        return sorted(range(1, self.n + 1), key=lambda t: (depth[t], t))

    def to_text(self) -> str:
        def render(t: int) -> str:
            parts = []
            if self.left_child[t]:
                parts.append(render(self.left_child[t]))
            parts.append(str(t))
            if self.right_child[t]:
                parts.append(render(self.right_child[t]))
            return "(" + " ".join(parts) + ")"

        return render(self.root)

    def __str__(self) -> str:
        return self.to_text()

    def validate(self) -> "ValidationReport":
        return validate(self)


@dataclass(frozen=True, slots=True)
class ValidationReport:
    ok: bool
    node: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True, slots=True)
class SubtreeSizes:
    """lambda, rho and s per node (index 0 unused)."""

    left: tuple[int, ...]
    right: tuple[int, ...]
    total: tuple[int, ...]


@dataclass
class OperationCounter:
    """Work done by the linear-time routines: stack pushes and pops plus named extras."""

    pushes: int = 0
    pops: int = 0
    extra: dict[str, int] = field(default_factory=dict)

    @property
    def stack_operations(self) -> int:
        return self.pushes + self.pops

    def add(self, key: str, amount: int = 1) -> None:
        self.extra[key] = self.extra.get(key, 0) + amount

    @property
    def total(self) -> int:
        return self.stack_operations + sum(self.extra.values())


def validate(tree: RankTree) -> ValidationReport:
    """Check root uniqueness, single parents, acyclicity and in-order ranks."""
    n = tree.n
    if not 1 <= tree.root <= n:
        return ValidationReport(False, tree.root, "root outside 1..n")
    parent_count = [0] * (n + 1)
    for t in range(1, n + 1):
        for child in (tree.left_child[t], tree.right_child[t]):
            if child == NO_CHILD:
                continue
            if not 1 <= child <= n:
                return ValidationReport(False, t, f"child {child} outside 1..n")
            parent_count[child] += 1
    if parent_count[tree.root]:
        return ValidationReport(False, tree.root, "the root has a parent")
    for t in range(1, n + 1):
        if t != tree.root and parent_count[t] != 1:
            return ValidationReport(False, t, f"node has {parent_count[t]} parents")

    # iterative in-order walk; single parents and n visits rule out cycles
    order: list[int] = []
    stack: list[int] = []
    t = tree.root
    while stack or t != NO_CHILD:
        while t != NO_CHILD:
            if len(stack) > n:
                return ValidationReport(False, t, "cycle detected")
            stack.append(t)
            t = tree.left_child[t]
        t = stack.pop()
        order.append(t)
        if len(order) > n:
            return ValidationReport(False, t, "cycle detected")
        t = tree.right_child[t]
    if len(order) != n:
        missing = sorted(set(range(1, n + 1)) - set(order))
        return ValidationReport(False, missing[0] if missing else None, "unreachable nodes")
    for rank, node in enumerate(order, start=1):
        if node != rank:
            return ValidationReport(False, node, f"node sits at in-order rank {rank}")
    return ValidationReport(True)


def subtree_sizes(tree: RankTree) -> SubtreeSizes:
    """lambda ascending and rho descending, as the separation routine sweeps them."""
    n = tree.n
    left = [0] * (n + 1)
    right = [0] * (n + 1)
    total = [0] * (n + 1)
    for t in range(1, n + 1):
        child = tree.left_child[t]
        if child != NO_CHILD:
            left[t] = left[child] + t - child
    for t in range(n, 0, -1):
        child = tree.right_child[t]
        if child != NO_CHILD:
            right[t] = child - t + right[child]
        total[t] = left[t] + 1 + right[t]
    return SubtreeSizes(tuple(left), tuple(right), tuple(total))


def top_nodes(tree: RankTree) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """The chains of left children and of right children starting at the root."""
    top_left = [tree.root]
    while tree.left_child[top_left[-1]] != NO_CHILD:
        top_left.append(tree.left_child[top_left[-1]])
    top_right = [tree.root]
    while tree.right_child[top_right[-1]] != NO_CHILD:
        top_right.append(tree.right_child[top_right[-1]])
    return tuple(top_left), tuple(top_right)


def find_cartesian_tree(
    u: Sequence[float], counter: OperationCounter | None = None
) -> RankTree:
    """
    Cartesian tree of u in O(T) with the right-spine stack.

    Each node is pushed once; spine nodes with a strictly smaller value are
    popped, the last popped one becomes the left child of the new node, and the
    new node becomes the right child of the remaining spine top. Among equal
    values the earlier index stays the ancestor.
    """
    n = len(u)
    if n < 1:
        raise DomainError("cannot build a Cartesian tree for an empty vector")
    left = [NO_CHILD] * (n + 1)
    right = [NO_CHILD] * (n + 1)
    spine: list[int] = []
    pushes = pops = 0
    for t in range(1, n + 1):
        value = u[t - 1]
        last = NO_CHILD
        while spine and u[spine[-1] - 1] < value:
            last = spine.pop()
            pops += 1
        left[t] = last
        if spine:
            right[spine[-1]] = t
        spine.append(t)
        pushes += 1
    if counter is not None:
        counter.pushes += pushes
        counter.pops += pops
    return RankTree(n, tuple(left), tuple(right), spine[0])


def is_cartesian_for(tree: RankTree, u: Sequence[float]) -> bool:
    """True iff u_t <= u_parent(t) for every non-root node."""
    if len(u) != tree.n:
        raise DomainError(f"vector has {len(u)} entries, tree has {tree.n} nodes")
    parent = tree.parents()
    return all(
        u[t - 1] <= u[parent[t] - 1] for t in range(1, tree.n + 1) if t != tree.root
    )


def is_rooted_subtree(tree: RankTree, nodes: Iterable[int]) -> bool:
    """True iff ``nodes`` is nonempty, contains the root and induces a connected subgraph."""
    chosen = set(nodes)
    if tree.root not in chosen:
        return False
    parent = tree.parents()
    return all(t == tree.root or parent[t] in chosen for t in chosen)


def catalan(n: int) -> int:
    value = 1
    for k in range(n):
        value = value * 2 * (2 * k + 1) // (k + 2)
    return value


def enumerate_trees(n: int, cap: int | None = None, root: int | None = None) -> Iterator[RankTree]:
    """
    Every rank-labeled binary tree on 1..n exactly once (C_n trees).

    Recursive interval splitting: pick the root k of [a, b], then enumerate
    [a, k-1] and [k+1, b]. Trees come out grouped by ascending root; ``root``
    restricts the stream to one such group. The cap is checked eagerly.
    """
    limit = cap if cap is not None else get_settings().enumeration_cap
    if n > limit:
        raise CapExceededError("tree enumeration", n, limit)
    if n < 1:
        raise DomainError("tree enumeration needs n >= 1")
    if root is not None and not 1 <= root <= n:
        raise DomainError(f"root {root} outside [1, {n}]")
    logger.debug("Enumerating rank trees", nodes=n, expected=catalan(n))
    return _split_intervals(n, root)


def _split_intervals(n: int, fixed_root: int | None) -> Iterator[RankTree]:
    # child arrays are shared and overwritten in place; each tree is frozen on yield
    left = [NO_CHILD] * (n + 1)
    right = [NO_CHILD] * (n + 1)

    def build(a: int, b: int, roots: Iterable[int]) -> Iterator[int]:
        if a > b:
            yield NO_CHILD
            return
        for k in roots:
            for left_root in build(a, k - 1, range(a, k)):
                left[k] = left_root
                for right_root in build(k + 1, b, range(k + 1, b + 1)):
                    right[k] = right_root
                    yield k

    top = range(1, n + 1) if fixed_root is None else (fixed_root,)
    for k in build(1, n, top):
        yield RankTree(n, tuple(left), tuple(right), k)


def mirror(tree: RankTree) -> RankTree:
    """Exchange left and right children and relabel t as n + 1 - t."""
    n = tree.n

    def flip(node: int) -> int:
        return NO_CHILD if node == NO_CHILD else n + 1 - node

    left = [NO_CHILD] * (n + 1)
    right = [NO_CHILD] * (n + 1)
    for t in range(1, n + 1):
        left[n + 1 - t] = flip(tree.right_child[t])
        right[n + 1 - t] = flip(tree.left_child[t])
    return RankTree(n, tuple(left), tuple(right), n + 1 - tree.root)


class _TreeParser:
    def __init__(self, text: str) -> None:
        self.tokens = text.replace("(", " ( ").replace(")", " ) ").split()
        self.pos = 0
        self.left: dict[int, int] = {}
        self.right: dict[int, int] = {}
        self.nodes: list[int] = []

    def parse(self) -> RankTree:
        root = self._node()
        if self.pos != len(self.tokens):
            raise DomainError("trailing text after tree")
        n = len(self.nodes)
        if sorted(self.nodes) != list(range(1, n + 1)):
            raise DomainError("tree text must label nodes 1..n exactly once")
        return RankTree.from_children(n, root, self.left, self.right)

    def _expect(self, token: str) -> None:
        if self.pos >= len(self.tokens) or self.tokens[self.pos] != token:
            raise DomainError(f"expected {token!r} at token {self.pos}")
        self.pos += 1

    def _node(self) -> int:
        self._expect("(")
        left_child = self._node() if self._peek() == "(" else None
        try:
            label = int(self.tokens[self.pos])
        except (IndexError, ValueError) as exc:
            raise DomainError(f"expected a node label at token {self.pos}") from exc
        self.pos += 1
        right_child = self._node() if self._peek() == "(" else None
        self._expect(")")
        self.nodes.append(label)
        if left_child is not None:
            self.left[label] = left_child
        if right_child is not None:
            self.right[label] = right_child
        return label

    def _peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None
