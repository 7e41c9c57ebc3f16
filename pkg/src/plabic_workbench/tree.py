"""
Plabic trees: the k statistic, the m-balanced test, move-canonical forms and
enumeration of (k, m)-amplitrees up to move equivalence.
"""

import logging
import random
from functools import lru_cache
from math import comb
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field

from .errors import CapExceeded, WorkbenchError, WrongBoundaryCount
from .plabic import (
    BLACK,
    WHITE,
    PlabicGraph,
    contract_edge,
    expand_vertex,
    insert_bivalent,
    remove_bivalent,
)

logger = logging.getLogger(__name__)


class BalanceResult(BaseModel):
    """Outcome of the m-balanced test"""

    balanced: bool = Field(..., description="Whether every edge cut satisfies the bounds")
    witness_edge: Optional[str] = Field(None, description="First edge whose cut violates the bounds")
    witness_value: Optional[int] = Field(None, description="Offending side statistic")


class CanonicalTree(BaseModel):
    """Move-canonical tree with its rooted encoding"""

    model_config = ConfigDict(frozen=True)

    graph: PlabicGraph = Field(..., description="Canonical representative")
    encoding: str = Field(..., description="Rotation-ordered encoding rooted at boundary 1")


class AmplitreeCount(BaseModel):
    """Enumeration result for one (k, m)"""

    k: int
    m: int
    count: int = Field(..., description="Number of move-equivalence classes")
    trees: List[CanonicalTree] = Field(default_factory=list, description="Streamed trees when requested")


def is_tree(graph: PlabicGraph) -> bool:
    return nx.is_forest(graph.to_networkx())


def k_statistic(graph: PlabicGraph) -> int:
    """1 + sum over internal black vertices of (deg - 2)"""
    return 1 + sum(
        graph.degree(v) - 2 for v in graph.internal_vertices() if graph.color(v) == BLACK
    )


def _rooted(graph: PlabicGraph) -> Tuple[str, Dict[str, Optional[str]], List[str]]:
    """Parent map and DFS preorder from boundary vertex 1"""
    root = graph.boundary_vertex(1)
    parent: Dict[str, Optional[str]] = {root: None}
    order = [root]
    stack = [root]
    while stack:
        v = stack.pop()
        for u in graph.neighbors(v):
            if u not in parent:
                parent[u] = v
                order.append(u)
                stack.append(u)
    return root, parent, order


def is_m_balanced(graph: PlabicGraph, m: int) -> BalanceResult:
    """
    Check 1 <= |B_bd ∩ G_i| - m * sum (deg b - 2) <= m on both sides of every edge.

    Args:
        graph: plabic tree of type (k, km+1)
        m: the ambient dimension

    Returns:
        BalanceResult with the first violating edge as witness
    """
    k = k_statistic(graph)
    if graph.n != k * m + 1:
        raise WrongBoundaryCount(f"n = {graph.n} but k*m+1 = {k * m + 1}")
    _, parent, order = _rooted(graph)
    leaves: Dict[str, int] = {}
    excess: Dict[str, int] = {}
    for v in reversed(order):
        own_leaf = 1 if graph.is_boundary(v) else 0
        own_excess = graph.degree(v) - 2 if (not graph.is_boundary(v) and graph.color(v) == BLACK) else 0
        children = [u for u in graph.neighbors(v) if parent.get(u) == v]
        leaves[v] = own_leaf + sum(leaves[u] for u in children)
        excess[v] = own_excess + sum(excess[u] for u in children)
    total_leaves, total_excess = graph.n, k - 1
    for e in sorted(graph.edges):
        a, b = graph.edges[e]
        child = a if parent.get(a) == b else b
        inside = leaves[child] - m * excess[child]
        outside = (total_leaves - leaves[child]) - m * (total_excess - excess[child])
        for value in (inside, outside):
            if not 1 <= value <= m:
                return BalanceResult(balanced=False, witness_edge=e, witness_value=value)
    return BalanceResult(balanced=True)


# --------------------------------------------------------------------------
# canonical forms
# --------------------------------------------------------------------------


def encode(graph: PlabicGraph) -> str:
    """Encoding rooted at boundary 1 with children in clockwise order after the parent edge"""
    root = graph.boundary_vertex(1)

    def walk(v: str, via: str) -> str:
        if graph.is_boundary(v):
            return str(graph.vertices[v].boundary)
        rot = graph.rotation[v]
        start = rot.index(via)
        children = [rot[(start + t) % len(rot)] for t in range(1, len(rot))]
        inner = ",".join(walk(graph.other_end(e, v), e) for e in children)
        return f"{graph.color(v)}({inner})"

    edge = graph.rotation[root][0]
    return f"1:{walk(graph.other_end(edge, root), edge)}"


def _removable_bivalent(graph: PlabicGraph) -> List[str]:
    found = []
    for v in graph.internal_vertices():
        if graph.degree(v) != 2:
            continue
        u, w = graph.neighbors(v)
        if not (graph.is_boundary(u) and graph.is_boundary(w)):
            found.append(v)
    return found


def _contractible_edges(graph: PlabicGraph) -> List[str]:
    return [
        e
        for e, (a, b) in graph.edges.items()
        if not graph.is_boundary(a)
        and not graph.is_boundary(b)
        and graph.color(a) == graph.color(b)
    ]


def canonicalize(graph: PlabicGraph, rng: Optional[random.Random] = None) -> CanonicalTree:
    """
    Remove bivalent vertices and contract same-coloured internal neighbours
    until neither applies. ``rng`` shuffles the order the moves are tried in.
    """
    if not is_tree(graph):
        raise WorkbenchError("canonicalize expects a plabic tree")
    current = graph
    while True:
        bivalent = sorted(_removable_bivalent(current))
        contractible = sorted(_contractible_edges(current))
        if rng is not None:
            rng.shuffle(bivalent)
            rng.shuffle(contractible)
        if bivalent and (not contractible or rng is None or rng.random() < 0.5):
            current = remove_bivalent(current, bivalent[0])
        elif contractible:
            current = contract_edge(current, contractible[0])
        else:
            break
    return CanonicalTree(graph=current.replace(reduced=True), encoding=encode(current))


def to_bipartite_trivalent_black(graph: PlabicGraph) -> PlabicGraph:
    """Move-equivalent bipartite tree whose internal black vertices are trivalent"""
    current = canonicalize(graph).graph
    while True:
        big = sorted(
            v for v in current.internal_vertices() if current.color(v) == BLACK and current.degree(v) > 3
        )
        if not big:
            break
        v = big[0]
        before = set(current.edges)
        current = expand_vertex(current, v, (0, 2))
        new_edge = (set(current.edges) - before).pop()
        current = insert_bivalent(current, new_edge, WHITE)
    for e in sorted(current.edges):
        a, b = current.edges[e]
        if current.color(a) == BLACK and current.color(b) == BLACK:
            current = insert_bivalent(current, e, WHITE)
    return current.replace(reduced=True)


# --------------------------------------------------------------------------
# enumeration
# --------------------------------------------------------------------------

Shape = Union[str, Tuple[str, Tuple["Shape", ...]]]
LEAF = "L"


def _other(color: str) -> str:
    return BLACK if color == WHITE else WHITE


def _counter(m: int, balanced: bool):
    """Memoized counts of rooted subtrees keyed by (root colour, leaves, black excess)"""

    @lru_cache(maxsize=None)
    def subtrees(color: str, leaves: int, excess: int) -> int:
        if leaves < 2 or excess < 0:
            return 0
        if balanced and not 1 <= leaves - m * excess <= m:
            return 0
        total = 0
        for arity in range(2, leaves + 1):
            own = arity - 1 if color == BLACK else 0
            total += sequences(color, arity, leaves, excess - own)
        return total

    @lru_cache(maxsize=None)
    def sequences(parent: str, arity: int, leaves: int, excess: int) -> int:
        if excess < 0 or leaves < arity:
            return 0
        if arity == 0:
            return 1 if leaves == 0 and excess == 0 else 0
        total = sequences(parent, arity - 1, leaves - 1, excess)
        child = _other(parent)
        for first in range(2, leaves - (arity - 1) + 1):
            for part in range(0, excess + 1):
                count = subtrees(child, first, part)
                if count:
                    total += count * sequences(parent, arity - 1, leaves - first, excess - part)
        return total

    return subtrees, sequences


def _shapes(m: int, balanced: bool):
    subtrees, sequences = _counter(m, balanced)

    def trees(color: str, leaves: int, excess: int) -> Iterator[Shape]:
        if not subtrees(color, leaves, excess):
            return
        for arity in range(2, leaves + 1):
            own = arity - 1 if color == BLACK else 0
            for children in seqs(color, arity, leaves, excess - own):
                yield (color, children)

    def seqs(parent: str, arity: int, leaves: int, excess: int) -> Iterator[Tuple[Shape, ...]]:
        if not sequences(parent, arity, leaves, excess):
            return
        if arity == 0:
            yield ()
            return
        for rest in seqs(parent, arity - 1, leaves - 1, excess):
            yield (LEAF,) + rest
        child = _other(parent)
        for first in range(2, leaves - (arity - 1) + 1):
            for part in range(0, excess + 1):
                for head in trees(child, first, part):
                    for rest in seqs(parent, arity - 1, leaves - first, excess - part):
                        yield (head,) + rest

    return trees


def shape_to_graph(shape: Shape, n: int) -> PlabicGraph:
    """Realize a rooted shape as a tree whose root hangs off boundary vertex 1"""
    colors: Dict[str, str] = {}
    adjacency: Dict[str, List[str]] = {"d1": []}
    boundary: Dict[str, int] = {"d1": 1}
    counters = {"leaf": 1, "node": 0}

    def place(node: Shape, parent: str) -> str:
        if node == LEAF:
            counters["leaf"] += 1
            name = f"d{counters['leaf']}"
            boundary[name] = counters["leaf"]
            adjacency[name] = [parent]
            return name
        color, children = node
        counters["node"] += 1
        name = f"v{counters['node']}"
        colors[name] = color
        adjacency[name] = [parent]
        for child in children:
            adjacency[name].append(place(child, name))
        return name

    adjacency["d1"] = [place(shape, "d1")]
    if counters["leaf"] != n:
        raise WorkbenchError(f"shape has {counters['leaf']} leaves, expected {n}")
    return PlabicGraph.from_adjacency(colors, adjacency, boundary, reduced=True)


def _two_leaf_tree() -> PlabicGraph:
    return PlabicGraph.from_adjacency(
        {"v1": WHITE}, {"d1": ["v1"], "v1": ["d1", "d2"], "d2": ["v1"]}, {"d1": 1, "d2": 2}, reduced=True
    )


def count_amplitrees(k: int, m: int, balanced: bool = True) -> int:
    if k < 1 or m < 1:
        raise ValueError("k and m must be positive")
    if k == 1 and m == 1:
        return 1
    subtrees, _ = _counter(m, balanced)
    leaves, excess = k * m, k - 1
    return subtrees(WHITE, leaves, excess) + subtrees(BLACK, leaves, excess)


def iter_trees(k: int, m: int, balanced: bool = True) -> Iterator[PlabicGraph]:
    """Canonical trees of type (k, km+1); balanced=False also yields non-amplitrees"""
    n = k * m + 1
    if k == 1 and m == 1:
        yield _two_leaf_tree()
        return
    trees = _shapes(m, balanced)
    for color in (WHITE, BLACK):
        for shape in trees(color, k * m, k - 1):
            yield shape_to_graph(shape, n)


def enumerate_amplitrees(k: int, m: int, emit: bool = False, cap: int = 64) -> AmplitreeCount:
    """
    Count move-equivalence classes of (k, m)-amplitrees.

    Args:
        k, m: tree type parameters, n = km + 1
        emit: also stream every canonical tree (checked for type and balance)
        cap: largest n accepted

    Returns:
        AmplitreeCount with the count and, when requested, the trees
    """
    n = k * m + 1
    if n > cap:
        raise CapExceeded(f"n = {n} exceeds the tree cap {cap}")
    count = count_amplitrees(k, m)
    logger.info("(k=%d, m=%d): %d amplitrees", k, m, count)
    trees: List[CanonicalTree] = []
    if emit:
        seen = set()
        for graph in iter_trees(k, m):
            if k_statistic(graph) != k or not is_m_balanced(graph, m).balanced:
                raise WorkbenchError(f"generated tree {encode(graph)} is not a ({k},{m})-amplitree")
            canonical = canonicalize(graph)
            if canonical.encoding in seen:
                raise WorkbenchError(f"duplicate canonical tree {canonical.encoding}")
            seen.add(canonical.encoding)
            trees.append(canonical)
        if len(trees) != count:
            raise WorkbenchError(f"streamed {len(trees)} trees but counted {count}")
    return AmplitreeCount(k=k, m=m, count=count, trees=trees)


def non_balanced_trees(k: int, m: int, limit: Optional[int] = None) -> List[PlabicGraph]:
    """Canonical trees of type (k, km+1) that fail the m-balanced test"""
    found = []
    for graph in iter_trees(k, m, balanced=False):
        if not is_m_balanced(graph, m).balanced:
            found.append(graph)
            if limit is not None and len(found) >= limit:
                break
    return found


# --------------------------------------------------------------------------
# closed forms
# --------------------------------------------------------------------------


def pyramidal(m: int) -> int:
    return m * (m + 1) * (2 * m + 1) // 6


def series_coefficient(numerator: Sequence[int], power: int, index: int) -> int:
    """Coefficient of x^index in numerator(x) / (1 - x)^power"""
    if index < 0:
        return 0
    return sum(
        c * comb(index - i + power - 1, power - 1) for i, c in enumerate(numerator) if index - i >= 0
    )


K2_NUMERATOR = (1, 1)
K3_NUMERATOR = (1, 28, 56, 14)


class SeriesCheck(BaseModel):
    """Comparison of enumerated counts with a generating function"""

    counts: Dict[int, int] = Field(..., description="m to enumerated count")
    shifted: Dict[int, int] = Field(..., description="m to coefficient of x^(m-1)")
    unshifted: Dict[int, int] = Field(..., description="m to coefficient of x^m")
    matches_shifted: bool
    matches_unshifted: bool


def _series_check(k: int, numerator: Sequence[int], power: int, top: int) -> SeriesCheck:
    counts = {m: count_amplitrees(k, m) for m in range(1, top + 1)}
    shifted = {m: series_coefficient(numerator, power, m - 1) for m in counts}
    unshifted = {m: series_coefficient(numerator, power, m) for m in counts}
    return SeriesCheck(
        counts=counts,
        shifted=shifted,
        unshifted=unshifted,
        matches_shifted=counts == shifted,
        matches_unshifted=counts == unshifted,
    )


def k2_recurrence_check(top: int) -> bool:
    """c_{2,m} = m(m+1)(2m+1)/6 and f_m = 5f_{m-1} - 10f_{m-2} + 10f_{m-3} - 5f_{m-4} + f_{m-5}"""
    f = {0: 0}
    f.update({m: count_amplitrees(2, m) for m in range(1, top + 1)})
    if any(f[m] != pyramidal(m) for m in range(1, top + 1)):
        return False
    for m in range(5, top + 1):
        if f[m] != 5 * f[m - 1] - 10 * f[m - 2] + 10 * f[m - 3] - 5 * f[m - 4] + f[m - 5]:
            return False
    return _series_check(2, K2_NUMERATOR, 4, top).matches_shifted


def k3_gf_check(top: int) -> bool:
    """k=3 counts against (1+28x+56x^2+14x^3)/(1-x)^7, read at x^(m-1)"""
    return _series_check(3, K3_NUMERATOR, 7, top).matches_shifted


def series_report(k: int, top: int) -> SeriesCheck:
    numerator, power = (K2_NUMERATOR, 4) if k == 2 else (K3_NUMERATOR, 7)
    return _series_check(k, numerator, power, top)
