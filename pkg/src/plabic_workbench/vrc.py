"""
Vector-relation configurations: black vertices carry vectors in Q^m, edges
carry nonzero coefficients, and at every white vertex the coefficient-weighted
sum of the neighbouring black vectors vanishes.

On amplitrees the configuration with a given boundary is built from
Grassmann-Cayley subspace labels; on graphs with an acyclic reverse perfect
orientation it is propagated from the source vectors along the orientation.
"""

import logging
import random
from fractions import Fraction
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple, TypeVar

from pydantic import BaseModel, ConfigDict, Field

from .errors import (
    CyclicOrientation,
    Degenerate,
    DegenerateBoundary,
    EvaluationDivisionByZero,
    KernelDimensionError,
    NotGeneric,
    PatternMismatch,
    RankDeficientSources,
    WorkbenchError,
)
from .gca import Multivector, bracket, shuffle, wedge_all
from .plabic import (
    BLACK,
    WHITE,
    Orientation,
    PlabicGraph,
    contract_edge,
    expand_vertex,
    find_acyclic_reverse_po,
    insert_bivalent,
    remove_bivalent,
    square_move,
)
from .scalar import Mat, random_nonzero_rational, random_rational

logger = logging.getLogger(__name__)

Vector = Tuple[Any, ...]
T = TypeVar("T")


def _zero_vector(m: int) -> Vector:
    return tuple(Fraction(0) for _ in range(m))


def _axpy(alpha, x: Sequence, y: Sequence) -> Vector:
    return tuple(alpha * a + b for a, b in zip(x, y))


def _is_zero(vector: Sequence) -> bool:
    return not any(vector)


class VRC(BaseModel):
    """Vectors on black vertices and coefficients on edges of a bipartite plabic graph"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    graph: PlabicGraph = Field(..., description="Underlying bipartite plabic graph")
    m: int = Field(..., description="Ambient dimension", ge=1)
    vectors: Dict[str, Tuple[Any, ...]] = Field(..., description="Black vertex id to its vector")
    coeffs: Dict[str, Any] = Field(..., description="Edge id to its nonzero coefficient")

    def boundary(self) -> Mat:
        """m x n matrix whose column i-1 is the vector of boundary vertex i"""
        return Mat.from_columns([self.vectors[v] for v in self.graph.boundary_vertices()], nrows=self.m)

    def residual(self, white: str) -> Vector:
        total = _zero_vector(self.m)
        for e in self.graph.rotation[white]:
            total = _axpy(self.coeffs[e], self.vectors[self.graph.other_end(e, white)], total)
        return total

    def violations(self) -> List[str]:
        found = []
        for e, c in sorted(self.coeffs.items()):
            if not c:
                found.append(f"coefficient on {e} is zero")
        for v in sorted(self.graph.vertices):
            if self.graph.color(v) == WHITE:
                if not _is_zero(self.residual(v)):
                    found.append(f"relation at {v} does not vanish")
            elif _is_zero(self.vectors[v]):
                found.append(f"vector at {v} is zero")
        if self.boundary().rank() != self.m:
            found.append("boundary vectors do not span")
        return found

    def is_valid(self) -> bool:
        return not self.violations()


# --------------------------------------------------------------------------
# gauge
# --------------------------------------------------------------------------


def gauge(vrc: VRC, vertex: str, factor) -> VRC:
    """
    Rescale at one internal vertex: a white vertex scales its coefficients, a
    black vertex scales its vector by ``factor`` and its coefficients by the
    inverse.
    """
    graph = vrc.graph
    if graph.is_boundary(vertex):
        raise WorkbenchError("gauge acts on internal vertices only")
    if not factor:
        raise WorkbenchError("gauge factor must be nonzero")
    coeffs = dict(vrc.coeffs)
    vectors = dict(vrc.vectors)
    if graph.color(vertex) == WHITE:
        for e in graph.rotation[vertex]:
            coeffs[e] = coeffs[e] * factor
    else:
        vectors[vertex] = tuple(factor * a for a in vectors[vertex])
        for e in graph.rotation[vertex]:
            coeffs[e] = coeffs[e] / factor
    return vrc.model_copy(update={"coeffs": coeffs, "vectors": vectors})


def proportion(target: Sequence, source: Sequence) -> Optional[Any]:
    """lambda with target = lambda * source, or None"""
    ratio = None
    for a, b in zip(target, source):
        if not b:
            if a:
                return None
            continue
        if ratio is None:
            ratio = a / b
        elif a != ratio * b:
            return None
    return ratio


def gauge_equivalent(first: VRC, second: VRC) -> bool:
    """
    Whether two configurations on graphs with the same vertices and adjacency
    differ by a gauge transformation. Edges are matched by their endpoints.
    """
    g1, g2 = first.graph, second.graph
    if set(g1.vertices) != set(g2.vertices):
        return False
    if {frozenset(ends) for ends in g1.edges.values()} != {frozenset(ends) for ends in g2.edges.values()}:
        return False
    scale: Dict[str, Any] = {}
    for v in g1.vertices:
        if g1.color(v) != BLACK:
            continue
        if g2.color(v) != BLACK:
            return False
        ratio = proportion(second.vectors[v], first.vectors[v])
        if ratio is None or (g1.is_boundary(v) and ratio != 1):
            return False
        scale[v] = ratio
    for w in g1.vertices:
        if g1.color(w) != WHITE:
            continue
        common = None
        for e in g1.rotation[w]:
            b = g1.other_end(e, w)
            ratio = second.coeffs[g2.edge_between(w, b)] * scale[b] / first.coeffs[e]
            if common is None:
                common = ratio
            elif ratio != common:
                return False
    return True


# --------------------------------------------------------------------------
# subspace labels on trees
# --------------------------------------------------------------------------


class SubspaceLabels(BaseModel):
    """Grassmann-Cayley labels of a tree with all edges oriented towards a root"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    root: str = Field(..., description="Root vertex")
    labels: Dict[str, Multivector] = Field(..., description="Vertex to F_x")
    expected: Dict[str, int] = Field(..., description="Vertex to the dimension predicted by the graph statistic")
    actual: Dict[str, int] = Field(..., description="Vertex to dim V_x computed by linear algebra")
    in_bounds: bool = Field(..., description="Every predicted dimension lies in [1, m]")
    generic: bool = Field(..., description="Labels nonzero with the predicted dimensions")


def _row_basis(vectors: Sequence[Sequence], m: int) -> List[Vector]:
    if not vectors:
        return []
    reduced, pivots = Mat(vectors, ncols=m).rref()
    return [reduced.row(i) for i in range(len(pivots))]


def _intersect(first: List[Vector], second: List[Vector], m: int) -> List[Vector]:
    if not first or not second:
        return []
    columns = list(first) + [tuple(-a for a in v) for v in second]
    combos = Mat.from_columns(columns).kernel()
    found = []
    for combo in combos:
        vector = _zero_vector(m)
        for c, v in zip(combo[: len(first)], first):
            vector = _axpy(c, v, vector)
        found.append(vector)
    return _row_basis(found, m)


def _children(graph: PlabicGraph, root: str) -> Tuple[List[str], Dict[str, List[str]]]:
    """Vertices in BFS order from the root and their children, clockwise after the parent edge"""
    children: Dict[str, List[str]] = {}
    order = [root]
    parent_edge: Dict[str, Optional[str]] = {root: None}
    index = 0
    while index < len(order):
        v = order[index]
        index += 1
        rot = list(graph.rotation[v])
        via = parent_edge[v]
        if via is not None:
            start = rot.index(via)
            rot = rot[start + 1:] + rot[:start]
        kids = []
        for e in rot:
            u = graph.other_end(e, v)
            if u in parent_edge:
                raise WorkbenchError("subspace labels need a tree")
            parent_edge[u] = e
            kids.append(u)
            order.append(u)
        children[v] = kids
    return order, children


def subspace_labels(tree: PlabicGraph, root: str, z: Mat) -> SubspaceLabels:
    """
    Leaf-to-root labels: boundary i gets z_i, a white vertex the wedge of its
    children and a black vertex the shuffle of its children.

    Args:
        tree: plabic tree
        root: internal vertex every edge is oriented towards
        z: m x n boundary matrix

    Returns:
        SubspaceLabels with predicted and actual dimensions

    Raises:
        DegenerateBoundary: a label whose predicted dimension lies in [0, m] vanished
    """
    m = z.nrows
    if z.ncols != tree.n:
        raise WorkbenchError(f"boundary has {z.ncols} columns for {tree.n} boundary vertices")
    if tree.is_boundary(root):
        raise WorkbenchError("root must be an internal vertex")
    order, children = _children(tree, root)
    labels: Dict[str, Multivector] = {}
    expected: Dict[str, int] = {}
    actual: Dict[str, int] = {}
    spaces: Dict[str, List[Vector]] = {}
    # a vertex below an out-of-range label vanishes for structural reasons
    tainted: Dict[str, bool] = {}
    for v in reversed(order):
        kids = children[v]
        tainted[v] = any(tainted[u] or not 1 <= expected[u] <= m for u in kids)
        if tree.is_boundary(v):
            column = z.column(tree.vertices[v].boundary - 1)
            labels[v] = Multivector.vector(column)
            expected[v] = 1
            spaces[v] = _row_basis([column], m)
        elif tree.color(v) == WHITE:
            labels[v] = wedge_all((labels[u] for u in kids), m)
            expected[v] = sum(expected[u] for u in kids)
            spaces[v] = _row_basis([x for u in kids for x in spaces[u]], m)
        else:
            value = labels[kids[0]]
            space = spaces[kids[0]]
            for u in kids[1:]:
                value = shuffle(value, labels[u]) if value and labels[u] else Multivector(m)
                space = _intersect(space, spaces[u], m)
            labels[v] = value
            expected[v] = sum(expected[u] for u in kids) - m * (len(kids) - 1)
            spaces[v] = space
        actual[v] = len(spaces[v])
        if 0 <= expected[v] <= m and labels[v].is_zero() and v != root and not tainted[v]:
            raise DegenerateBoundary(f"label at {v} vanishes", vertex=v)
    root_ok = expected[root] >= 1 if tree.color(root) == WHITE else 1 <= expected[root] <= m
    in_bounds = root_ok and all(1 <= expected[v] <= m for v in order if v != root)
    generic = in_bounds and all(
        actual[v] == expected[v] and not labels[v].is_zero()
        for v in order
        if expected[v] <= m
    )
    return SubspaceLabels(
        root=root, labels=labels, expected=expected, actual=actual, in_bounds=in_bounds, generic=generic
    )


def extend_boundary(graph: PlabicGraph) -> PlabicGraph:
    """Replace each boundary edge i - u by the path i - w'_i - b'_i - u"""
    colors: Dict[str, str] = {v: graph.color(v) for v in graph.internal_vertices()}
    adjacency: Dict[str, List[str]] = {}
    boundary: Dict[str, int] = {}
    for v in graph.vertices:
        if graph.is_boundary(v):
            position = graph.vertices[v].boundary
            boundary[v] = position
            (u,) = graph.neighbors(v)
            w, b = f"{v}'w", f"{v}'b"
            colors[w], colors[b] = WHITE, BLACK
            adjacency[v] = [w]
            adjacency[w] = [v, b]
            adjacency[b] = [w, u]
        else:
            adjacency[v] = [
                f"{u}'b" if graph.is_boundary(u) else u for u in graph.neighbors(v)
            ]
    return PlabicGraph.from_adjacency(colors, adjacency, boundary, reduced=graph.reduced)


def check_generic(tree: PlabicGraph, z: Mat) -> None:
    """Raise NotGeneric unless z is generic for the extended tree at every root"""
    extended = extend_boundary(tree)
    for root in sorted(extended.internal_vertices()):
        try:
            labels = subspace_labels(extended, root, z)
        except DegenerateBoundary as exc:
            raise NotGeneric(f"root {root}: {exc}", root=root) from exc
        if not labels.in_bounds:
            raise NotGeneric(f"root {root}: predicted dimension outside [1, {z.nrows}]", root=root, structural=True)
        if not labels.generic:
            raise NotGeneric(f"root {root}: subspace dimensions differ from the prediction", root=root)


def build_tree_vrc(tree: PlabicGraph, z: Mat, verify_generic: bool = True) -> VRC:
    """
    Build the VRC with boundary z on a bipartite amplitree.

    Vectors are v_b = F_b with root b; coefficients at each white vertex span
    the one-dimensional kernel of its neighbouring vectors.

    Args:
        tree: bipartite plabic tree of type (k, km+1)
        z: m x n boundary
        verify_generic: check genericity at every root of the extended tree first

    Returns:
        The VRC; every relation holds exactly
    """
    if not tree.is_bipartite():
        raise WorkbenchError("build_tree_vrc needs a bipartite tree")
    m = z.nrows
    if verify_generic:
        check_generic(tree, z)
    vectors: Dict[str, Vector] = {}
    for v in tree.boundary_vertices():
        vectors[v] = z.column(tree.vertices[v].boundary - 1)
    for b in sorted(tree.internal_vertices()):
        if tree.color(b) != BLACK:
            continue
        labels = subspace_labels(tree, b, z)
        value = labels.labels[b]
        if value.is_zero() or value.grade != 1:
            raise NotGeneric(f"F at {b} is not a nonzero vector", root=b)
        vectors[b] = value.as_vector()
    coeffs: Dict[str, Any] = {}
    for w in sorted(tree.internal_vertices()):
        if tree.color(w) != WHITE:
            continue
        edges = list(tree.rotation[w])
        matrix = Mat.from_columns([vectors[tree.other_end(e, w)] for e in edges], nrows=m)
        kernel = matrix.kernel()
        if len(kernel) != 1:
            raise KernelDimensionError(f"kernel at {w} has dimension {len(kernel)}", vertex=w)
        if any(not c for c in kernel[0]):
            raise KernelDimensionError(f"kernel at {w} has a zero entry", vertex=w)
        for e, c in zip(edges, kernel[0]):
            coeffs[e] = c
    vrc = VRC(graph=tree, m=m, vectors=vectors, coeffs=coeffs)
    problems = vrc.violations()
    if problems:
        raise NotGeneric(f"constructed configuration is invalid: {problems[0]}")
    return vrc


REDRAW_ERRORS = (
    NotGeneric,
    DegenerateBoundary,
    KernelDimensionError,
    Degenerate,
    RankDeficientSources,
    EvaluationDivisionByZero,
)


def solve_with_redraws(
    solve: Callable[[Mat], T],
    rng: random.Random,
    m: int,
    n: int,
    cap: int = 32,
    bound: int = 10_000,
) -> Tuple[T, Mat]:
    """
    Draw a random m x n boundary and call ``solve`` on it, redrawing on
    genericity failures up to ``cap`` times.

    Returns:
        (result, boundary used)
    """
    last: Optional[Exception] = None
    for attempt in range(1, cap + 1):
        z = Mat.random(rng, m, n, bound)
        try:
            return solve(z), z
        except REDRAW_ERRORS as exc:
            if exc.context.get("structural"):
                raise
            last = exc
            logger.debug("attempt %d: redrawing boundary after %s", attempt, exc)
    logger.info("giving up after %d draws", cap)
    raise last


# --------------------------------------------------------------------------
# coefficient cross-check
# --------------------------------------------------------------------------


def boundary_coefficients(tree: PlabicGraph, z: Mat) -> Dict[str, Any]:
    """
    f_e(z): 1 on interior edges; on an edge from boundary i to white w, the
    bracket of the wedge of the labels of w's other neighbours (root w), read
    clockwise from i.
    """
    values: Dict[str, Any] = {}
    for e, (a, b) in tree.edges.items():
        ends = [a, b]
        leaf = next((v for v in ends if tree.is_boundary(v)), None)
        if leaf is None:
            values[e] = Fraction(1)
            continue
        w = tree.other_end(e, leaf)
        if tree.is_boundary(w) or tree.color(w) != WHITE:
            raise WorkbenchError(f"boundary edge {e} does not end at a white vertex")
        labels = subspace_labels(tree, w, z).labels
        rot = list(tree.rotation[w])
        start = rot.index(e)
        others = [tree.other_end(rot[(start + t) % len(rot)], w) for t in range(1, len(rot))]
        values[e] = bracket(wedge_all((labels[u] for u in others), z.nrows))
    return values


def matches_gc_coefficients(vrc: VRC, z: Mat) -> bool:
    """
    Whether |r_e / f_e| is constant around every white vertex. The sign of
    r_e / f_e may change from edge to edge.
    """
    f = boundary_coefficients(vrc.graph, z)
    for w in vrc.graph.internal_vertices():
        if vrc.graph.color(w) != WHITE:
            continue
        ratios = set()
        for e in vrc.graph.rotation[w]:
            if not f[e]:
                return False
            ratios.add(abs(vrc.coeffs[e] / f[e]))
        if len(ratios) != 1:
            return False
    return True


# --------------------------------------------------------------------------
# propagation along acyclic reverse perfect orientations
# --------------------------------------------------------------------------


def vectors_from_paths(
    graph: PlabicGraph, orientation: Orientation, boundary: Mat, coeffs: Mapping[str, Any]
) -> Dict[str, Vector]:
    """
    Vectors on every black vertex from the source columns of ``boundary``.

    A non-source black vertex b has one incoming edge f from a white w; the
    relation at w gives v_b = -(1/r_f) * sum of r_e v_t over w's other edges.

    Raises:
        CyclicOrientation: the orientation has a directed cycle
    """
    if orientation.flavor != "reverse":
        raise WorkbenchError("vectors_from_paths needs a reverse perfect orientation")
    order = orientation.topological_order(graph)
    m = boundary.nrows
    vectors: Dict[str, Vector] = {}
    for v in order:
        if graph.color(v) != BLACK:
            continue
        if graph.is_boundary(v) and graph.vertices[v].boundary in orientation.sources:
            vectors[v] = boundary.column(graph.vertices[v].boundary - 1)
            continue
        incoming = orientation.in_edges(graph, v)
        if len(incoming) != 1:
            raise WorkbenchError(f"black vertex {v} has {len(incoming)} incoming edges")
        f = incoming[0]
        w = graph.other_end(f, v)
        total = _zero_vector(m)
        for e in graph.rotation[w]:
            if e == f:
                continue
            total = _axpy(coeffs[e], vectors[graph.other_end(e, w)], total)
        vectors[v] = tuple(-a / coeffs[f] for a in total)
    return vectors


def random_vrc(graph: PlabicGraph, m: int, rng: random.Random, bound: int = 10_000, cap: int = 32) -> VRC:
    """Random VRC: random coefficients and source vectors, propagated along an acyclic reverse orientation"""
    if not graph.is_bipartite():
        raise WorkbenchError("a VRC needs a bipartite graph")
    orientation = find_acyclic_reverse_po(graph)
    for _ in range(cap):
        coeffs = {e: random_nonzero_rational(rng, bound) for e in sorted(graph.edges)}
        columns = [
            tuple(random_rational(rng, bound) for _ in range(m)) if i in orientation.sources else _zero_vector(m)
            for i in range(1, graph.n + 1)
        ]
        vectors = vectors_from_paths(graph, orientation, Mat.from_columns(columns, nrows=m), coeffs)
        vrc = VRC(graph=graph, m=m, vectors=vectors, coeffs=coeffs)
        if vrc.is_valid():
            return vrc
    raise Degenerate(f"no valid random configuration after {cap} draws")


class LiftResult(BaseModel):
    """Lift of an m-VRC to the (n-k)-VRC with standard basis vectors on the sources"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    orientation: Orientation
    big: Mat = Field(..., description="(n-k) x n boundary W of the lifted configuration")
    complement: Mat = Field(..., description="k x n matrix C spanning the kernel of W")


def lift_to_big_vrc(vrc: VRC, orientation: Optional[Orientation] = None, cap: int = 40) -> LiftResult:
    """
    Put the standard basis on the sources of an acyclic reverse perfect
    orientation and propagate with the VRC's coefficients.

    Returns:
        LiftResult with W and C = W-perp; z = z_S W for the source columns z_S

    Raises:
        RankDeficientSources: z restricted to the sources does not have rank m
    """
    graph = vrc.graph
    orientation = orientation or find_acyclic_reverse_po(graph, cap=cap)
    if not orientation.is_acyclic(graph):
        raise CyclicOrientation("lift needs an acyclic orientation")
    sources = sorted(orientation.sources)
    z = vrc.boundary()
    if z.submatrix(range(vrc.m), [s - 1 for s in sources]).rank() < vrc.m:
        raise RankDeficientSources(f"boundary columns {sources} have rank below {vrc.m}")
    size = len(sources)
    columns = [
        tuple(Fraction(int(sources.index(i) == r)) if i in sources else Fraction(0) for r in range(size))
        for i in range(1, graph.n + 1)
    ]
    lifted = vectors_from_paths(graph, orientation, Mat.from_columns(columns, nrows=size), vrc.coeffs)
    big = Mat.from_columns([lifted[v] for v in graph.boundary_vertices()], nrows=size)
    complement = Mat(big.kernel(), ncols=graph.n)
    logger.debug("lifted to a %dx%d boundary", big.nrows, big.ncols)
    return LiftResult(orientation=orientation, big=big, complement=complement)


# --------------------------------------------------------------------------
# move transport
# --------------------------------------------------------------------------


def _new_vertex(before: PlabicGraph, after: PlabicGraph) -> str:
    (v,) = set(after.vertices) - set(before.vertices)
    return v


def transport_contract(vrc: VRC, middle: str) -> VRC:
    """
    Remove the bivalent vertex ``middle`` and merge its two neighbours, which
    share a colour. Coefficients on the absorbed vertex's edges are rescaled.
    """
    graph = vrc.graph
    if graph.is_boundary(middle) or graph.degree(middle) != 2:
        raise PatternMismatch(f"{middle} is not an internal bivalent vertex")
    e_a, e_b = graph.rotation[middle]
    a, b = graph.other_end(e_a, middle), graph.other_end(e_b, middle)
    if graph.is_boundary(a) or graph.is_boundary(b):
        raise PatternMismatch("cannot merge a boundary vertex")
    factor = -vrc.coeffs[e_a] / vrc.coeffs[e_b]
    coeffs = dict(vrc.coeffs)
    for e in graph.rotation[b]:
        if e != e_b:
            coeffs[e] = coeffs[e] * factor
    del coeffs[e_a], coeffs[e_b]
    vectors = {v: x for v, x in vrc.vectors.items() if v not in (middle, b)}
    merged = remove_bivalent(graph, middle)
    merged = contract_edge(merged, e_a)
    return VRC(graph=merged, m=vrc.m, vectors=vectors, coeffs=coeffs)


def transport_expand(vrc: VRC, vertex: str, split: Tuple[int, int]) -> VRC:
    """
    Split ``vertex`` into two vertices of its colour joined through a new
    bivalent vertex of the other colour.
    """
    graph = vrc.graph
    expanded = expand_vertex(graph, vertex, split)
    twin = _new_vertex(graph, expanded)
    link = expanded.edge_between(vertex, twin)
    color = graph.color(vertex)
    joined = insert_bivalent(expanded, link, WHITE if color == BLACK else BLACK)
    middle = _new_vertex(expanded, joined)
    near, far = joined.edge_between(vertex, middle), joined.edge_between(middle, twin)
    coeffs = {e: c for e, c in vrc.coeffs.items()}
    coeffs[near], coeffs[far] = Fraction(1), Fraction(-1)
    vectors = dict(vrc.vectors)
    if color == BLACK:
        vectors[twin] = vrc.vectors[vertex]
    else:
        total = _zero_vector(vrc.m)
        for e in joined.rotation[twin]:
            if e != far:
                total = _axpy(coeffs[e], vrc.vectors[joined.other_end(e, twin)], total)
        if _is_zero(total):
            raise Degenerate(f"split of {vertex} leaves a zero vector on the new black vertex")
        vectors[middle] = total
    return VRC(graph=joined, m=vrc.m, vectors=vectors, coeffs=coeffs)


def _square_cycle(graph: PlabicGraph, face: Sequence[str]) -> List[str]:
    for candidate in graph.square_faces():
        if set(candidate) == set(face):
            cycle = list(candidate)
            start = next(i for i, v in enumerate(cycle) if graph.color(v) == WHITE)
            return cycle[start:] + cycle[:start]
    raise PatternMismatch(f"{tuple(face)} is not an alternating square face")


def _external_edge(graph: PlabicGraph, v: str, cycle: Sequence[str]) -> str:
    for e in graph.rotation[v]:
        if graph.other_end(e, v) not in cycle:
            return e
    raise PatternMismatch(f"{v} has no edge leaving the square")


def transport_square_move(vrc: VRC, face: Sequence[str]) -> VRC:
    """
    Carry a VRC across a square move, keeping everything outside the square
    and the boundary fixed.

    Each flipped vertex whose outside neighbour would share its new colour is
    either merged through that neighbour (when it is an internal bivalent
    vertex) or separated from it by a new bivalent vertex. The new black
    vertices take the vectors met across their outside edges. The relation at
    an old square white puts that vector in the plane of the two old square
    blacks, in any dimension m, so each new white relation is the
    one-dimensional kernel of its port vector and the two new black vectors.

    Raises:
        Degenerate: the square vectors do not span a plane, or a local kernel
            is not one-dimensional with nonzero entries
    """
    graph = vrc.graph
    cycle = _square_cycle(graph, face)
    whites, blacks = cycle[0::2], cycle[1::2]
    plane = [vrc.vectors[b] for b in blacks]
    if Mat.from_columns(plane, nrows=vrc.m).rank() != 2:
        raise Degenerate(f"square blacks {blacks[0]}, {blacks[1]} do not span a plane")
    coeffs = dict(vrc.coeffs)
    vectors = dict(vrc.vectors)
    current = graph
    new_vectors: Dict[str, Vector] = {}
    ports: Dict[str, Tuple[Vector, Tuple[str, str]]] = {}

    for w in whites:
        e = _external_edge(current, w, cycle)
        x = current.other_end(e, w)
        if not current.is_boundary(x) and current.degree(x) == 2:
            other = current.other_end(next(f for f in current.rotation[x] if f != e), x)
            kept = coeffs[current.edge_between(x, other)]
            for f in current.rotation[x]:
                coeffs.pop(f)
            new_vectors[w] = vectors.pop(x)
            current = remove_bivalent(current, x)
            coeffs[current.edge_between(w, other)] = kept
        else:
            new_vectors[w] = vectors[x]
            before = current
            current = insert_bivalent(current, e, WHITE)
            s = _new_vertex(before, current)
            coeffs.pop(e)
            coeffs[current.edge_between(w, s)] = Fraction(1)
            coeffs[current.edge_between(s, x)] = Fraction(-1)

    for b in blacks:
        e = _external_edge(current, b, cycle)
        y = current.other_end(e, b)
        if current.degree(y) == 2:
            other = current.other_end(next(f for f in current.rotation[y] if f != e), y)
            for f in current.rotation[y]:
                coeffs.pop(f)
            current = remove_bivalent(current, y)
            ports[b] = (vectors[other], (b, other))
        else:
            before = current
            current = insert_bivalent(current, e, BLACK)
            t = _new_vertex(before, current)
            vectors[t] = vectors[b]
            coeffs[current.edge_between(t, y)] = coeffs.pop(e)
            ports[b] = (vectors[b], (b, t))
        vectors.pop(b)

    current = square_move(current, cycle)
    vectors.update(new_vectors)
    for w in whites:
        if Mat.from_columns(plane + [new_vectors[w]], nrows=vrc.m).rank() != 2:
            raise Degenerate(f"vector carried to {w} leaves the plane of the square", vertex=w)
    for b in blacks:
        port_vector, (end_a, end_b) = ports[b]
        port_edge = current.edge_between(end_a, end_b)
        square_edges = [current.edge_between(b, w) for w in whites]
        matrix = Mat.from_columns([port_vector] + [new_vectors[w] for w in whites], nrows=vrc.m)
        kernel = matrix.kernel()
        if len(kernel) != 1 or any(not c for c in kernel[0]):
            raise Degenerate(f"local solve at {b} is degenerate", vertex=b)
        for edge, c in zip([port_edge] + square_edges, kernel[0]):
            coeffs[edge] = c
    moved = VRC(graph=current, m=vrc.m, vectors=vectors, coeffs=coeffs)
    problems = moved.violations()
    if problems:
        raise Degenerate(f"square move transport failed: {problems[0]}")
    return moved
