"""
Plabic graphs: embedded bicolored graphs in a disk, their moves, perfect
orientations, faces, path matrices and gauge fixes.

Vertices are string ids. Boundary vertices are black, have degree one and carry
their clockwise position 1..n. ``rotation[v]`` lists the edges at ``v`` in
clockwise order, which is all the embedding information the algorithms need.
"""

import logging
from fractions import Fraction
from itertools import product
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field

from .errors import (
    CapExceeded,
    CyclicOrientation,
    Infeasible,
    NotOrientable,
    PatternMismatch,
    WorkbenchError,
)
from .scalar import Mat

logger = logging.getLogger(__name__)

BLACK = "b"
WHITE = "w"


class Vertex(BaseModel):
    """A vertex of a plabic graph"""

    model_config = ConfigDict(frozen=True)

    color: str = Field(..., description="'b' or 'w'", pattern="^[bw]$")
    boundary: Optional[int] = Field(None, description="Clockwise boundary position, None if internal")

    @property
    def is_boundary(self) -> bool:
        return self.boundary is not None


class PlabicGraph(BaseModel):
    """Planar bicolored graph with a clockwise rotation system"""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., description="Number of boundary vertices", ge=1)
    vertices: Dict[str, Vertex] = Field(..., description="Vertex id to colour and boundary position")
    edges: Dict[str, Tuple[str, str]] = Field(..., description="Edge id to its two endpoints")
    rotation: Dict[str, Tuple[str, ...]] = Field(..., description="Clockwise incident edges per vertex")
    reduced: bool = Field(False, description="Caller's declaration that the graph is reduced")

    # construction -----------------------------------------------------------

    @classmethod
    def from_adjacency(
        cls,
        colors: Mapping[str, str],
        adjacency: Mapping[str, Sequence[str]],
        boundary: Mapping[str, int],
        reduced: bool = False,
    ) -> "PlabicGraph":
        """
        Build a graph from clockwise neighbour lists.

        Args:
            colors: colour of every internal vertex ('b' or 'w')
            adjacency: clockwise neighbour list of every vertex
            boundary: boundary vertex id to its position 1..n

        Returns:
            The graph, with one edge per unordered adjacent pair
        """
        edge_of: Dict[FrozenSet[str], str] = {}
        edges: Dict[str, Tuple[str, str]] = {}
        rotation: Dict[str, Tuple[str, ...]] = {}
        for v, nbrs in adjacency.items():
            rot = []
            for u in nbrs:
                key = frozenset((u, v))
                if key not in edge_of:
                    eid = f"e{len(edges) + 1}"
                    edge_of[key] = eid
                    edges[eid] = (v, u)
                rot.append(edge_of[key])
            rotation[v] = tuple(rot)
        vertices = {
            v: Vertex(color=BLACK, boundary=boundary[v]) if v in boundary else Vertex(color=colors[v])
            for v in adjacency
        }
        graph = cls(n=len(boundary), vertices=vertices, edges=edges, rotation=rotation, reduced=reduced)
        graph.validate()
        return graph

    def replace(self, **changes) -> "PlabicGraph":
        return self.model_copy(update=changes)

    # queries ----------------------------------------------------------------

    def boundary_vertex(self, position: int) -> str:
        for v, data in self.vertices.items():
            if data.boundary == position:
                return v
        raise KeyError(f"no boundary vertex at position {position}")

    def boundary_vertices(self) -> List[str]:
        return [self.boundary_vertex(i) for i in range(1, self.n + 1)]

    def internal_vertices(self) -> List[str]:
        return [v for v, data in self.vertices.items() if not data.is_boundary]

    def is_boundary(self, v: str) -> bool:
        return self.vertices[v].is_boundary

    def color(self, v: str) -> str:
        return self.vertices[v].color

    def degree(self, v: str) -> int:
        return len(self.rotation[v])

    def other_end(self, edge: str, v: str) -> str:
        a, b = self.edges[edge]
        return b if a == v else a

    def neighbors(self, v: str) -> List[str]:
        """Neighbours in clockwise order"""
        return [self.other_end(e, v) for e in self.rotation[v]]

    def edge_between(self, u: str, v: str) -> str:
        for e in self.rotation[u]:
            if self.other_end(e, u) == v:
                return e
        raise KeyError(f"{u} and {v} are not adjacent")

    def is_bipartite(self) -> bool:
        return all(self.color(a) != self.color(b) for a, b in self.edges.values())

    def to_networkx(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.vertices)
        for eid, (a, b) in self.edges.items():
            graph.add_edge(a, b, key=eid)
        return graph

    def op(self) -> "PlabicGraph":
        """Swap the colour of every internal vertex"""
        flipped = {
            v: data if data.is_boundary else Vertex(color=WHITE if data.color == BLACK else BLACK)
            for v, data in self.vertices.items()
        }
        return self.replace(vertices=flipped)

    def validate(self) -> None:
        for eid, (a, b) in self.edges.items():
            if a not in self.vertices or b not in self.vertices:
                raise WorkbenchError(f"edge {eid} has an unknown endpoint")
            if eid not in self.rotation[a] or eid not in self.rotation[b]:
                raise WorkbenchError(f"edge {eid} missing from an endpoint rotation")
        for v, rot in self.rotation.items():
            if len(set(rot)) != len(rot):
                raise WorkbenchError(f"rotation at {v} repeats an edge")
            for e in rot:
                if v not in self.edges[e]:
                    raise WorkbenchError(f"rotation at {v} lists foreign edge {e}")
        positions = sorted(d.boundary for d in self.vertices.values() if d.is_boundary)
        if positions != list(range(1, self.n + 1)):
            raise WorkbenchError(f"boundary positions {positions} are not 1..{self.n}")
        graph = self.to_networkx()
        for v, data in self.vertices.items():
            if data.is_boundary:
                if self.degree(v) != 1:
                    raise WorkbenchError(f"boundary vertex {v} has degree {self.degree(v)}")
                continue
            if self.degree(v) == 1 and not self.is_boundary(self.neighbors(v)[0]):
                raise WorkbenchError(f"internal leaf {v} is not a lollipop")
        boundary = {v for v, d in self.vertices.items() if d.is_boundary}
        for component in nx.connected_components(graph):
            if not component & boundary:
                raise WorkbenchError("an internal component does not reach the boundary")

    # faces --------------------------------------------------------------------

    def closed_rotation(self) -> Tuple[Dict[str, Tuple[str, ...]], Dict[str, Tuple[str, str]]]:
        """Rotation system with the disk boundary added as arcs ~i from i to i+1"""
        rotation = dict(self.rotation)
        ends = dict(self.edges)
        for i in range(1, self.n + 1):
            nxt = i % self.n + 1
            ends[f"~{i}"] = (self.boundary_vertex(i), self.boundary_vertex(nxt))
        for i in range(1, self.n + 1):
            prev = (i - 2) % self.n + 1
            v = self.boundary_vertex(i)
            rotation[v] = (f"~{i}",) + self.rotation[v] + (f"~{prev}",)
        return rotation, ends

    def face_darts(self) -> List[List[Tuple[str, str]]]:
        """
        Faces of the disk as cyclic lists of darts ``(edge, tail)``, traced from
        the rotation system with the boundary closed off. Each walk keeps its
        face on the left, so inner faces run counterclockwise. Needs n >= 2.
        """
        if self.n < 2:
            raise WorkbenchError("face tracing needs at least two boundary vertices")
        rotation, ends = self.closed_rotation()

        def step(dart: Tuple[str, str]) -> Tuple[str, str]:
            e, u = dart
            a, b = ends[e]
            v = b if a == u else a
            rot = rotation[v]
            return rot[(rot.index(e) + 1) % len(rot)], v

        seen: Set[Tuple[str, str]] = set()
        walks: List[List[Tuple[str, str]]] = []
        outer = ("~1", self.boundary_vertex(1))
        for edge, (a, b) in ends.items():
            for start in ((edge, a), (edge, b)):
                if start in seen:
                    continue
                walk = []
                dart = start
                while dart not in seen:
                    seen.add(dart)
                    walk.append(dart)
                    dart = step(dart)
                if outer not in walk:
                    walks.append(walk)
        return walks

    def faces(self) -> List[Tuple[str, ...]]:
        """Faces of the disk as cyclic vertex sequences"""
        return [tuple(u for _, u in walk) for walk in self.face_darts()]

    def euler_faces(self) -> int:
        """Face count from Euler's formula for a disk closed by the boundary cycle"""
        return len(self.edges) - len(self.vertices) + self.n + 1

    def num_faces(self) -> int:
        if self.n < 2:
            return self.euler_faces()
        return len(self.faces())

    def square_faces(self) -> List[Tuple[str, ...]]:
        """Faces bounded by four trivalent internal vertices of alternating colour"""
        squares = []
        for face in self.faces():
            if len(face) != 4 or len(set(face)) != 4:
                continue
            if any(self.is_boundary(v) or self.degree(v) != 3 for v in face):
                continue
            colors = [self.color(v) for v in face]
            if all(colors[i] != colors[(i + 1) % 4] for i in range(4)):
                squares.append(face)
        return squares


class Orientation(BaseModel):
    """Edge directions of a (reverse) perfect orientation"""

    model_config = ConfigDict(frozen=True)

    heads: Dict[str, str] = Field(..., description="Edge id to the vertex it points to")
    flavor: str = Field(..., description="'perfect' or 'reverse'", pattern="^(perfect|reverse)$")
    sources: FrozenSet[int] = Field(..., description="Boundary positions whose edge points inward")

    def head(self, edge: str) -> str:
        return self.heads[edge]

    def tail(self, graph: PlabicGraph, edge: str) -> str:
        return graph.other_end(edge, self.heads[edge])

    def out_edges(self, graph: PlabicGraph, v: str) -> List[str]:
        return [e for e in graph.rotation[v] if self.heads[e] != v]

    def in_edges(self, graph: PlabicGraph, v: str) -> List[str]:
        return [e for e in graph.rotation[v] if self.heads[e] == v]

    def digraph(self, graph: PlabicGraph) -> nx.DiGraph:
        dg = nx.DiGraph()
        dg.add_nodes_from(graph.vertices)
        for e, head in self.heads.items():
            dg.add_edge(graph.other_end(e, head), head, key=e)
        return dg

    def is_acyclic(self, graph: PlabicGraph) -> bool:
        return nx.is_directed_acyclic_graph(self.digraph(graph))

    def topological_order(self, graph: PlabicGraph) -> List[str]:
        dg = self.digraph(graph)
        if not nx.is_directed_acyclic_graph(dg):
            raise CyclicOrientation("orientation has a directed cycle")
        return list(nx.lexicographical_topological_sort(dg))

    def reversed(self, graph: PlabicGraph) -> "Orientation":
        flipped = {e: graph.other_end(e, h) for e, h in self.heads.items()}
        return Orientation(
            heads=flipped,
            flavor="reverse" if self.flavor == "perfect" else "perfect",
            sources=frozenset(range(1, graph.n + 1)) - self.sources,
        )


# --------------------------------------------------------------------------
# perfect orientations
# --------------------------------------------------------------------------


def _special_is_out(color: str, flavor: str) -> bool:
    """Whether the distinguished edge at a vertex of this colour is its out-edge"""
    return (color == BLACK) == (flavor == "perfect")


def _orientations(graph: PlabicGraph, flavor: str) -> Iterator[Orientation]:
    """Backtracking with unit propagation over the distinguished edge per vertex"""
    internal = sorted(graph.internal_vertices())
    domains: Dict[str, Set[str]] = {v: set(graph.rotation[v]) for v in internal}
    links: List[Tuple[str, str, str, bool]] = []
    for e, (a, b) in graph.edges.items():
        if graph.is_boundary(a) or graph.is_boundary(b):
            continue
        # opposite roles: both or neither pick e; equal roles: exactly one picks e
        together = _special_is_out(graph.color(a), flavor) != _special_is_out(graph.color(b), flavor)
        links.append((e, a, b, together))

    def propagate(doms: Dict[str, Set[str]]) -> bool:
        changed = True
        while changed:
            changed = False
            for e, a, b, together in links:
                for x, y in ((a, b), (b, a)):
                    dx, dy = doms[x], doms[y]
                    if not dx:
                        return False
                    fixed_in = dx == {e}
                    excluded = e not in dx
                    if together:
                        if fixed_in and dy != {e}:
                            if e not in dy:
                                return False
                            doms[y] = {e}
                            changed = True
                        elif excluded and e in dy:
                            dy.discard(e)
                            changed = True
                    else:
                        if fixed_in and e in dy:
                            dy.discard(e)
                            changed = True
                        elif excluded and dy != {e}:
                            if e not in dy:
                                return False
                            doms[y] = {e}
                            changed = True
        return all(doms[v] for v in doms)

    def build(choice: Dict[str, str]) -> Orientation:
        heads: Dict[str, str] = {}
        for e, (a, b) in graph.edges.items():
            ends = [v for v in (a, b) if not graph.is_boundary(v)]
            anchor = ends[0] if ends else a
            other = graph.other_end(e, anchor)
            picked = choice.get(anchor) == e
            out = _special_is_out(graph.color(anchor), flavor)
            # anchor's edge points away from anchor iff (picked and special is out) or (not picked and special is in)
            heads[e] = other if picked == out else anchor
        sources = frozenset(
            graph.vertices[v].boundary
            for v in graph.vertices
            if graph.is_boundary(v) and heads[graph.rotation[v][0]] != v
        )
        return Orientation(heads=heads, flavor=flavor, sources=sources)

    def search(doms: Dict[str, Set[str]]) -> Iterator[Orientation]:
        if not propagate(doms):
            return
        open_vertices = [v for v in internal if len(doms[v]) > 1]
        if not open_vertices:
            yield build({v: next(iter(doms[v])) for v in internal})
            return
        pivot = min(open_vertices, key=lambda v: (len(doms[v]), v))
        for e in sorted(doms[pivot]):
            trial = {v: set(d) for v, d in doms.items()}
            trial[pivot] = {e}
            yield from search(trial)

    if not internal:
        # edges join boundary vertices directly; not a valid plabic input
        raise NotOrientable("graph has no internal vertices")
    yield from search(domains)


def iter_orientations(graph: PlabicGraph, flavor: str = "perfect") -> Iterator[Orientation]:
    return _orientations(graph, flavor)


def find_perfect_orientation(graph: PlabicGraph, flavor: str = "perfect") -> Orientation:
    for orientation in _orientations(graph, flavor):
        return orientation
    raise NotOrientable(f"no {flavor} orientation exists")


def enumerate_perfect_orientations(graph: PlabicGraph, flavor: str = "perfect", cap: int = 40) -> List[Orientation]:
    if len(graph.edges) > cap:
        raise CapExceeded(f"{len(graph.edges)} edges exceed the enumeration cap {cap}")
    return list(_orientations(graph, flavor))


def positroid_bases(graph: PlabicGraph, cap: int = 40) -> Set[FrozenSet[int]]:
    """Source sets of all perfect orientations"""
    return {o.sources for o in enumerate_perfect_orientations(graph, "perfect", cap)}


def _cyclic_key(start: int, n: int):
    return lambda i: (i - start) % n


def find_acyclic_reverse_po(
    graph: PlabicGraph, preferred_start: Optional[int] = None, cap: int = 40
) -> Orientation:
    """
    Acyclic reverse perfect orientation. With ``preferred_start = i`` the source
    set is the lexicographically smallest for the cyclic order starting at i.
    """
    if preferred_start is None:
        for orientation in _orientations(graph, "reverse"):
            if orientation.is_acyclic(graph):
                return orientation
        raise NotOrientable("no acyclic reverse perfect orientation found")
    key = _cyclic_key(preferred_start, graph.n)
    candidates = [o for o in enumerate_perfect_orientations(graph, "reverse", cap) if o.is_acyclic(graph)]
    if not candidates:
        raise NotOrientable("no acyclic reverse perfect orientation found")
    return min(candidates, key=lambda o: sorted(key(i) for i in o.sources))


def type_and_dim(graph: PlabicGraph) -> Tuple[int, int, int]:
    """(k, n, dim) with k the source count of a perfect orientation and dim = faces - 1"""
    orientation = find_perfect_orientation(graph, "perfect")
    return len(orientation.sources), graph.n, graph.num_faces() - 1


# --------------------------------------------------------------------------
# path matrices
# --------------------------------------------------------------------------


def _edge_weight(graph: PlabicGraph, orientation: Orientation, weights: Mapping[str, object], edge: str):
    head = orientation.head(edge)
    tail = graph.other_end(edge, head)
    w = weights.get(edge, Fraction(1))
    if graph.color(tail) == WHITE and graph.color(head) == BLACK:
        return w
    if graph.color(tail) == BLACK and graph.color(head) == WHITE:
        return 1 / w
    return Fraction(1)


def boundary_measurements(
    graph: PlabicGraph, orientation: Orientation, weights: Mapping[str, object]
) -> Dict[Tuple[int, int], object]:
    """M_ij for sources i and boundary j, by dynamic programming on the DAG"""
    order = orientation.topological_order(graph)
    result: Dict[Tuple[int, int], object] = {}
    for i in sorted(orientation.sources):
        reach: Dict[str, object] = {graph.boundary_vertex(i): Fraction(1)}
        for v in order:
            if v not in reach:
                continue
            for e in orientation.out_edges(graph, v):
                head = orientation.head(e)
                reach[head] = reach.get(head, Fraction(0)) + reach[v] * _edge_weight(graph, orientation, weights, e)
        for j in range(1, graph.n + 1):
            if j not in orientation.sources:
                result[(i, j)] = reach.get(graph.boundary_vertex(j), Fraction(0))
    return result


def path_matrix(graph: PlabicGraph, orientation: Orientation, weights: Mapping[str, object]) -> Mat:
    """k x n path matrix with the identity on source columns"""
    if not orientation.is_acyclic(graph):
        raise CyclicOrientation("path matrix needs an acyclic orientation")
    sources = sorted(orientation.sources)
    measurements = boundary_measurements(graph, orientation, weights)
    rows = []
    for i in sources:
        row = []
        for j in range(1, graph.n + 1):
            if j in orientation.sources:
                row.append(Fraction(int(i == j)))
                continue
            lo, hi = min(i, j), max(i, j)
            between = sum(1 for s in sources if lo < s < hi)
            row.append((-1) ** between * measurements[(i, j)])
        rows.append(row)
    return Mat(rows, ncols=graph.n)


def _paths(graph: PlabicGraph, orientation: Orientation, start: str) -> Iterator[List[str]]:
    """All directed edge paths from ``start`` to a boundary vertex"""
    stack = [(start, [])]
    while stack:
        v, path = stack.pop()
        if graph.is_boundary(v) and path:
            yield path
            continue
        for e in orientation.out_edges(graph, v):
            stack.append((orientation.head(e), path + [e]))


def flow_plucker(
    graph: PlabicGraph, orientation: Orientation, weights: Mapping[str, object], columns: Sequence[int]
):
    """Plucker coordinate as the weighted count of vertex-disjoint flows from I to J"""
    target = set(columns)
    sources = set(orientation.sources)
    starts = sorted(sources - target)
    ends = target - sources
    if len(starts) != len(ends):
        return Fraction(0)
    options = []
    for i in starts:
        paths = [
            p for p in _paths(graph, orientation, graph.boundary_vertex(i))
            if graph.vertices[orientation.head(p[-1])].boundary in ends
        ]
        options.append(paths)
    total = Fraction(0)
    for family in product(*options):
        used: Set[str] = set()
        heads = set()
        ok = True
        for path in family:
            verts = [orientation.tail(graph, path[0])] + [orientation.head(e) for e in path]
            if used & set(verts):
                ok = False
                break
            used |= set(verts)
            heads.add(orientation.head(path[-1]))
        if not ok or len(heads) != len(family):
            continue
        term = Fraction(1)
        for path in family:
            for e in path:
                term = term * _edge_weight(graph, orientation, weights, e)
        total = total + term
    return total


def gauge_weights(graph: PlabicGraph, weights: Mapping[str, object], vertex: str, factor) -> Dict[str, object]:
    """Multiply the weight of every edge at ``vertex`` by ``factor``"""
    updated = dict(weights)
    for e in graph.rotation[vertex]:
        updated[e] = updated.get(e, Fraction(1)) * factor
    return updated


# --------------------------------------------------------------------------
# moves
# --------------------------------------------------------------------------


def _fresh(existing, prefix: str) -> str:
    index = len(existing) + 1
    while f"{prefix}{index}" in existing:
        index += 1
    return f"{prefix}{index}"


def square_move(graph: PlabicGraph, face: Sequence[str]) -> PlabicGraph:
    if not any(set(face) == set(f) for f in graph.square_faces()):
        raise PatternMismatch(f"{tuple(face)} is not an alternating square face")
    vertices = dict(graph.vertices)
    for v in face:
        vertices[v] = Vertex(color=WHITE if graph.color(v) == BLACK else BLACK)
    return graph.replace(vertices=vertices)


def contract_edge(graph: PlabicGraph, edge: str) -> PlabicGraph:
    u, v = graph.edges[edge]
    if graph.is_boundary(u) or graph.is_boundary(v) or graph.color(u) != graph.color(v) or u == v:
        raise PatternMismatch(f"edge {edge} does not join two internal vertices of one colour")
    rot_u, rot_v = list(graph.rotation[u]), list(graph.rotation[v])
    if rot_u.count(edge) != 1:
        raise PatternMismatch("contraction would create a loop")
    iv = rot_v.index(edge)
    spliced_in = rot_v[iv + 1:] + rot_v[:iv]
    iu = rot_u.index(edge)
    merged = tuple(rot_u[:iu] + spliced_in + rot_u[iu + 1:])
    edges = {e: ends for e, ends in graph.edges.items() if e != edge}
    for e in spliced_in:
        a, b = edges[e]
        edges[e] = (u if a == v else a, u if b == v else b)
    rotation = {w: r for w, r in graph.rotation.items() if w != v}
    rotation[u] = merged
    vertices = {w: d for w, d in graph.vertices.items() if w != v}
    return graph.replace(vertices=vertices, edges=edges, rotation=rotation)


def expand_vertex(graph: PlabicGraph, vertex: str, split: Tuple[int, int]) -> PlabicGraph:
    """Move the cyclic block rotation[i:j] onto a new vertex of the same colour"""
    if graph.is_boundary(vertex):
        raise PatternMismatch("cannot expand a boundary vertex")
    rot = list(graph.rotation[vertex])
    i, j = split
    size = (j - i) % len(rot) or len(rot)
    block = [rot[(i + t) % len(rot)] for t in range(size)]
    rest = [e for e in rot if e not in block]
    if not block or not rest:
        raise PatternMismatch("split must leave edges on both sides")
    new_v = _fresh(graph.vertices, "x")
    new_e = _fresh(graph.edges, "e")
    start = rot.index(block[0])
    # the new edge takes the block's place in the old vertex's rotation
    kept = [e for e in rot[:start] if e not in block] + [new_e] + [e for e in rot[start:] if e not in block]
    edges = dict(graph.edges)
    for e in block:
        a, b = edges[e]
        edges[e] = (new_v if a == vertex else a, new_v if b == vertex else b)
    edges[new_e] = (vertex, new_v)
    rotation = dict(graph.rotation)
    rotation[vertex] = tuple(kept)
    rotation[new_v] = tuple([new_e] + block)
    vertices = dict(graph.vertices)
    vertices[new_v] = Vertex(color=graph.color(vertex))
    return graph.replace(vertices=vertices, edges=edges, rotation=rotation)


def insert_bivalent(graph: PlabicGraph, edge: str, color: str) -> PlabicGraph:
    u, v = graph.edges[edge]
    x = _fresh(graph.vertices, "x")
    e1 = _fresh(graph.edges, "e")
    edges = {e: ends for e, ends in graph.edges.items() if e != edge}
    edges[e1] = (u, x)
    e2 = _fresh(set(edges) | {e1}, "e")
    edges[e2] = (x, v)
    rotation = dict(graph.rotation)
    rotation[u] = tuple(e1 if e == edge else e for e in graph.rotation[u])
    rotation[v] = tuple(e2 if e == edge else e for e in graph.rotation[v])
    rotation[x] = (e1, e2)
    vertices = dict(graph.vertices)
    vertices[x] = Vertex(color=color)
    return graph.replace(vertices=vertices, edges=edges, rotation=rotation)


def remove_bivalent(graph: PlabicGraph, vertex: str) -> PlabicGraph:
    if graph.is_boundary(vertex) or graph.degree(vertex) != 2:
        raise PatternMismatch(f"{vertex} is not an internal bivalent vertex")
    e1, e2 = graph.rotation[vertex]
    u, v = graph.other_end(e1, vertex), graph.other_end(e2, vertex)
    if u == v or (graph.is_boundary(u) and graph.is_boundary(v)):
        raise PatternMismatch(f"removing {vertex} would leave a loop or a boundary-to-boundary edge")
    edges = {e: ends for e, ends in graph.edges.items() if e not in (e1, e2)}
    edges[e1] = (u, v)
    rotation = {w: r for w, r in graph.rotation.items() if w != vertex}
    rotation[v] = tuple(e1 if e == e2 else e for e in graph.rotation[v])
    vertices = {w: d for w, d in graph.vertices.items() if w != vertex}
    return graph.replace(vertices=vertices, edges=edges, rotation=rotation)


def apply_move(graph: PlabicGraph, move: str, *args) -> PlabicGraph:
    """
    Apply one of the local moves.

    Args:
        move: 'square', 'contract', 'expand', 'insert_bivalent' or 'remove_bivalent'
        args: the face, edge, (vertex, split), (edge, color) or vertex

    Returns:
        The moved graph
    """
    moves = {
        "square": square_move,
        "contract": contract_edge,
        "expand": expand_vertex,
        "insert_bivalent": insert_bivalent,
        "remove_bivalent": remove_bivalent,
    }
    if move not in moves:
        raise PatternMismatch(f"unknown move {move!r}")
    return moves[move](graph, *args)


# --------------------------------------------------------------------------
# gauge fixes
# --------------------------------------------------------------------------


def gauge_fix(graph: PlabicGraph, required_edges: Sequence[str] = ()) -> Tuple[Set[str], Set[str]]:
    """
    Partition edges into E_1 (a spanning forest with one boundary vertex per
    component, containing ``required_edges``) and the remaining edges.
    """
    parent = {v: v for v in graph.vertices}
    has_boundary = {v: graph.is_boundary(v) for v in graph.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def join(e: str) -> bool:
        a, b = (find(x) for x in graph.edges[e])
        if a == b or (has_boundary[a] and has_boundary[b]):
            return False
        parent[a] = b
        has_boundary[b] = has_boundary[a] or has_boundary[b]
        return True

    forest: Set[str] = set()
    for e in required_edges:
        if not join(e):
            raise Infeasible(f"required edge {e} closes a cycle or joins two boundary vertices")
        forest.add(e)
    progress = True
    while progress:
        progress = False
        for e in sorted(graph.edges):
            if e not in forest and join(e):
                forest.add(e)
                progress = True
    roots = {find(v) for v in graph.vertices}
    if any(not has_boundary[r] for r in roots):
        raise Infeasible("some component of E_1 has no boundary vertex")
    return forest, set(graph.edges) - forest


# --------------------------------------------------------------------------
# shipped graphs
# --------------------------------------------------------------------------


def top_cell_network(k: int, n: int) -> Tuple[PlabicGraph, Orientation]:
    """
    Grid network for the top cell of Gr(k, n): k rows by n-k columns of
    black/white crossing pairs; sources 1..k on the east side, sinks k+1..n
    along the south side read east to west.
    """
    if not 1 <= k < n:
        raise ValueError("top cell network needs 1 <= k < n")
    cols = n - k
    colors: Dict[str, str] = {}
    adjacency: Dict[str, List[str]] = {}
    boundary: Dict[str, int] = {}

    def black(i, j):
        return f"B{i}_{j}"

    def white(i, j):
        return f"W{i}_{j}"

    for i in range(1, k + 1):
        boundary[f"r{i}"] = i
        adjacency[f"r{i}"] = [black(i, cols)]
    for j in range(1, cols + 1):
        boundary[f"c{j}"] = n - j + 1
        adjacency[f"c{j}"] = [white(k, j)]
    for i in range(1, k + 1):
        for j in range(1, cols + 1):
            colors[black(i, j)] = BLACK
            colors[white(i, j)] = WHITE
            nb = []
            if i > 1:
                nb.append(white(i - 1, j))
            nb.append(f"r{i}" if j == cols else white(i, j + 1))
            nb.append(white(i, j))
            adjacency[black(i, j)] = nb
            nw = [black(i, j), f"c{j}" if i == k else black(i + 1, j)]
            if j > 1:
                nw.append(black(i, j - 1))
            adjacency[white(i, j)] = nw
    graph = PlabicGraph.from_adjacency(colors, adjacency, boundary, reduced=True)
    heads: Dict[str, str] = {}
    for e, (a, b) in graph.edges.items():
        ends = {a, b}
        # flow runs west and south: sources r_i -> black, black -> white (SW), white -> south/west
        if any(x.startswith("r") for x in ends):
            heads[e] = next(x for x in ends if not x.startswith("r"))
        elif any(x.startswith("c") for x in ends):
            heads[e] = next(x for x in ends if x.startswith("c"))
        else:
            w = next(x for x in ends if x.startswith("W"))
            bl = next(x for x in ends if x.startswith("B"))
            wi, wj = map(int, w[1:].split("_"))
            bi, bj = map(int, bl[1:].split("_"))
            heads[e] = w if (wi, wj) == (bi, bj) else bl
    orientation = Orientation(heads=heads, flavor="perfect", sources=frozenset(range(1, k + 1)))
    return graph, orientation
