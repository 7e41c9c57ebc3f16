"""
Plabic tangles and their operad structure.

A tangle is a core plabic graph drawn in the outer disk together with blobs
(inner disks). Every blob vertex is joined by a segment either to an internal
black vertex of the core or straight to an outer boundary vertex the core
does not touch. The core therefore only carries the outer labels it touches;
``core_labels`` maps its boundary positions 1..n_c to outer labels.

Blob vertices are listed clockwise starting after the blob's star. A segment
at a core vertex sits immediately clockwise after the edge named by its
anchor, which is all the embedding data composition needs.
"""

import logging
from itertools import combinations
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Set, Tuple, Union

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import ArityMismatch, CapExceeded, NoBrushing, WorkbenchError
from .models import OperadReport
from .plabic import BLACK, WHITE, Orientation, PlabicGraph, Vertex, iter_orientations

logger = logging.getLogger(__name__)

HUB = "@"

# nested shape: a leaf position, or (vertex id, colour, children clockwise)
Node = Union[int, Tuple[str, str, Sequence["Node"]]]


class Anchor(BaseModel):
    """Where one blob vertex is attached"""

    model_config = ConfigDict(frozen=True)

    vertex: Optional[str] = Field(None, description="Internal black core vertex b_u")
    after: Optional[str] = Field(None, description="Core edge at b_u that the segment follows clockwise")
    outer: Optional[int] = Field(None, description="Outer boundary label for a blob vertex wired straight out")

    @model_validator(mode="after")
    def _one_target(self) -> "Anchor":
        if (self.vertex is None) == (self.outer is None):
            raise ValueError("an anchor names either a core vertex or an outer label")
        if self.vertex is not None and self.after is None:
            raise ValueError("a core anchor needs the edge its segment follows")
        return self

    @property
    def is_pass_through(self) -> bool:
        return self.outer is not None


class Blob(BaseModel):
    """An inner disk: anchors clockwise after the star, and the labels of its vertices"""

    model_config = ConfigDict(frozen=True)

    anchors: Tuple[Anchor, ...] = Field(..., description="Attachment of each blob vertex, clockwise after the star")
    names: Tuple[int, ...] = Field(..., description="Column labels of the blob vertices (the domain of the promotion)")

    @model_validator(mode="after")
    def _consistent(self) -> "Blob":
        if len(self.anchors) != len(self.names):
            raise ValueError("one name per blob vertex")
        if len(set(self.names)) != len(self.names):
            raise ValueError("blob names repeat")
        if len(self.anchors) < 2:
            raise ValueError("a blob needs at least two vertices")
        return self

    @property
    def size(self) -> int:
        return len(self.anchors)


class Tangle(BaseModel):
    """Core plabic graph with blobs in its faces"""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., description="Outer boundary count", ge=2)
    core: Optional[PlabicGraph] = Field(None, description="Core plabic graph, None when every blob is wired straight out")
    core_labels: Tuple[int, ...] = Field((), description="Outer label of each core boundary position")
    blobs: Tuple[Blob, ...] = Field((), description="Blobs in operad order")

    @model_validator(mode="after")
    def _structure(self) -> "Tangle":
        core_n = self.core.n if self.core is not None else 0
        if len(self.core_labels) != core_n:
            raise ValueError(f"{len(self.core_labels)} core labels for {core_n} core boundary vertices")
        if list(self.core_labels) != sorted(set(self.core_labels)):
            raise ValueError("core labels must increase")
        covered = list(self.core_labels)
        for index, blob in enumerate(self.blobs):
            for anchor in blob.anchors:
                if anchor.is_pass_through:
                    covered.append(anchor.outer)
                    continue
                core = self.core
                if core is None or anchor.vertex not in core.vertices:
                    raise ValueError(f"blob {index} anchors to unknown vertex {anchor.vertex}")
                if core.is_boundary(anchor.vertex) or core.color(anchor.vertex) != BLACK:
                    raise ValueError(f"blob {index} anchors to {anchor.vertex}, not an internal black vertex")
                if anchor.after not in core.rotation[anchor.vertex]:
                    raise ValueError(f"edge {anchor.after} is not at {anchor.vertex}")
        if sorted(covered) != list(range(1, self.n + 1)):
            raise ValueError("outer labels must be covered exactly once by the core and the wired blob vertices")
        return self

    # views ------------------------------------------------------------------

    def pass_through(self) -> List[int]:
        return sorted(set(range(1, self.n + 1)) - set(self.core_labels))

    def core_point(self, z):
        """Columns of z at the core labels, in core boundary order"""
        return z.submatrix(range(z.nrows), [j - 1 for j in self.core_labels])

    def core_position(self, label: int) -> int:
        return self.core_labels.index(label) + 1

    def diagram(self) -> PlabicGraph:
        """
        The core with blobs drawn as hub vertices and segments as edges.
        Boundary positions are outer labels; hub ``@k`` belongs to blob k.
        """
        vertices: Dict[str, Vertex] = {}
        edges: Dict[str, Tuple[str, str]] = {}
        extra: Dict[str, Dict[str, List[str]]] = {}
        rotation: Dict[str, Tuple[str, ...]] = {}
        if self.core is not None:
            for v, data in self.core.vertices.items():
                if data.is_boundary:
                    vertices[v] = Vertex(color=BLACK, boundary=self.core_labels[data.boundary - 1])
                else:
                    vertices[v] = data
            edges.update(self.core.edges)
        for k, blob in enumerate(self.blobs):
            hub = f"{HUB}{k}"
            vertices[hub] = Vertex(color=WHITE)
            segments = []
            for p, anchor in enumerate(blob.anchors):
                seg = f"{HUB}s{k}_{p}"
                segments.append(seg)
                if anchor.is_pass_through:
                    target = f"{HUB}o{anchor.outer}"
                    vertices[target] = Vertex(color=BLACK, boundary=anchor.outer)
                    rotation[target] = (seg,)
                else:
                    target = anchor.vertex
                    extra.setdefault(target, {}).setdefault(anchor.after, []).insert(0, seg)
                edges[seg] = (hub, target)
            rotation[hub] = tuple(segments)
        if self.core is not None:
            for v, rot in self.core.rotation.items():
                spliced: List[str] = []
                for e in rot:
                    spliced.append(e)
                    spliced.extend(extra.get(v, {}).get(e, ()))
                rotation[v] = tuple(spliced)
        graph = PlabicGraph(n=self.n, vertices=vertices, edges=edges, rotation=rotation)
        graph.validate()
        return graph

    def is_planar(self) -> bool:
        diagram = self.diagram()
        return diagram.num_faces() == diagram.euler_faces()

    def encode(self) -> str:
        """
        Canonical encoding of the diagram: breadth-first from boundary vertex 1
        over the rotation system with the boundary closed off. Vertex ids, edge
        ids and blob names do not enter.
        """
        diagram = self.diagram()
        rotation, ends = diagram.closed_rotation()
        start = diagram.boundary_vertex(1)
        index = {start: 0}
        entry = {start: rotation[start][0]}
        order = [start]
        tokens = []
        cursor = 0
        while cursor < len(order):
            v = order[cursor]
            cursor += 1
            rot = list(rotation[v])
            s = rot.index(entry[v])
            nbrs = []
            for e in rot[s:] + rot[:s]:
                a, b = ends[e]
                u = b if a == v else a
                if u not in index:
                    index[u] = len(order)
                    entry[u] = e
                    order.append(u)
                nbrs.append(str(index[u]))
            if diagram.is_boundary(v):
                kind = f"B{diagram.vertices[v].boundary}"
            elif v.startswith(HUB):
                kind = f"H{v[len(HUB):]}"
            else:
                kind = diagram.color(v)
            tokens.append(f"{kind}[{','.join(nbrs)}]")
        return ";".join(tokens)

    def same_as(self, other: "Tangle") -> bool:
        return self.n == other.n and self.encode() == other.encode()


# --------------------------------------------------------------------------
# construction
# --------------------------------------------------------------------------


def core_from_shapes(roots: Sequence[Tuple[int, Node]]) -> PlabicGraph:
    """
    Plabic forest from nested shapes. Each root pairs a leaf position with the
    node adjacent to it; children are listed clockwise after the parent, so
    leaf positions must appear in increasing order.
    """
    colors: Dict[str, str] = {}
    adjacency: Dict[str, List[str]] = {}
    boundary: Dict[str, int] = {}

    def add(node: Node, parent: str) -> str:
        if isinstance(node, int):
            leaf = f"d{node}"
            boundary[leaf] = node
            adjacency[leaf] = [parent]
            return leaf
        name, color, kids = node
        colors[name] = color
        adjacency[name] = [parent]
        adjacency[name].extend(add(kid, name) for kid in kids)
        return name

    for position, node in roots:
        leaf = f"d{position}"
        boundary[leaf] = position
        adjacency[leaf] = []
        adjacency[leaf].append(add(node, leaf))
    return PlabicGraph.from_adjacency(colors, adjacency, boundary)


def _arc_labels(core_labels: Sequence[int], n: int, arc: int, forward: bool) -> List[int]:
    """Outer labels strictly inside core arc ~arc, in the order the dart walks them"""
    start = core_labels[arc - 1]
    stop = core_labels[arc % len(core_labels)]
    span = (stop - start) % n or n
    inside = [(start + t - 1) % n + 1 for t in range(1, span)]
    return inside if forward else inside[::-1]


def _face_slots(core: PlabicGraph, core_labels: Sequence[int], n: int) -> Iterator[List[Tuple[object, Optional[str]]]]:
    """Per face, the attachable spots clockwise: (vertex id, incoming edge) or (outer label, None)"""
    _, ends = core.closed_rotation()
    for walk in core.face_darts():
        slots: List[Tuple[object, Optional[str]]] = []
        for t, (e, u) in enumerate(walk):
            if not core.is_boundary(u):
                slots.append((u, walk[t - 1][0]))
            if e.startswith("~"):
                arc = int(e[1:])
                slots.extend((j, None) for j in _arc_labels(core_labels, n, arc, forward=ends[e][0] == u))
        yield slots[::-1]


def place_blob(
    core: Optional[PlabicGraph], core_labels: Sequence[int], n: int, targets: Sequence[Union[str, int]]
) -> Tuple[Anchor, ...]:
    """
    Anchors for a blob whose vertices attach, clockwise after the star, to
    ``targets`` (core vertex ids or outer labels), choosing a face of the core
    that sees them all in that cyclic order.
    """
    if core is None:
        if not all(isinstance(t, int) for t in targets):
            raise WorkbenchError("a tangle without core can only wire blobs to the boundary")
        return tuple(Anchor(outer=t) for t in targets)
    for slots in _face_slots(core, core_labels, n):
        size = len(slots)
        for s in range(size):
            if slots[s][0] != targets[0]:
                continue
            chosen = [s]
            for target in targets[1:]:
                nxt = next(
                    (t for t in range(chosen[-1] + 1, s + size) if slots[t % size][0] == target),
                    None,
                )
                if nxt is None:
                    break
                chosen.append(nxt)
            else:
                anchors = []
                for t in chosen:
                    token, after = slots[t % size]
                    anchors.append(Anchor(outer=token) if after is None else Anchor(vertex=token, after=after))
                return tuple(anchors)
    raise WorkbenchError(f"no face of the core sees {list(targets)} in clockwise order")


def make_tangle(
    n: int,
    core: Optional[PlabicGraph],
    core_labels: Sequence[int],
    blobs: Sequence[Sequence[Union[str, int]]],
    names: Optional[Sequence[Sequence[int]]] = None,
) -> Tangle:
    """
    Build a tangle from blob target lists.

    Args:
        n: outer boundary count
        core: core plabic graph, or None
        core_labels: outer label of each core boundary position
        blobs: per blob, its targets clockwise after the star; a string is a
            core vertex, an int an outer label wired straight to the blob
        names: per blob, the labels of its vertices (default 1..size)

    Returns:
        The tangle, checked to be planar
    """
    built = []
    for index, targets in enumerate(blobs):
        anchors = place_blob(core, core_labels, n, targets)
        label_set = tuple(names[index]) if names is not None else tuple(range(1, len(anchors) + 1))
        built.append(Blob(anchors=anchors, names=label_set))
    tangle = Tangle(n=n, core=core, core_labels=tuple(core_labels), blobs=tuple(built))
    if not tangle.is_planar():
        raise WorkbenchError("blob segments cannot be drawn without crossings")
    return tangle


def identity_tangle(d: int) -> Tangle:
    """One blob wired straight to the d boundary vertices"""
    anchors = tuple(Anchor(outer=j) for j in range(1, d + 1))
    return Tangle(n=d, blobs=(Blob(anchors=anchors, names=tuple(range(1, d + 1))),))


# --------------------------------------------------------------------------
# operad structure
# --------------------------------------------------------------------------


def glue_prefix(tangle: Tangle) -> str:
    taken: Set[str] = set()
    if tangle.core is not None:
        taken = set(tangle.core.vertices) | set(tangle.core.edges)
    index = 1
    while any(x.startswith(f"g{index}.") for x in taken):
        index += 1
    return f"g{index}."


def compose(outer: Tangle, i: int, inner: Tangle) -> Tangle:
    """
    Insert ``inner`` into blob ``i`` (0-based) of ``outer``: inner boundary
    vertex q is identified with blob vertex q and the attaching segment is
    contracted. The inner blobs take the place of blob i.
    """
    if not 0 <= i < len(outer.blobs):
        raise WorkbenchError(f"blob index {i} out of range")
    blob = outer.blobs[i]
    if blob.size != inner.n:
        raise ArityMismatch(f"blob {i} has {blob.size} vertices, inserted tangle has {inner.n} boundary vertices")
    prefix = glue_prefix(outer)

    def rename(x: str) -> str:
        return prefix + x

    vertices: Dict[str, Vertex] = {}
    edges: Dict[str, Tuple[str, str]] = {}
    rotation: Dict[str, List[str]] = {}
    labels: Dict[str, int] = {}
    if outer.core is not None:
        for v, data in outer.core.vertices.items():
            vertices[v] = data
            if data.is_boundary:
                labels[v] = outer.core_labels[data.boundary - 1]
        edges.update(outer.core.edges)
        rotation.update({v: list(rot) for v, rot in outer.core.rotation.items()})
    if inner.core is not None:
        core = inner.core
        glued: Dict[str, str] = {}
        for v, data in core.vertices.items():
            if not data.is_boundary:
                vertices[rename(v)] = data
                rotation[rename(v)] = [rename(e) for e in core.rotation[v]]
                continue
            anchor = blob.anchors[inner.core_labels[data.boundary - 1] - 1]
            if anchor.is_pass_through:
                vertices[rename(v)] = data
                rotation[rename(v)] = [rename(e) for e in core.rotation[v]]
                labels[rename(v)] = anchor.outer
            else:
                glued[v] = anchor.vertex
                (leg,) = core.rotation[v]
                at = rotation[anchor.vertex]
                at.insert(at.index(anchor.after) + 1, rename(leg))
        for e, (a, b) in core.edges.items():
            edges[rename(e)] = (glued.get(a, rename(a)), glued.get(b, rename(b)))
    new_labels = tuple(sorted(labels.values()))
    new_core: Optional[PlabicGraph] = None
    if vertices:
        for v, label in labels.items():
            vertices[v] = Vertex(color=BLACK, boundary=new_labels.index(label) + 1)
        new_core = PlabicGraph(
            n=len(new_labels),
            vertices=vertices,
            edges=edges,
            rotation={v: tuple(rot) for v, rot in rotation.items()},
        )
        new_core.validate()
    moved = []
    for inner_blob in inner.blobs:
        anchors = []
        for anchor in inner_blob.anchors:
            if anchor.is_pass_through:
                anchors.append(blob.anchors[anchor.outer - 1])
            else:
                anchors.append(Anchor(vertex=rename(anchor.vertex), after=rename(anchor.after)))
        moved.append(Blob(anchors=tuple(anchors), names=inner_blob.names))
    blobs = outer.blobs[:i] + tuple(moved) + outer.blobs[i + 1:]
    logger.debug("composed at blob %d: %d blobs, core size %d", i, len(blobs), len(vertices))
    return Tangle(n=outer.n, core=new_core, core_labels=new_labels, blobs=blobs)


def permute_blobs(tangle: Tangle, sigma: Sequence[int]) -> Tangle:
    """New blob j is old blob sigma[j]"""
    if sorted(sigma) != list(range(len(tangle.blobs))):
        raise WorkbenchError(f"{list(sigma)} is not a permutation of the blob indices")
    return tangle.model_copy(update={"blobs": tuple(tangle.blobs[s] for s in sigma)})


def _fits(fillers: Sequence[Tangle], size: int) -> List[Tangle]:
    return [t for t in fillers if t.n == size]


def _induced(sigma: Sequence[int], j: int, inserted: int) -> List[int]:
    """Blob order of (T.sigma) o_j S expressed in the blob indices of T o_sigma(j) S"""
    at = sigma[j]
    order: List[int] = []
    for p, t in enumerate(sigma):
        if p == j:
            order.extend(at + q for q in range(inserted))
        else:
            order.append(t if t < at else t + inserted - 1)
    return order


def check_operad_axioms(outer: Tangle, fillers: Sequence[Tangle]) -> OperadReport:
    """
    Identity, associativity, commutativity and equivariance on the given tangles.

    Every filler whose boundary count equals a blob's size is inserted there;
    both sides of each axiom instance are compared by ``same_as``.
    """
    report = OperadReport()

    def expect(label: str, left: Tangle, right: Tangle) -> None:
        report.checks += 1
        if not left.same_as(right):
            report.failures.append(label)

    for tangle in [outer, *fillers]:
        expect("identity outside", compose(identity_tangle(tangle.n), 0, tangle), tangle)
        for i, blob in enumerate(tangle.blobs):
            expect(f"identity in blob {i}", compose(tangle, i, identity_tangle(blob.size)), tangle)

    for i, blob in enumerate(outer.blobs):
        for s in _fits(fillers, blob.size):
            for j, inner_blob in enumerate(s.blobs):
                for u in _fits(fillers, inner_blob.size):
                    expect(
                        f"associativity at blobs {i}, {j}",
                        compose(compose(outer, i, s), i + j, u),
                        compose(outer, i, compose(s, j, u)),
                    )
            count = len(outer.blobs)
            for sigma in (list(range(count))[::-1], list(range(1, count)) + [0]):
                for j in range(count):
                    if sigma[j] != i:
                        continue
                    expect(
                        f"equivariance under {sigma} at blob {j}",
                        compose(permute_blobs(outer, sigma), j, s),
                        permute_blobs(compose(outer, i, s), _induced(sigma, j, len(s.blobs))),
                    )

    for i, k in combinations(range(len(outer.blobs)), 2):
        for s in _fits(fillers, outer.blobs[i].size):
            for u in _fits(fillers, outer.blobs[k].size):
                expect(
                    f"commutativity at blobs {i}, {k}",
                    compose(compose(outer, i, s), k + len(s.blobs) - 1, u),
                    compose(compose(outer, k, u), i, s),
                )
    logger.info("operad axioms: %d checks, %d failures", report.checks, len(report.failures))
    return report


# --------------------------------------------------------------------------
# brushings
# --------------------------------------------------------------------------


class BlobBrushing(BaseModel):
    """Acyclic reverse perfect orientation and disjoint paths for one blob"""

    model_config = ConfigDict(frozen=True)

    orientation: Optional[Orientation] = Field(None, description="Acyclic reverse perfect orientation of the core")
    paths: Dict[int, Tuple[str, ...]] = Field(default_factory=dict, description="Blob position to path edges, boundary first")
    starts: Dict[int, int] = Field(default_factory=dict, description="Blob position to the outer label its path leaves from")


class Brushing(BaseModel):
    """Per-blob path data and a sign per attached core vertex"""

    model_config = ConfigDict(frozen=True)

    blobs: Tuple[BlobBrushing, ...] = Field(..., description="One entry per blob")
    signs: Dict[str, int] = Field(default_factory=dict, description="Sign per attached core vertex, +1 when absent")

    def sign(self, vertex: str) -> int:
        return self.signs.get(vertex, 1)


def _flow_network(core: PlabicGraph, orientation: Orientation, targets: Sequence[str]) -> nx.DiGraph:
    """Unit vertex capacities by splitting v into (v, 'in') -> (v, 'out')"""
    net = nx.DiGraph()
    for v in core.vertices:
        net.add_edge((v, "in"), (v, "out"), capacity=1)
    for e, head in orientation.heads.items():
        net.add_edge((core.other_end(e, head), "out"), (head, "in"), capacity=1, edge=e)
    for i in orientation.sources:
        net.add_edge("source", (core.boundary_vertex(i), "in"), capacity=1)
    for t in targets:
        net.add_edge((t, "out"), "sink", capacity=1)
    return net


def disjoint_paths(
    core: PlabicGraph, orientation: Orientation, targets: Sequence[str]
) -> Tuple[Optional[Dict[str, Tuple[str, ...]]], frozenset]:
    """
    Vertex-disjoint directed paths from boundary sources to every target.

    Returns:
        (target -> path edges, empty set) on success, or (None, cut) where cut
        is a minimum vertex cut separating the sources from the targets
    """
    net = _flow_network(core, orientation, targets)
    value, flow = nx.maximum_flow(net, "source", "sink")
    if value < len(targets):
        _, (reachable, _) = nx.minimum_cut(net, "source", "sink")
        cut = frozenset(v for v in core.vertices if (v, "in") in reachable and (v, "out") not in reachable)
        return None, cut
    wanted = set(targets)
    paths: Dict[str, Tuple[str, ...]] = {}
    for i in sorted(orientation.sources):
        cur = core.boundary_vertex(i)
        if not flow["source"].get((cur, "in")):
            continue
        walked: List[str] = []
        while not (cur in wanted and flow[(cur, "out")].get("sink")):
            step = next(
                nxt for nxt, amount in flow[(cur, "out")].items() if amount and nxt != "sink"
            )
            flow[(cur, "out")][step] = 0
            walked.append(net.edges[(cur, "out"), step]["edge"])
            cur = step[0]
        paths[cur] = tuple(walked)
    return paths, frozenset()


def _tree_path(core: PlabicGraph, start: str, target: str) -> Tuple[str, ...]:
    vertices = nx.shortest_path(core.to_networkx(), start, target)
    return tuple(core.edge_between(a, b) for a, b in zip(vertices, vertices[1:]))


def brush_blob(
    core: PlabicGraph,
    targets: Sequence[str],
    starts: Optional[Mapping[str, int]] = None,
    cap: int = 10_000,
) -> Tuple[Orientation, Dict[str, Tuple[str, ...]]]:
    """
    Find an acyclic reverse perfect orientation of the core with vertex-disjoint
    paths from the boundary to ``targets``.

    Args:
        core: core plabic graph
        targets: internal black vertices the blob attaches to
        starts: optional target -> core boundary position fixing where each
            path begins; paths are then the tree paths and must be disjoint
        cap: number of acyclic orientations to try

    Returns:
        (orientation, target -> path edges)

    Raises:
        NoBrushing: no orientation within reach admits the paths; carries a
            minimum vertex cut when the flow bound is the obstruction
        CapExceeded: the cap was hit before the search finished
    """
    fixed: Optional[Dict[str, Tuple[str, ...]]] = None
    if starts is not None:
        fixed = {t: _tree_path(core, core.boundary_vertex(starts[t]), t) for t in targets}
        seen: Set[str] = set()
        for t, path in fixed.items():
            on_path = {v for e in path for v in core.edges[e]} or {t}
            if seen & on_path:
                raise NoBrushing(f"prescribed paths meet at {sorted(seen & on_path)}")
            seen |= on_path
    first_cut: Optional[frozenset] = None
    tried = 0
    for orientation in iter_orientations(core, "reverse"):
        if not orientation.is_acyclic(core):
            continue
        tried += 1
        if tried > cap:
            raise CapExceeded(f"brushing search passed {cap} acyclic orientations")
        if fixed is not None:
            if all(
                orientation.head(e) == v
                for t, path in fixed.items()
                for e, v in zip(path, _path_heads(core, path, t))
            ):
                return orientation, fixed
            continue
        paths, cut = disjoint_paths(core, orientation, targets)
        if paths is not None:
            logger.debug("brushing found after %d orientations", tried)
            return orientation, paths
        if first_cut is None:
            first_cut = cut
    if tried == 0:
        raise NoBrushing("the core has no acyclic reverse perfect orientation")
    raise NoBrushing(f"no brushing among {tried} acyclic orientations", cut=first_cut)


def _path_heads(core: PlabicGraph, path: Sequence[str], target: str) -> List[str]:
    """Head of each path edge when the path is walked towards ``target``"""
    heads = [target]
    for e in reversed(path[1:]):
        heads.append(core.other_end(e, heads[-1]))
    return heads[::-1]


def find_brushing(tangle: Tangle, by_names: bool = False, cap: int = 10_000) -> Brushing:
    """
    A brushing of every blob.

    Args:
        tangle: tangle with a core
        by_names: run the path of the blob vertex named j from outer boundary j
        cap: acyclic orientations tried per blob

    Returns:
        The brushing with all signs +1
    """
    found = []
    for index, blob in enumerate(tangle.blobs):
        targets = [a.vertex for a in blob.anchors if not a.is_pass_through]
        starts = {p: a.outer for p, a in enumerate(blob.anchors) if a.is_pass_through}
        if not targets:
            found.append(BlobBrushing(starts=starts))
            continue
        prescribed = None
        if by_names:
            prescribed = {
                a.vertex: tangle.core_position(name)
                for a, name in zip(blob.anchors, blob.names)
                if not a.is_pass_through
            }
        try:
            orientation, paths = brush_blob(tangle.core, targets, prescribed, cap)
        except NoBrushing as exc:
            raise NoBrushing(f"blob {index}: {exc}", cut=exc.cut) from exc
        by_position = {}
        for p, anchor in enumerate(blob.anchors):
            if anchor.is_pass_through:
                continue
            path = paths[anchor.vertex]
            by_position[p] = path
            first = path[0] if path else None
            tail = orientation.tail(tangle.core, first) if first else anchor.vertex
            starts[p] = tangle.core_labels[tangle.core.vertices[tail].boundary - 1]
        found.append(BlobBrushing(orientation=orientation, paths=by_position, starts=starts))
    return Brushing(blobs=tuple(found))


def compose_brushed(outer: Tangle, i: int, inner: Tangle, cap: int = 10_000) -> Tuple[Tangle, Brushing]:
    """Compose and brush the glued tangle"""
    glued = compose(outer, i, inner)
    return glued, find_brushing(glued, cap=cap)


# --------------------------------------------------------------------------
# shipped tangles
# --------------------------------------------------------------------------


def _star_node(prefix: str, first: int, m: int) -> Node:
    """Caterpillar w-b-...-w on leaves first..first+m; blacks {prefix}2, {prefix}4, ..."""
    node: Node = (f"{prefix}{2 * m + 1}", WHITE, [first + m])
    for t in range(m, 0, -1):
        black = (f"{prefix}{2 * t}", BLACK, [node])
        legs: List[Node] = [first + t - 1] if t >= 2 else []
        node = (f"{prefix}{2 * t - 1}", WHITE, legs + [black])
    return node


def star_tangle(m: int, n: int) -> Tangle:
    """Unary star: blob names 1, 3, 4, ..., n"""
    if n < m + 1 or m < 2:
        raise WorkbenchError("star tangle needs m >= 2 and n >= m + 1")
    core = core_from_shapes([(1, _star_node("i", 1, m))])
    targets: List[Union[str, int]] = ["i2"] + [f"i{2 * j - 2}" for j in range(3, m + 2)]
    targets += list(range(m + 2, n + 1))
    names = [1] + list(range(3, n + 1))
    return make_tangle(n, core, range(1, m + 2), [targets], [names])


def bcfw_tangle(n: int, a: int) -> Tangle:
    """
    Binary BCFW tangle for m = 4 with b = a+1, c = n-2, d = n-1; blobs on
    {1..a, b, n} and {b..c, d, n}.
    """
    b, c, d = a + 1, n - 2, n - 1
    if a < 2 or b >= c:
        raise WorkbenchError("BCFW tangle needs 2 <= a and a + 1 < n - 2")
    node: Node = (
        "wa", WHITE, [("ya", BLACK, [("Wab", WHITE, [
            ("yb", BLACK, [("wb", WHITE, [2])]),
            ("X1", BLACK, [("Wc", WHITE, [
                ("X2", BLACK, [("Wcd", WHITE, [("yc", BLACK, [("wc", WHITE, [3])]), 4])]),
                ("yn", BLACK, [("wn", WHITE, [5])]),
            ])]),
        ])])],
    )
    core = core_from_shapes([(1, node)])
    left: List[Union[str, int]] = list(range(1, a)) + ["ya", "X1", "yn"]
    right: List[Union[str, int]] = ["yb"] + list(range(b + 1, c)) + ["yc", "X2", "X1"]
    names = [list(range(1, a + 1)) + [b, n], list(range(b, c + 1)) + [d, n]]
    return make_tangle(n, core, (a, b, c, d, n), [left, right], names)


def spurion_tangle(n: int) -> Tangle:
    """Spurion tangle for m = 4: blob names 1, 2, 7, 8, 9, ..., n"""
    if n < 9:
        raise WorkbenchError("spurion tangle needs n >= 9")
    tail: Node = ("i7", BLACK, [("i8", WHITE, [8, ("i9", BLACK, [("u9", WHITE, [9])])])])
    middle: Node = ("i5", BLACK, [("i0", WHITE, [4, 5, 6]), ("i6", WHITE, [7, tail])])
    node: Node = ("u1", WHITE, [("i1", BLACK, [("i2", WHITE, [2, ("i3", BLACK, [("i4", WHITE, [3, middle])])])])])
    core = core_from_shapes([(1, node)])
    targets: List[Union[str, int]] = ["i1", "i3", "i5", "i7", "i9"] + list(range(10, n + 1))
    names = [1, 2, 7, 8, 9] + list(range(10, n + 1))
    return make_tangle(n, core, range(1, 10), [targets], [names])


def chain_tangle(n: int) -> Tangle:
    """Chain tree (3,3,1,3,3) for m = 4: blob names 1, 2, 3, 11, 12, 13, ..., n"""
    if n < 13:
        raise WorkbenchError("chain tangle needs n >= 13")
    right: Node = ("jB", BLACK, [
        ("i89A", WHITE, [8, 9, 10]),
        ("iB", WHITE, [11, ("jC", BLACK, [("iC", WHITE, [12, ("jD", BLACK, [("uD", WHITE, [13])])])])]),
    ])
    middle: Node = ("j3", BLACK, [("i456", WHITE, [4, 5, 6]), ("i7", WHITE, [7, right])])
    node: Node = ("u1", WHITE, [("j1", BLACK, [("i2", WHITE, [2, ("j2", BLACK, [("i3", WHITE, [3, middle])])])])])
    core = core_from_shapes([(1, node)])
    targets: List[Union[str, int]] = ["j1", "j2", "j3", "jB", "jC", "jD"] + list(range(14, n + 1))
    names = [1, 2, 3, 11, 12, 13] + list(range(14, n + 1))
    return make_tangle(n, core, range(1, 14), [targets], [names])


def forest_tangle(n: int, a: int) -> Tangle:
    """
    Forest of two m = 3 stars on {1,2,3,4} and {a,b,c,d}, a >= 5 consecutive;
    blob names are [n] without 3 and c.
    """
    b, c, d = a + 1, a + 2, a + 3
    if a < 5 or d > n:
        raise WorkbenchError("forest tangle needs 5 <= a and a + 3 <= n")
    core = core_from_shapes([(1, _star_node("p", 1, 3)), (5, _star_node("q", 5, 3))])
    targets: List[Union[str, int]] = ["p2", "p4", "p6"] + list(range(5, a)) + ["q2", "q4", "q6"]
    targets += list(range(d + 1, n + 1))
    names = [1, 2, 4] + list(range(5, a)) + [a, b, d] + list(range(d + 1, n + 1))
    return make_tangle(n, core, (1, 2, 3, 4, a, b, c, d), [targets], [names])
