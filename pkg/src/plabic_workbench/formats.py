"""
Text formats: ``plabic v1`` (graphs, with optional configuration and tangle
lines), ``seed v1``, and plain rational matrices for points.

    plabic v1
    n 3
    vertex d1 b bd:1
    vertex v1 w int
    edge e1 d1 v1
    rot v1: e1 e2 e3
    vec d1 1 0 -2/3
    coef e1 5
    outer 5
    labels 1 2 4
    blob 1 star 3 5
    attach 1 1 v2 e4
    attach 1 2 bd:5

Writers emit lines in a fixed order so reading and writing again reproduces the
text exactly.
"""

import logging
from typing import Dict, Iterable, List, Optional, Tuple

from .cluster import Seed
from .errors import FormatError, WorkbenchError
from .gca import parse, to_string
from .plabic import PlabicGraph, Vertex
from .scalar import Mat, format_scalar, parse_rat
from .tangle import Anchor, Blob, Tangle
from .vrc import VRC

logger = logging.getLogger(__name__)

PLABIC_HEADER = "plabic v1"
SEED_HEADER = "seed v1"


def _lines(text: str) -> Iterable[Tuple[int, List[str]]]:
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line:
            yield line_no, line.split()


def _expect_header(text: str, header: str) -> None:
    first = next(_lines(text), None)
    if first is None or " ".join(first[1]) != header:
        raise FormatError(first[0] if first else 1, f"expected header '{header}'")


def _int(line_no: int, token: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise FormatError(line_no, f"expected an integer, got {token!r}") from None


def _rat(line_no: int, token: str):
    try:
        return parse_rat(token)
    except (ValueError, ZeroDivisionError):
        raise FormatError(line_no, f"expected a rational p/q, got {token!r}") from None


# --------------------------------------------------------------------------
# plabic v1
# --------------------------------------------------------------------------


def write_plabic(graph: Optional[PlabicGraph], vrc: Optional[VRC] = None, tangle: Optional[Tangle] = None) -> str:
    """
    Serialize a graph, optionally with a configuration on it or the tangle it is the core of.

    A tangle without a core is written with ``n 0`` and no graph lines.
    """
    out = [PLABIC_HEADER]
    if graph is None:
        out.append("n 0")
    else:
        out.append(f"n {graph.n}")
        if graph.reduced:
            out.append("reduced")
        for v, data in graph.vertices.items():
            where = f"bd:{data.boundary}" if data.is_boundary else "int"
            out.append(f"vertex {v} {data.color} {where}")
        for e, (a, b) in graph.edges.items():
            out.append(f"edge {e} {a} {b}")
        for v, edges in graph.rotation.items():
            out.append(f"rot {v}: {' '.join(edges)}")
    if vrc is not None:
        for v, vector in vrc.vectors.items():
            out.append(f"vec {v} {' '.join(format_scalar(x) for x in vector)}")
        for e, c in vrc.coeffs.items():
            out.append(f"coef {e} {format_scalar(c)}")
    if tangle is not None:
        out.append(f"outer {tangle.n}")
        out.append("labels " + " ".join(str(x) for x in tangle.core_labels))
        for i, blob in enumerate(tangle.blobs, start=1):
            out.append(f"blob {i} star {' '.join(str(x) for x in blob.names)}")
            for u, anchor in enumerate(blob.anchors, start=1):
                if anchor.is_pass_through:
                    out.append(f"attach {i} {u} bd:{anchor.outer}")
                else:
                    out.append(f"attach {i} {u} {anchor.vertex} {anchor.after}")
    return "\n".join(out) + "\n"


class PlabicDocument:
    """Everything one ``plabic v1`` block can carry"""

    def __init__(self, graph: Optional[PlabicGraph], vrc: Optional[VRC], tangle: Optional[Tangle]):
        self.graph = graph
        self.vrc = vrc
        self.tangle = tangle


def read_plabic(text: str) -> PlabicDocument:
    """
    Parse one ``plabic v1`` block.

    Raises:
        FormatError: unknown keyword, bad token, or a structure the models reject
    """
    _expect_header(text, PLABIC_HEADER)
    n: Optional[int] = None
    reduced = False
    vertices: Dict[str, Vertex] = {}
    edges: Dict[str, Tuple[str, str]] = {}
    rotation: Dict[str, Tuple[str, ...]] = {}
    vectors: Dict[str, Tuple] = {}
    coeffs: Dict[str, object] = {}
    outer: Optional[int] = None
    labels: Tuple[int, ...] = ()
    blobs: Dict[int, Tuple[int, ...]] = {}
    anchors: Dict[int, Dict[int, Anchor]] = {}
    last = 1

    for line_no, tokens in list(_lines(text))[1:]:
        last = line_no
        key, args = tokens[0], tokens[1:]
        if key == "n" and len(args) == 1:
            n = _int(line_no, args[0])
        elif key == "reduced" and not args:
            reduced = True
        elif key == "vertex" and len(args) == 3:
            v, color, where = args
            if color not in ("b", "w"):
                raise FormatError(line_no, f"colour must be b or w, got {color!r}")
            if where == "int":
                vertices[v] = Vertex(color=color)
            elif where.startswith("bd:"):
                vertices[v] = Vertex(color=color, boundary=_int(line_no, where[3:]))
            else:
                raise FormatError(line_no, f"position must be int or bd:<pos>, got {where!r}")
        elif key == "edge" and len(args) == 3:
            edges[args[0]] = (args[1], args[2])
        elif key == "rot" and args and args[0].endswith(":"):
            rotation[args[0][:-1]] = tuple(args[1:])
        elif key == "vec" and len(args) >= 2:
            vectors[args[0]] = tuple(_rat(line_no, x) for x in args[1:])
        elif key == "coef" and len(args) == 2:
            coeffs[args[0]] = _rat(line_no, args[1])
        elif key == "outer" and len(args) == 1:
            outer = _int(line_no, args[0])
        elif key == "labels":
            labels = tuple(_int(line_no, x) for x in args)
        elif key == "blob" and len(args) >= 2 and args[1] == "star":
            blobs[_int(line_no, args[0])] = tuple(_int(line_no, x) for x in args[2:])
        elif key == "attach" and len(args) in (3, 4):
            i, u = _int(line_no, args[0]), _int(line_no, args[1])
            if len(args) == 3 and args[2].startswith("bd:"):
                anchor = Anchor(outer=_int(line_no, args[2][3:]))
            elif len(args) == 4:
                anchor = Anchor(vertex=args[2], after=args[3])
            else:
                raise FormatError(line_no, "attach needs a vertex and an edge, or bd:<label>")
            anchors.setdefault(i, {})[u] = anchor
        else:
            raise FormatError(line_no, f"cannot read {' '.join(tokens)!r}")

    if n is None:
        raise FormatError(last, "missing 'n' line")
    try:
        graph = None
        if n:
            graph = PlabicGraph(n=n, vertices=vertices, edges=edges, rotation=rotation, reduced=reduced)
            graph.validate()
        vrc = None
        if vectors or coeffs:
            if graph is None:
                raise FormatError(last, "vec/coef lines need a graph")
            m = len(next(iter(vectors.values()))) if vectors else 1
            vrc = VRC(graph=graph, m=m, vectors=vectors, coeffs=coeffs)
        tangle = None
        if outer is not None:
            built = []
            for i in sorted(blobs):
                slots = anchors.get(i, {})
                built.append(Blob(anchors=tuple(slots[u] for u in sorted(slots)), names=blobs[i]))
            tangle = Tangle(n=outer, core=graph, core_labels=labels, blobs=tuple(built))
    except FormatError:
        raise
    except (KeyError, ValueError, WorkbenchError) as exc:
        raise FormatError(last, str(exc)) from exc
    logger.debug("read plabic block: n = %d, %d vertices", n, len(vertices))
    return PlabicDocument(graph, vrc, tangle)


def read_plabic_stream(text: str) -> List[PlabicDocument]:
    """Split a stream of concatenated blocks at their headers and read each one"""
    blocks: List[List[str]] = []
    for raw in text.splitlines():
        if raw.strip() == PLABIC_HEADER:
            blocks.append([])
        if not blocks:
            if raw.strip():
                raise FormatError(1, f"expected header '{PLABIC_HEADER}'")
            continue
        blocks[-1].append(raw)
    return [read_plabic("\n".join(block)) for block in blocks]


# --------------------------------------------------------------------------
# seed v1
# --------------------------------------------------------------------------


def write_seed(seed: Seed) -> str:
    out = [SEED_HEADER]
    for v, expr in seed.variables.items():
        kind = "frozen" if v in seed.frozen else "mutable"
        out.append(f"var {v} {kind} {to_string(expr)}")
    for (i, j), count in seed.arrows.items():
        out.append(f"arrow {i} {j} {count}")
    return "\n".join(out) + "\n"


def read_seed(text: str) -> Seed:
    """
    Parse a ``seed v1`` block.

    Raises:
        FormatError: bad line, unparsable bracket expression, or an invalid quiver
    """
    _expect_header(text, SEED_HEADER)
    variables = {}
    frozen = set()
    arrows: Dict[Tuple[str, str], int] = {}
    last = 1
    for line_no, tokens in list(_lines(text))[1:]:
        last = line_no
        key, args = tokens[0], tokens[1:]
        if key == "var" and len(args) >= 3:
            v, kind = args[0], args[1]
            if kind not in ("mutable", "frozen"):
                raise FormatError(line_no, f"expected mutable or frozen, got {kind!r}")
            try:
                variables[v] = parse(" ".join(args[2:]))
            except ValueError as exc:
                raise FormatError(line_no, f"bad bracket expression: {exc}") from exc
            if kind == "frozen":
                frozen.add(v)
        elif key == "arrow" and len(args) == 3:
            count = _int(line_no, args[2])
            if count <= 0:
                raise FormatError(line_no, "arrow multiplicity must be positive")
            arrows[(args[0], args[1])] = arrows.get((args[0], args[1]), 0) + count
        else:
            raise FormatError(line_no, f"cannot read {' '.join(tokens)!r}")
    try:
        return Seed(variables=variables, frozen=frozenset(frozen), arrows=arrows)
    except (ValueError, WorkbenchError) as exc:
        raise FormatError(last, str(exc)) from exc


# --------------------------------------------------------------------------
# points
# --------------------------------------------------------------------------


def write_matrix(z: Mat) -> str:
    """One row per line, entries as p/q"""
    return "".join(" ".join(format_scalar(x) for x in row) + "\n" for row in z.rows())


def read_matrix(text: str) -> Mat:
    """
    Whitespace-separated rationals, one matrix row per line.

    Raises:
        FormatError: a bad entry or rows of unequal length
    """
    rows = []
    for line_no, tokens in _lines(text):
        row = [_rat(line_no, token) for token in tokens]
        if rows and len(row) != len(rows[0]):
            raise FormatError(line_no, f"row has {len(row)} entries, expected {len(rows[0])}")
        rows.append(row)
    if not rows:
        raise FormatError(1, "empty matrix")
    return Mat(rows, ncols=len(rows[0]))
