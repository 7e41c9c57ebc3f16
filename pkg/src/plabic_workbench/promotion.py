"""
Promotion maps.

A brushed tangle turns a boundary point z into one point per blob: the column
of blob vertex p is sigma_b * v_b / wt(P) for the anchor vertex b and the
brushing path P, where v_b comes from the core's vector-relation configuration
and wt(P) multiplies r_e over black-to-white steps and divides by -r_e over
white-to-black steps. Pass-through blob vertices copy the boundary column.

Named promotions carry explicit bracket formulas per blob instead; both kinds
share the ``Promotion`` model so the operad checks can compare them.
"""

import logging
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field

from .errors import Degenerate, WorkbenchError
from .gca import BracketExpr, Col, Evaluator, labels_of, substitute
from .models import CompositionReport
from .plabic import BLACK, PlabicGraph
from .scalar import Mat
from .tangle import Brushing, Tangle, compose, find_brushing, glue_prefix
from .vrc import VRC, build_tree_vrc, proportion

logger = logging.getLogger(__name__)


def path_weight(core: PlabicGraph, path: Sequence[str], target: str, coeffs: Mapping[str, Any]):
    """
    Weight of a brushing path walked from the boundary to ``target``.

    Args:
        core: core graph carrying the path
        path: edges, boundary first
        target: anchor vertex at the end of the path
        coeffs: edge coefficients of the configuration

    Returns:
        prod r_e over black-to-white steps divided by prod (-r_e) over white-to-black steps
    """
    weight: Any = Fraction(1)
    at = target
    for e in reversed(path):
        prev = core.other_end(e, at)
        if core.color(prev) == BLACK:
            weight = weight * coeffs[e]
        else:
            weight = weight / -coeffs[e]
        at = prev
    return weight


def blob_columns(tangle: Tangle, brushing: Brushing, vrc: Optional[VRC], z: Mat) -> List[Mat]:
    """
    One m x d_i matrix per blob from a configuration on the core.

    Raises:
        Degenerate: a blob matrix has rank below m
    """
    m = z.nrows
    points = []
    for index, (blob, brush) in enumerate(zip(tangle.blobs, brushing.blobs)):
        columns = []
        for p, anchor in enumerate(blob.anchors):
            if anchor.is_pass_through:
                columns.append(z.column(anchor.outer - 1))
                continue
            weight = path_weight(tangle.core, brush.paths[p], anchor.vertex, vrc.coeffs)
            factor = brushing.sign(anchor.vertex) / weight
            columns.append(tuple(factor * x for x in vrc.vectors[anchor.vertex]))
        point = Mat.from_columns(columns, nrows=m)
        if point.rank() < m:
            raise Degenerate(f"blob {index} matrix has rank {point.rank()} < {m}")
        points.append(point)
    return points


def tree_promotion(tangle: Tangle, brushing: Brushing, z: Mat, verify_generic: bool = True) -> List[Mat]:
    """Promotion through a tree core: build the configuration, then read the blob columns"""
    if z.ncols != tangle.n:
        raise WorkbenchError(f"boundary has {z.ncols} columns, tangle has {tangle.n} boundary vertices")
    vrc = None
    if tangle.core is not None:
        vrc = build_tree_vrc(tangle.core, tangle.core_point(z), verify_generic)
    return blob_columns(tangle, brushing, vrc, z)


class Promotion(BaseModel):
    """A promotion map, by formulas per blob or through a brushed tangle"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = Field(..., description="Short name, e.g. star or bcfw")
    m: int = Field(..., description="Ambient dimension", ge=1)
    n: int = Field(..., description="Outer boundary count")
    domains: Tuple[Tuple[int, ...], ...] = Field(..., description="Column labels of each blob point")
    substitutions: Tuple[Dict[int, BracketExpr], ...] = Field((), description="Per blob, label to formula; unlisted labels map to themselves")
    tangle: Optional[Tangle] = Field(None, description="Tangle the promotion comes from")
    brushing: Optional[Brushing] = Field(None, description="Brushing of the tangle")

    @property
    def has_formulas(self) -> bool:
        return bool(self.substitutions)

    def column(self, label: int, blob: int = 0) -> BracketExpr:
        """Formula for the image of column ``label`` of blob ``blob``"""
        if label not in self.domains[blob]:
            raise WorkbenchError(f"label {label} is not in the domain of blob {blob}")
        if not self.has_formulas:
            raise WorkbenchError(f"promotion {self.name} has no formula table")
        return self.substitutions[blob].get(label, Col(label))

    def pullback(self, expr: BracketExpr, blob: int = 0) -> BracketExpr:
        """Pull a bracket expression on the blob's labels back to the outer labels"""
        outside = labels_of(expr) - set(self.domains[blob])
        if outside:
            raise WorkbenchError(f"labels {sorted(outside)} are not in the domain of blob {blob}")
        if not self.has_formulas:
            raise WorkbenchError(f"promotion {self.name} has no formula table")
        return substitute(expr, self.substitutions[blob])

    def point_map(self, z: Mat, blob: int = 0) -> Dict[int, Tuple]:
        """Domain label to its promoted vector"""
        if self.has_formulas:
            table = self.substitutions[blob]
            evaluator = Evaluator(z)
            return {
                label: evaluator.vector(table[label]) if label in table else z.column(label - 1)
                for label in self.domains[blob]
            }
        point = self.blob_points(z)[blob]
        return {label: point.column(p) for p, label in enumerate(self.domains[blob])}

    def blob_point(self, z: Mat, blob: int = 0) -> Mat:
        """The promoted point of one blob, columns in domain order"""
        if not self.has_formulas:
            return self.blob_points(z)[blob]
        images = self.point_map(z, blob)
        return Mat.from_columns([images[label] for label in self.domains[blob]], nrows=self.m)

    def blob_points(self, z: Mat) -> List[Mat]:
        if self.has_formulas:
            return [self.blob_point(z, i) for i in range(len(self.domains))]
        if self.tangle is None:
            raise WorkbenchError(f"promotion {self.name} has neither formulas nor a tangle")
        brushing = self.brushing if self.brushing is not None else find_brushing(self.tangle)
        return tree_promotion(self.tangle, brushing, z)


def brushed_promotion(tangle: Tangle, brushing: Optional[Brushing] = None, m: int = 4, name: str = "tree") -> Promotion:
    """Promotion read off a tree tangle; the brushing is searched when not given"""
    brushing = brushing if brushing is not None else find_brushing(tangle)
    return Promotion(
        name=name,
        m=m,
        n=tangle.n,
        domains=tuple(blob.names for blob in tangle.blobs),
        tangle=tangle,
        brushing=brushing,
    )


# --------------------------------------------------------------------------
# composition check
# --------------------------------------------------------------------------


def glue_vrcs(outer: Tangle, outer_brushing: Brushing, outer_vrc: Optional[VRC], i: int, inner: Tangle, inner_vrc: Optional[VRC], m: int) -> VRC:
    """
    Configuration on the core of ``compose(outer, i, inner)``. An inner leg
    glued to anchor b gets coefficient r_e * sigma_b / wt(P_b) so that the
    white relation at its other end still holds with v_b in place of the
    promoted column.
    """
    glued = compose(outer, i, inner)
    prefix = glue_prefix(outer)
    blob = outer.blobs[i]
    brush = outer_brushing.blobs[i]
    vectors: Dict[str, Tuple] = dict(outer_vrc.vectors) if outer_vrc is not None else {}
    coeffs: Dict[str, Any] = dict(outer_vrc.coeffs) if outer_vrc is not None else {}
    if inner.core is not None:
        core = inner.core
        legs: Dict[str, Any] = {}
        for v, data in core.vertices.items():
            if data.is_boundary:
                q = inner.core_labels[data.boundary - 1]
                anchor = blob.anchors[q - 1]
                if not anchor.is_pass_through:
                    weight = path_weight(outer.core, brush.paths[q - 1], anchor.vertex, outer_vrc.coeffs)
                    (leg,) = core.rotation[v]
                    legs[leg] = outer_brushing.sign(anchor.vertex) / weight
                    continue
            if data.color == BLACK:
                vectors[prefix + v] = inner_vrc.vectors[v]
        for e, c in inner_vrc.coeffs.items():
            coeffs[prefix + e] = c * legs[e] if e in legs else c
    return VRC(graph=glued.core, m=m, vectors=vectors, coeffs=coeffs)


def _composite_columns(glued: Tangle, vrc: VRC, z: Mat, blob: int) -> List[Tuple]:
    return [
        z.column(a.outer - 1) if a.is_pass_through else vrc.vectors[a.vertex]
        for a in glued.blobs[blob].anchors
    ]


def verify_composition(outer: Promotion, i: int, inner: Promotion, z: Mat) -> CompositionReport:
    """
    Check that promoting through ``outer`` and then ``inner`` at blob ``i``
    agrees with the glued tangle.

    The outer configuration is built on the outer core at z, the inner one
    on the inner core at the promoted point of blob i; gluing them gives a
    configuration on the composite core whose anchor vectors must be
    proportional to the two-step columns. When both promotions carry
    formulas the two-step formula columns are compared as well, and when the
    glued core is still a tree it is promoted directly.
    """
    if outer.tangle is None or inner.tangle is None:
        raise WorkbenchError("composition check needs promotions built from tangles")
    m = outer.m
    mismatches: List[str] = []
    outer_t, inner_t = outer.tangle, inner.tangle
    outer_brushing = outer.brushing if outer.brushing is not None else find_brushing(outer_t, by_names=outer.has_formulas)
    outer_vrc = build_tree_vrc(outer_t.core, outer_t.core_point(z)) if outer_t.core is not None else None
    outer_points = blob_columns(outer_t, outer_brushing, outer_vrc, z)
    middle = outer_points[i]
    inner_brushing = inner.brushing if inner.brushing is not None else find_brushing(inner_t, by_names=inner.has_formulas)
    inner_vrc = build_tree_vrc(inner_t.core, inner_t.core_point(middle)) if inner_t.core is not None else None
    sequential = blob_columns(inner_t, inner_brushing, inner_vrc, middle)

    glued = compose(outer_t, i, inner_t)
    glued_vrc = glue_vrcs(outer_t, outer_brushing, outer_vrc, i, inner_t, inner_vrc, m)
    problems = glued_vrc.violations()
    mismatches.extend(f"glued configuration: {p}" for p in problems)
    if glued_vrc.boundary() != glued.core_point(z):
        mismatches.append("glued configuration has the wrong boundary")

    checked = 0
    formula_checked = 0
    two_step: List[Optional[Mat]] = [None] * len(inner_t.blobs)
    if outer.has_formulas and inner.has_formulas:
        formula_middle = outer.blob_point(z, i)
        two_step = [inner.blob_point(formula_middle, k) for k in range(len(inner_t.blobs))]
    for k in range(len(inner_t.blobs)):
        composite = _composite_columns(glued, glued_vrc, z, i + k)
        for p, column in enumerate(composite):
            checked += 1
            if not proportion(sequential[k].column(p), column):
                mismatches.append(f"inner blob {k} column {p + 1}: two-step column is not proportional")
            if two_step[k] is not None:
                formula_checked += 1
                if not proportion(two_step[k].column(p), column):
                    mismatches.append(f"inner blob {k} column {p + 1}: formula column is not proportional")

    direct = False
    if glued.core is not None and nx.is_tree(glued.core.to_networkx()):
        direct_points = tree_promotion(glued, find_brushing(glued), z)
        direct = True
        for k in range(len(inner_t.blobs)):
            composite = _composite_columns(glued, glued_vrc, z, i + k)
            for p, column in enumerate(composite):
                if not proportion(direct_points[i + k].column(p), column):
                    mismatches.append(f"inner blob {k} column {p + 1}: direct promotion is not proportional")

    report = CompositionReport(
        passed=not mismatches,
        glued_valid=not problems,
        columns_checked=checked,
        formula_columns_checked=formula_checked,
        direct_checked=direct,
        mismatches=mismatches,
    )
    logger.info("composition at blob %d: %s (%d columns)", i, "ok" if report.passed else "FAILED", checked)
    return report
