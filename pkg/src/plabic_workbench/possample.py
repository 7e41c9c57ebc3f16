"""
Totally positive sample points and the 4-mass box positivity certificates.

Positivity of a function on the positive Grassmannian is certified here by
exact evaluation at sampled points, never symbolically: a passing report says
that every listed inequality held at every sampled point.
"""

import logging
import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from .cluster import rectangles_seed
from .errors import CertificateFailure, NotGeneric, WorkbenchError
from .families import four_mass_box, quadratic_coefficients
from .gca import Evaluator, label_char, parse
from .models import CertificateCheck, CertificateReport
from .plabic import path_matrix, top_cell_network
from .scalar import Mat, format_rat, format_scalar, quad_sign

logger = logging.getLogger(__name__)

MODES = ("moment_curve", "top_cell_weights")

EXHAUSTIVE_LIMIT = 14


class PositivePoint(BaseModel):
    """A point of the totally positive Grassmannian and where it came from"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: Mat = Field(..., description="m x n matrix with positive maximal minors")
    mode: str = Field(..., description="moment_curve or top_cell_weights")
    parameters: Dict[str, str] = Field(default_factory=dict, description="Curve parameters or edge weights, printed")


def _positive_rational(rng: random.Random, bound: int) -> Fraction:
    return Fraction(rng.randint(1, bound), rng.randint(1, bound))


def is_totally_positive(z: Mat) -> bool:
    """Every maximal minor, columns in increasing order, is positive"""
    return all(value > 0 for _, value in z.pluckers())


def moment_curve_point(m: int, ts: Sequence[Fraction]) -> Mat:
    """Columns (1, t, ..., t^(m-1)); positive when the t's increase"""
    return Mat.from_columns([[t**p for p in range(m)] for t in ts], nrows=m)


def _moment_curve(m: int, n: int, rng: random.Random, bound: int) -> Tuple[Mat, Dict[str, str]]:
    ts = set()
    while len(ts) < n:
        ts.add(_positive_rational(rng, bound))
    ordered = sorted(ts)
    return moment_curve_point(m, ordered), {f"t{i + 1}": format_rat(t) for i, t in enumerate(ordered)}


def _top_cell(m: int, n: int, rng: random.Random, bound: int) -> Tuple[Mat, Dict[str, str]]:
    graph, orientation = top_cell_network(m, n)
    weights = {e: _positive_rational(rng, bound) for e in graph.edges}
    z = path_matrix(graph, orientation, weights)
    minors = [value for _, value in z.pluckers()]
    if minors and all(value < 0 for value in minors):
        # one row flip fixes a global sign
        z = Mat([[-x for x in z.row(0)]] + [list(z.row(i)) for i in range(1, z.nrows)], ncols=z.ncols)
    return z, {e: format_rat(w) for e, w in sorted(weights.items())}


def sample_positive(m: int, n: int, mode: str = "moment_curve", rng: Optional[random.Random] = None, bound: int = 100) -> PositivePoint:
    """
    Draw a totally positive m x n point.

    Args:
        m: rows
        n: columns, at least m
        mode: moment_curve (Vandermonde columns at increasing positive t) or
            top_cell_weights (path matrix of the top-cell network under positive weights)
        rng: random source
        bound: numerators and denominators are drawn from 1..bound

    Returns:
        The point with its provenance

    Raises:
        NotGeneric: the point failed the exhaustive positivity check (n <= 14)
    """
    if n < m:
        raise WorkbenchError(f"need n >= m, got m = {m}, n = {n}")
    if mode not in MODES:
        raise WorkbenchError(f"unknown sampling mode {mode!r}; known: {', '.join(MODES)}")
    rng = rng or random.Random(0)
    if mode == "moment_curve":
        z, parameters = _moment_curve(m, n, rng, bound)
    else:
        z, parameters = _top_cell(m, n, rng, bound)
    if n <= EXHAUSTIVE_LIMIT and not is_totally_positive(z):
        raise NotGeneric(f"{mode} point is not totally positive")
    return PositivePoint(matrix=z, mode=mode, parameters=parameters)


def sample_many(m: int, n: int, count: int, seed: int, mode: str = "moment_curve", threads: int = 1) -> List[PositivePoint]:
    """``count`` points, point i drawn from its own stream seeded by (seed, i)"""

    def draw(i: int) -> PositivePoint:
        return sample_positive(m, n, mode, random.Random(f"{seed}:{i}"))

    if threads <= 1:
        return [draw(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(draw, range(count)))


# --------------------------------------------------------------------------
# 4-mass box certificates
# --------------------------------------------------------------------------


def _check(checks: List[CertificateCheck], statement: str, value, wanted: int) -> None:
    checks.append(CertificateCheck(statement=statement, value=format_scalar(value), passed=quad_sign(value) == wanted))


def certify_point(z: Mat) -> List[CertificateCheck]:
    """
    Every 4-mass box inequality at one totally positive 4 x n point, n >= 9.

    Covers the discriminant, 2A<127i> - B<128i>, <12X i> on both branches,
    the signs of <156X> and <789*21*56X> per branch, and the promoted values
    of every variable of the rectangles seed on the blob's labels.
    """
    if z.nrows != 4 or z.ncols < 9:
        raise WorkbenchError("the 4-mass box certificates need a 4 x n point with n >= 9")
    checks: List[CertificateCheck] = []
    outer = Evaluator(z)
    a, b, c = quadratic_coefficients(z)
    _check(checks, "Delta = B^2 - 4AC > 0", b * b - 4 * a * c, 1)
    for i in range(9, z.ncols + 1):
        s = label_char(i)
        value = 2 * a * outer.scalar(parse(f"<127{s}>")) - b * outer.scalar(parse(f"<128{s}>"))
        _check(checks, f"2A<127{s}> - B<128{s}> > 0", value, 1)

    if quad_sign(b * b - 4 * a * c) <= 0:
        return checks
    for branch in (1, -1):
        box = four_mass_box(z, branch)
        tag = "+" if branch > 0 else "-"
        with_x = Evaluator(box.with_x(z))
        for i in range(9, z.ncols + 1):
            _check(checks, f"<12X{tag}{label_char(i)}> > 0", with_x.scalar(parse(f"<127{label_char(i)}>")), 1)
        _check(checks, f"sign <156X{tag}> = {branch:+d}", with_x.scalar(parse("<1567>")), branch)
        _check(checks, f"sign <789*21*56X{tag}> = {branch:+d}", with_x.scalar(parse("<789*21*567>")), branch)

        promoted = Evaluator(box.images)
        seed = rectangles_seed(4, box.domain)
        for vertex, expr in seed.variables.items():
            _check(checks, f"Psi{tag}({expr}) > 0 [{vertex}]", promoted.scalar(expr), 1)
    return checks


def certify_4mb(points: Sequence[Mat], strict: bool = False) -> CertificateReport:
    """
    Run the 4-mass box certificates over sampled positive points.

    Args:
        points: totally positive 4 x n points, all with the same n
        strict: raise on the first failed inequality instead of reporting it

    Returns:
        Report with the failed inequalities and the points where they failed

    Raises:
        CertificateFailure: only with ``strict``
    """
    if not points:
        raise WorkbenchError("certification needs at least one point")
    n = points[0].ncols
    report = CertificateReport(n=n, samples=len(points))
    for index, z in enumerate(points):
        if z.ncols != n:
            raise WorkbenchError(f"point {index} has {z.ncols} columns, expected {n}")
        checks = certify_point(z)
        report.checks += len(checks)
        failed = [check for check in checks if not check.passed]
        if failed and strict:
            raise CertificateFailure(failed[0].statement, point=z.to_lists())
        if failed:
            report.failures.extend(failed)
            report.counterexamples.append([[format_scalar(x) for x in row] for row in z.rows()])
        logger.debug("point %d: %d checks, %d failed", index, len(checks), len(failed))
    logger.info("4-mass box: %d points, %d checks, %d failures", len(points), report.checks, len(report.failures))
    return report
