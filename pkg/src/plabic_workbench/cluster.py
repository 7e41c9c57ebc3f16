"""
Seeds, quiver mutation, exchange ratios and the quasi-cluster checks.

Cluster variables are bracket expressions; mutation builds the exchange
quotient as a new node over the old ones, so a long schedule is a DAG that
evaluates in linear time with a shared ``Evaluator``. Equality of variables is
decided by exact evaluation at random rational points, up to a sign that must
stay constant across the points.
"""

import logging
import random
from collections import defaultdict
from itertools import combinations_with_replacement
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import EvaluationDivisionByZero, FrozenVertex, WorkbenchError
from .gca import BracketExpr, Const, Evaluator, Quotient, Sum, br, label_char, product, ratio
from .models import QuasiClusterReport
from .promotion import Promotion
from .scalar import Mat

logger = logging.getLogger(__name__)

Arrow = Tuple[str, str]


def cell(row: int, label: int) -> str:
    """Grid vertex name: row and column label, e.g. 2:8"""
    return f"{row}:{label_char(label)}"


def _add_arrows(arrows: Dict[Arrow, int], i: str, j: str, count: int) -> None:
    """Add ``count`` arrows i -> j, cancelling against j -> i"""
    back = arrows.get((j, i), 0)
    if back:
        if back > count:
            arrows[(j, i)] = back - count
            return
        del arrows[(j, i)]
        count -= back
    if count:
        arrows[(i, j)] = arrows.get((i, j), 0) + count


class Seed(BaseModel):
    """A quiver with cluster variables on its vertices and a frozen subset"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    variables: Dict[str, BracketExpr] = Field(..., description="Vertex to cluster variable, in display order")
    frozen: FrozenSet[str] = Field(frozenset(), description="Frozen vertices")
    arrows: Dict[Arrow, int] = Field(default_factory=dict, description="Net arrow counts, one direction per pair")

    @model_validator(mode="after")
    def _quiver(self) -> "Seed":
        unknown = set(self.frozen) - set(self.variables)
        if unknown:
            raise WorkbenchError(f"frozen vertices {sorted(unknown)} carry no variable")
        for (i, j), count in self.arrows.items():
            if i == j:
                raise WorkbenchError(f"loop at {i}")
            if i not in self.variables or j not in self.variables:
                raise WorkbenchError(f"arrow {i} -> {j} leaves the vertex set")
            if count <= 0:
                raise WorkbenchError(f"arrow {i} -> {j} has count {count}")
            if (j, i) in self.arrows:
                raise WorkbenchError(f"oriented 2-cycle between {i} and {j}")
        return self

    @classmethod
    def build(cls, variables: Mapping[str, BracketExpr], frozen: Iterable[str], arrows: Iterable[Arrow]) -> "Seed":
        """Seed from an arrow list; repeated arrows add up and opposite ones cancel"""
        net: Dict[Arrow, int] = {}
        for i, j in arrows:
            _add_arrows(net, i, j, 1)
        return cls(variables=dict(variables), frozen=frozenset(frozen), arrows=net)

    @property
    def vertices(self) -> List[str]:
        return list(self.variables)

    @property
    def mutable(self) -> List[str]:
        return [v for v in self.variables if v not in self.frozen]

    def b(self, i: str, j: str) -> int:
        """Signed arrow count: #(i -> j) - #(j -> i)"""
        return self.arrows.get((i, j), 0) - self.arrows.get((j, i), 0)

    def in_arrows(self, k: str) -> List[Tuple[str, int]]:
        return [(i, c) for (i, j), c in self.arrows.items() if j == k]

    def out_arrows(self, k: str) -> List[Tuple[str, int]]:
        return [(j, c) for (i, j), c in self.arrows.items() if i == k]

    def freeze(self, vertices: Iterable[str]) -> "Seed":
        return self.model_copy(update={"frozen": self.frozen | frozenset(vertices)})

    def unfreeze(self, vertices: Iterable[str]) -> "Seed":
        return self.model_copy(update={"frozen": self.frozen - frozenset(vertices)})

    def with_variables(self, updates: Mapping[str, BracketExpr]) -> "Seed":
        variables = dict(self.variables)
        variables.update(updates)
        return self.model_copy(update={"variables": variables})

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        for v in self.variables:
            graph.add_node(v, frozen=v in self.frozen)
        for (i, j), count in self.arrows.items():
            graph.add_edge(i, j, count=count)
        return graph


def _monomial(terms: Iterable[Tuple[str, int]], variables: Mapping[str, BracketExpr]) -> BracketExpr:
    factors: List[BracketExpr] = []
    for v, count in terms:
        factors.extend([variables[v]] * count)
    return product(factors)


def _require_mutable(seed: Seed, k: str) -> None:
    if k not in seed.variables:
        raise WorkbenchError(f"unknown vertex {k}")
    if k in seed.frozen:
        raise FrozenVertex(f"vertex {k} is frozen", vertex=k)


def mutate(seed: Seed, k: str) -> Seed:
    """
    Mutate at a mutable vertex.

    Arrows between two frozen vertices are left as they are; every other
    2-path i -> k -> j adds an arrow i -> j before the arrows at k reverse.

    Raises:
        FrozenVertex: k is frozen
    """
    _require_mutable(seed, k)
    incoming = seed.in_arrows(k)
    outgoing = seed.out_arrows(k)

    arrows = {pair: c for pair, c in seed.arrows.items() if k not in pair}
    for i, a in incoming:
        for j, c in outgoing:
            if i == j or (i in seed.frozen and j in seed.frozen):
                continue
            _add_arrows(arrows, i, j, a * c)
    for i, a in incoming:
        arrows[(k, i)] = a
    for j, c in outgoing:
        arrows[(j, k)] = c

    exchange = Quotient(
        Sum(((1, _monomial(incoming, seed.variables)), (1, _monomial(outgoing, seed.variables)))),
        seed.variables[k],
    )
    logger.debug("mutated at %s: %d in, %d out", k, len(incoming), len(outgoing))
    variables = dict(seed.variables)
    variables[k] = exchange
    return Seed(variables=variables, frozen=seed.frozen, arrows=arrows)


def mutate_sequence(seed: Seed, vertices: Sequence[str]) -> Seed:
    for k in vertices:
        seed = mutate(seed, k)
    return seed


def exchange_ratio(seed: Seed, k: str) -> BracketExpr:
    """
    prod x_j^#(k -> j) / prod x_j^#(j -> k)

    Raises:
        FrozenVertex: k is frozen
    """
    _require_mutable(seed, k)
    numerators: List[BracketExpr] = []
    denominators: List[BracketExpr] = []
    for j, c in seed.out_arrows(k):
        numerators.extend([seed.variables[j]] * c)
    for i, c in seed.in_arrows(k):
        denominators.extend([seed.variables[i]] * c)
    return ratio(numerators, denominators)


def rectangles_seed(m: int, labels: Sequence[int]) -> Seed:
    """
    Rectangles seed for the Grassmannian of m-planes on ``labels``.

    Rows 1..m, one column per label from position m+1 on, named by that label.
    Row r < m holds the first m-r labels followed by the r labels ending at the
    column; row m holds the m labels ending there. The extra frozen vertex T is
    the bracket of the first m labels. The last column, row m and T are frozen.
    """
    labels = list(labels)
    size = len(labels)
    if size < m or m < 1:
        raise WorkbenchError(f"need at least m = {m} labels, got {size}")

    variables: Dict[str, BracketExpr] = {"T": br(labels[:m])}
    frozen = {"T"}
    grid: Dict[Tuple[int, int], str] = {}
    for r in range(1, m + 1):
        for j in range(m + 1, size + 1):
            name = cell(r, labels[j - 1])
            grid[(r, j)] = name
            variables[name] = br(labels[: m - r] + labels[j - r : j])
            if r == m or j == size:
                frozen.add(name)

    arrows: List[Arrow] = []
    if size > m:
        arrows.append(("T", grid[(1, m + 1)]))
    for r in range(1, m):
        for j in range(m + 1, size + 1):
            if j < size:
                arrows.append((grid[(r, j)], grid[(r, j + 1)]))
                arrows.append((grid[(r, j)], grid[(r + 1, j)]))
                arrows.append((grid[(r + 1, j + 1)], grid[(r, j)]))
    return Seed.build(variables, frozen, arrows)


# --------------------------------------------------------------------------
# comparison by values
# --------------------------------------------------------------------------


def random_points(rng: random.Random, m: int, n: int, count: int, bound: int = 10_000) -> List[Mat]:
    return [Mat.random(rng, m, n, bound) for _ in range(count)]


def seed_values(seed: Seed, point) -> Dict[str, object]:
    evaluator = Evaluator(point)
    return {v: evaluator.scalar(expr) for v, expr in seed.variables.items()}


def sign_between(lhs, rhs) -> int:
    """s with lhs = s * rhs for s = +1 or -1, else 0"""
    if not rhs:
        return 0
    if lhs == rhs:
        return 1
    if lhs == -rhs:
        return -1
    return 0


def _value_key(values: Sequence) -> Tuple:
    lead = next((v for v in values if v), None)
    if lead is None:
        return tuple(values)
    flip = -1 if lead < 0 else 1
    return tuple(flip * v for v in values)


class VariableMatch(BaseModel):
    """Which source vertex holds each target variable"""

    matched: Dict[str, str] = Field(default_factory=dict, description="Target vertex to source vertex")
    missing: List[str] = Field(default_factory=list, description="Target vertices with no partner")
    chosen: Dict[str, int] = Field(default_factory=dict, description="Target vertex to the alternative that matched")


def match_variables(
    source: Seed,
    target: Seed,
    points: Sequence[Mat],
    alternatives: Optional[Mapping[str, Sequence[BracketExpr]]] = None,
) -> VariableMatch:
    """
    Pair every target vertex with the source vertex holding the same variable up to sign.

    A target vertex listed in ``alternatives`` may match through any of the
    given expressions; the index of the first one that does is recorded.
    """
    alternatives = alternatives or {}
    source_values = [seed_values(source, z) for z in points]
    evaluators = [Evaluator(z) for z in points]
    index: Dict[Tuple, str] = {}
    for v in source.variables:
        index.setdefault(_value_key([vals[v] for vals in source_values]), v)

    result = VariableMatch()
    for t, expr in target.variables.items():
        candidates = list(alternatives.get(t, [expr]))
        for position, candidate in enumerate(candidates):
            key = _value_key([ev.scalar(candidate) for ev in evaluators])
            if key in index:
                result.matched[t] = index[key]
                if t in alternatives:
                    result.chosen[t] = position
                break
        else:
            result.missing.append(t)
    return result


def compare_arrows(source: Seed, target: Seed, matched: Mapping[str, str], scope: Iterable[str]) -> Tuple[int, int, List[str]]:
    """
    Compare signed arrow counts on every pair with an endpoint in ``scope``.

    Returns:
        (orientation, pairs compared, disagreements); orientation is +1 when all
        counts agree, -1 when all agree after reversing the source, else 0
    """
    scope = [t for t in scope if t in matched]
    pairs = set()
    for t in scope:
        for u in target.variables:
            if u != t and u in matched:
                pairs.add(tuple(sorted((t, u))))
    forward: List[str] = []
    backward: List[str] = []
    for t, u in sorted(pairs):
        want = target.b(t, u)
        got = source.b(matched[t], matched[u])
        if got != want:
            forward.append(f"b({t},{u}) = {want} in target, {got} in source")
        if -got != want:
            backward.append(f"b({t},{u}) = {want} in target, {-got} in reversed source")
    if not forward:
        return 1, len(pairs), []
    if not backward:
        return -1, len(pairs), []
    return 0, len(pairs), forward


def quiver_isomorphic(first: Seed, second: Seed) -> bool:
    """Isomorphism of quivers respecting multiplicities and the frozen flag"""
    return nx.is_isomorphic(
        first.to_networkx(),
        second.to_networkx(),
        node_match=lambda a, b: a["frozen"] == b["frozen"],
        edge_match=lambda a, b: a["count"] == b["count"],
    )


# --------------------------------------------------------------------------
# quasi-cluster homomorphisms
# --------------------------------------------------------------------------


class QuasiCase(BaseModel):
    """A promotion with source and target seeds and the pairing of their mutable grids"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = Field(..., description="Family name for reports")
    promotion: Promotion = Field(..., description="Formula promotion Psi")
    source: Seed = Field(..., description="Seed Sigma on the blob's labels")
    target: Seed = Field(..., description="Seed Sigma-bar on the outer labels")
    pairing: Dict[str, str] = Field(..., description="Mutable source vertex to target vertex")
    factors: Dict[str, BracketExpr] = Field(
        default_factory=dict, description="Frozen factor per source vertex; missing entries mean 1"
    )
    notes: List[str] = Field(default_factory=list, description="Conventions resolved while building the case")

    def factor(self, vertex: str) -> BracketExpr:
        return self.factors.get(vertex, Const(1))


def draw_points(case: QuasiCase, trials: int, rng: random.Random, bound: int = 10_000, retry_cap: int = 32) -> List[Mat]:
    """Random points at which every promoted variable of the case evaluates"""
    m, n = case.promotion.m, case.promotion.n
    points: List[Mat] = []
    redraws = 0
    while len(points) < trials:
        z = Mat.random(rng, m, n, bound)
        try:
            images = case.promotion.point_map(z)
            seed_values(case.source, images)
            seed_values(case.target, z)
        except EvaluationDivisionByZero:
            redraws += 1
            if redraws > retry_cap:
                raise
            logger.info("redrawing a non-generic point (%d so far)", redraws)
            continue
        points.append(z)
    return points


def _constant_sign(signs: Sequence[int]) -> int:
    if signs and signs[0] and all(s == signs[0] for s in signs):
        return signs[0]
    return 0


def verify_quasi_cluster(case: QuasiCase, points: Sequence[Mat]) -> QuasiClusterReport:
    """
    Check both conditions of a quasi-cluster homomorphism at the given points.

    For every paired mutable source vertex i:
    (1) Psi(x_i) = s_i * F(i) * xbar_i, and
    (2) Psi(yhat(x_i)) = t_i * yhat(xbar_i),
    with signs s_i, t_i in {+1, -1} that do not depend on the point.
    Failures are collected in the report, never raised.
    """
    variable_signs: Dict[str, List[int]] = defaultdict(list)
    ratio_signs: Dict[str, List[int]] = defaultdict(list)
    violations: List[str] = []
    source_ratios = {v: exchange_ratio(case.source, v) for v in case.pairing}
    target_ratios = {v: exchange_ratio(case.target, w) for v, w in case.pairing.items()}

    for index, z in enumerate(points):
        promoted = Evaluator(case.promotion.point_map(z))
        outer = Evaluator(z)
        for v, w in case.pairing.items():
            try:
                lhs = promoted.scalar(case.source.variables[v])
                rhs = outer.scalar(case.factor(v)) * outer.scalar(case.target.variables[w])
                variable_signs[v].append(sign_between(lhs, rhs))
                ratio_signs[v].append(sign_between(promoted.scalar(source_ratios[v]), outer.scalar(target_ratios[v])))
            except EvaluationDivisionByZero as exc:
                violations.append(f"point {index}: {v} does not evaluate ({exc})")

    report_vars: Dict[str, int] = {}
    report_ratios: Dict[str, int] = {}
    for v, w in case.pairing.items():
        report_vars[v] = _constant_sign(variable_signs[v])
        report_ratios[v] = _constant_sign(ratio_signs[v])
        if not report_vars[v]:
            violations.append(f"{v}: Psi(x) is not +-F * x({w})")
        if not report_ratios[v]:
            violations.append(f"{v}: Psi(yhat) is not +-yhat({w})")
    logger.info("%s: %d vertices at %d points, %d violations", case.name, len(case.pairing), len(points), len(violations))
    return QuasiClusterReport(
        family=case.name,
        trials=len(points),
        vertices_checked=len(case.pairing),
        variable_signs=report_vars,
        ratio_signs=report_ratios,
        violations=violations,
        notes=list(case.notes),
    )


class FrozenFactor(BaseModel):
    """A signed Laurent monomial found by search"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    expr: BracketExpr = Field(..., description="The monomial as a bracket expression in outer labels")
    text: str = Field(..., description="Readable form, e.g. F3 / F7")
    sign: int = Field(..., description="Psi(x) = sign * expr * xbar")


def _factor_pool(case: QuasiCase) -> List[Tuple[str, BracketExpr]]:
    pool = [(w, case.target.variables[w]) for w in case.target.variables if w in case.target.frozen]
    for v in case.source.variables:
        if v in case.source.frozen:
            pool.append((f"Psi({v})", case.promotion.pullback(case.source.variables[v])))
    return pool


def discover_frozen_factor(case: QuasiCase, vertex: str, points: Sequence[Mat], bound: int = 2) -> Optional[FrozenFactor]:
    """
    Search Psi(x_v) / xbar_v among Laurent monomials of total degree <= ``bound``.

    The pool is the frozen variables of the target together with the images of
    the source's frozen variables. The first point filters candidates; the rest
    confirm them. Returns None when nothing fits.
    """
    if len(points) < 2:
        raise WorkbenchError("factor search needs at least two points")
    w = case.pairing[vertex]
    targets = []
    evaluators = []
    for z in points:
        promoted = Evaluator(case.promotion.point_map(z))
        outer = Evaluator(z)
        targets.append(promoted.scalar(case.source.variables[vertex]) / outer.scalar(case.target.variables[w]))
        evaluators.append(outer)

    pool: List[Tuple[str, BracketExpr]] = []
    values: List[List] = []
    seen = set()
    for name, expr in _factor_pool(case):
        column = [ev.scalar(expr) for ev in evaluators]
        key = _value_key(column)
        if not all(column) or key in seen:
            continue
        seen.add(key)
        pool.append((name, expr))
        values.append(column)

    size = len(pool)
    for degree in range(bound + 1):
        for combo in combinations_with_replacement(range(2 * size), degree):
            ups = [c for c in combo if c < size]
            downs = [c - size for c in combo if c >= size]
            if set(ups) & set(downs):
                continue

            def at(p: int):
                value = 1
                for c in ups:
                    value = value * values[c][p]
                for c in downs:
                    value = value / values[c][p]
                return value

            sign = sign_between(targets[0], at(0))
            if not sign or any(sign_between(targets[p], at(p)) != sign for p in range(1, len(points))):
                continue
            text = " * ".join(pool[c][0] for c in ups) or "1"
            if downs:
                text += " / " + " / ".join(pool[c][0] for c in downs)
            logger.debug("factor for %s: %s (sign %+d)", vertex, text, sign)
            return FrozenFactor(
                expr=ratio([pool[c][1] for c in ups], [pool[c][1] for c in downs]),
                text=text,
                sign=sign,
            )
    return None


def similar_pair(case: QuasiCase, vertex: str, points: Sequence[Mat], bound: int = 4) -> QuasiClusterReport:
    """
    Mutate both seeds at a paired vertex and check the mutated pair again.

    The factor of the new variable is searched among frozen monomials; if none
    is found the report carries a violation.
    """
    mutated = case.model_copy(
        update={
            "source": mutate(case.source, vertex),
            "target": mutate(case.target, case.pairing[vertex]),
        }
    )
    found = discover_frozen_factor(mutated, vertex, points, bound)
    if found is None:
        return QuasiClusterReport(
            family=case.name,
            trials=len(points),
            vertices_checked=0,
            violations=[f"{vertex}: no frozen monomial relates the mutated variables"],
        )
    factors = dict(case.factors)
    factors[vertex] = found.expr
    report = verify_quasi_cluster(mutated.model_copy(update={"factors": factors}), points)
    report.notes.append(f"after mutating {vertex}: factor {found.text}")
    return report
