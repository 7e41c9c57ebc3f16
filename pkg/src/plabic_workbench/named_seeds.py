"""
Transcribed target seeds, the quasi-cluster cases built on them, and the
explicit mutation schedules that connect rectangles seeds to those targets.
"""

import logging
import random
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .cluster import (
    QuasiCase,
    Seed,
    cell,
    compare_arrows,
    match_variables,
    mutate,
    random_points,
    rectangles_seed,
    sign_between,
)
from .errors import EvaluationDivisionByZero, StepMismatch, WorkbenchError
from .families import (
    CHAIN_CHAIN,
    SPURION_CHAIN,
    chain_promotion,
    erased_chain,
    forest_promotion,
    spurion_promotion,
    star_promotion,
)
from .gca import BracketExpr, Evaluator, Sum, br, label_char, parse, product, ratio, to_string
from .models import MutationReport, MutationStep
from .scalar import Mat

logger = logging.getLogger(__name__)

Arrow = Tuple[str, str]


def _name(labels: Iterable[int]) -> str:
    return "<" + "".join(label_char(x) for x in labels) + ">"


def _bracket_vertex(labels: Sequence[int]) -> Tuple[str, BracketExpr]:
    return _name(labels), br(labels)


def _standard_grid(rows: int, columns: Sequence[int]) -> List[Arrow]:
    """Rectangles-pattern arrows among grid cells rows 1..rows, last column excluded"""
    arrows: List[Arrow] = []
    for r in range(1, rows + 1):
        for left, right in zip(columns, columns[1:]):
            arrows.append((cell(r, left), cell(r, right)))
            arrows.append((cell(r, left), cell(r + 1, left)))
            arrows.append((cell(r + 1, right), cell(r, left)))
    return arrows


def _grid_variable(r: int, c: int) -> BracketExpr:
    """Standard m = 4 grid variable: <123c>, <12(c-1)c>, <1(c-2)(c-1)c>"""
    return br(list(range(1, 5 - r)) + list(range(c - r + 1, c + 1)))


# --------------------------------------------------------------------------
# star
# --------------------------------------------------------------------------


def star_target(m: int, n: int) -> Seed:
    """Rectangles seed on [n] with the first grid column frozen"""
    seed = rectangles_seed(m, range(1, n + 1))
    return seed.freeze(cell(r, m + 1) for r in range(1, m + 1))


def star_case(m: int, n: int) -> QuasiCase:
    """
    Star promotion against the rectangles seeds.

    Row r < m of the source picks up <1 3..m+1> / <[m+1] without m+1-r>;
    the second-to-last row's factor is 1.
    """
    if n < m + 3:
        raise WorkbenchError(f"star case needs n >= m + 3, got m = {m}, n = {n}")
    source = rectangles_seed(m, [1] + list(range(3, n + 1)))
    target = star_target(m, n)
    top = list(range(1, m + 2))
    factors: Dict[str, BracketExpr] = {}
    for v in source.mutable:
        row = int(v.split(":")[0])
        numerator = br([1] + list(range(3, m + 2)))
        denominator = br(x for x in top if x != m + 1 - row)
        factors[v] = ratio([numerator], [denominator])
    return QuasiCase(
        name="star",
        promotion=star_promotion(m, n),
        source=source,
        target=target,
        pairing={v: v for v in source.mutable},
        factors=factors,
    )


# --------------------------------------------------------------------------
# spurion
# --------------------------------------------------------------------------


def _spurion_f(i: int) -> BracketExpr:
    return erased_chain(SPURION_CHAIN, i)


def spurion_target(n: int, freeze_dashed: bool = True) -> Seed:
    """
    The target seed of the spurion promotion on [n], n >= 10.

    Rows 1..3 of the grid over columns 9..n carry the standard variables; row 4
    holds <3789> at column 9 and consecutive brackets after it. The other
    vertices are <1237>, the erased chains F1..F9, the consecutive brackets
    <1234>..<6789> and <1236>. With ``freeze_dashed`` off, the twelve dashed
    vertices become mutable.
    """
    if n < 10:
        raise WorkbenchError("spurion target needs n >= 10")
    columns = list(range(9, n + 1))
    variables: Dict[str, BracketExpr] = {}
    name, expr = _bracket_vertex([1, 2, 3, 7])
    variables[name] = expr
    for i in range(1, 10):
        variables[f"F{i}"] = _spurion_f(i)
    solid = [list(range(s, s + 4)) for s in range(1, 7)]
    for labels in solid:
        name, expr = _bracket_vertex(labels)
        variables[name] = expr
    variables["<1236>"] = br([1, 2, 3, 6])
    for c in columns:
        for r in range(1, 4):
            variables[cell(r, c)] = _grid_variable(r, c)
        variables[cell(4, c)] = br([3, 7, 8, 9]) if c == 9 else br(range(c - 3, c + 1))

    dashed = {"<1237>", "<1236>", cell(4, 9)} | {f"F{i}" for i in range(1, 10)}
    frozen = {_name(labels) for labels in solid}
    frozen |= {cell(r, n) for r in range(1, 5)}
    frozen |= {cell(4, c) for c in columns[1:]}
    if freeze_dashed:
        frozen |= dashed

    def g(r: int) -> str:
        return cell(r, 9)

    arrows = _standard_grid(3, columns)
    arrows += [("<1237>", g(1))]
    cycle = ["F8", "F7", "F3", "F2", "F1", "F6", "F5", "F4", "F9", "F8"]
    arrows += list(zip(cycle, cycle[1:]))
    arrows += [
        (g(1), "F8"), ("F7", g(1)), (g(2), "F7"), ("F3", g(2)), (g(3), "F3"), ("F2", g(3)),
        (g(4), "F2"), ("<3456>", g(4)), ("F1", "<3456>"), ("<2345>", "F1"), ("F6", "<2345>"),
        ("<1234>", "F6"), ("F5", "<1234>"), ("<1236>", "F5"), ("<6789>", "<1236>"),
        ("<1234>", "<1236>"), ("F4", "<6789>"), ("<5678>", "F4"), ("F9", "<5678>"),
        ("<4567>", "F9"), ("<1237>", "<4567>"), ("F8", "<1237>"),
    ]
    return Seed.build(variables, frozen, arrows)


def spurion_case(n: int) -> QuasiCase:
    source = rectangles_seed(4, [1, 2, 7, 8] + list(range(9, n + 1)))
    target = spurion_target(n)
    shift = ratio([_spurion_f(3)], [_spurion_f(7)])
    return QuasiCase(
        name="spurion",
        promotion=spurion_promotion(n),
        source=source,
        target=target,
        pairing={v: v for v in source.mutable},
        factors={v: shift for v in source.mutable if v.startswith("1:")},
    )


# --------------------------------------------------------------------------
# chain
# --------------------------------------------------------------------------

X_DISPLAY_SIGNS: Dict[int, int] = {1: -1, 2: -1, 3: -1, 4: -1}


def chain_f(i: int) -> BracketExpr:
    return erased_chain(CHAIN_CHAIN, i)


def chain_x(i: int, sign: int) -> BracketExpr:
    """
    X1 = <123B>F_B + s <1237>F_7
    X2 = <127B>F_7 + s <123B>F_3
    X3 = <137B>F_3 + s <127B>F_2
    X4 = <237B>F_2 + s <137B>F_1
    """
    f = chain_f
    pairs = {
        1: ((br([1, 2, 3, 11]), f(11)), (br([1, 2, 3, 7]), f(7))),
        2: ((br([1, 2, 7, 11]), f(7)), (br([1, 2, 3, 11]), f(3))),
        3: ((br([1, 3, 7, 11]), f(3)), (br([1, 2, 7, 11]), f(2))),
        4: ((br([2, 3, 7, 11]), f(2)), (br([1, 3, 7, 11]), f(1))),
    }
    first, second = pairs[i]
    return Sum(((1, product(first)), (sign, product(second))))


def chain_target(n: int, x_signs: Optional[Mapping[int, int]] = None, freeze_dashed: bool = True) -> Seed:
    """
    The target seed of the chain promotion on [n], n >= 14.

    Column C of the grid holds X1..X4, (4, D) holds <7BCD>, later row-4 cells
    hold consecutive brackets. ``x_signs`` chooses the relative sign inside
    each X; missing entries take the displayed minus sign.
    """
    if n < 14:
        raise WorkbenchError("chain target needs n >= 14")
    signs = dict(X_DISPLAY_SIGNS)
    signs.update(x_signs or {})
    C, D = 12, 13
    columns = list(range(C, n + 1))

    variables: Dict[str, BracketExpr] = {}
    name, expr = _bracket_vertex([1, 2, 3, 7])
    variables[name] = expr
    for i in range(1, 14):
        variables[f"F{label_char(i)}"] = chain_f(i)
    dashed_extra = {
        "<1236>": br([1, 2, 3, 6]),
        "<8BCD>": br([8, 11, 12, 13]),
        "<123*456*78>": parse("<123*456*78>"),
        "<123*456*7B>": parse("<123*456*7B>"),
        "<123*56*789>": parse("<123*56*789>"),
    }
    variables.update(dashed_extra)
    solid = [list(range(s, s + 4)) for s in range(1, 10)] + [[10, 11, 12, 13]]
    for labels in solid:
        name, expr = _bracket_vertex(labels)
        variables[name] = expr
    for c in columns:
        for r in range(1, 5):
            if c == C:
                variables[cell(r, c)] = chain_x(r, signs[r])
            elif r < 4:
                variables[cell(r, c)] = _grid_variable(r, c)
            elif c == D:
                variables[cell(r, c)] = br([7, 11, 12, 13])
            else:
                variables[cell(r, c)] = br(range(c - 3, c + 1))

    dashed = {"<1237>", cell(4, C), cell(4, D)} | set(dashed_extra)
    dashed |= {f"F{label_char(i)}" for i in range(1, 14)}
    frozen = {_name(labels) for labels in solid}
    frozen |= {cell(4, c) for c in columns[2:]}
    frozen |= {cell(r, n) for r in range(1, 5)}
    if freeze_dashed:
        frozen |= dashed

    def x(r: int) -> str:
        return cell(r, C)

    arrows = _standard_grid(3, columns)
    arrows += [
        ("<1237>", x(1)), (x(1), "FB"), ("F7", x(1)), (cell(1, D), "FC"), ("FC", x(1)),
        (x(2), "F7"), ("F3", x(2)), (x(3), "F3"), ("F2", x(3)),
    ]
    return Seed.build(variables, frozen, arrows)


def _chain_sources() -> Dict[int, Tuple[BracketExpr, BracketExpr]]:
    """X index to (source variable, frozen factor) for Psi(source) = +-factor * X"""
    f = chain_f
    return {
        1: (br([1, 2, 3, 12]), ratio([], [f(12)])),
        2: (br([1, 2, 11, 12]), ratio([], [f(12)])),
        3: (br([1, 3, 11, 12]), ratio([f(7)], [f(3), f(12)])),
        4: (br([2, 3, 11, 12]), ratio([f(7)], [f(2), f(12)])),
    }


def resolve_chain_signs(n: int, points: Sequence[Mat]) -> Tuple[Dict[int, int], List[str]]:
    """
    Decide the relative sign inside each X from the promotion itself.

    For each X the variant for which Psi(source) / (factor * X) is a constant
    +-1 over the points wins. Unresolved entries keep the displayed sign.

    Returns:
        (signs, notes) with one note per X
    """
    promotion = chain_promotion(n)
    signs: Dict[int, int] = {}
    notes: List[str] = []
    for i, (source, factor) in _chain_sources().items():
        pulled = promotion.pullback(source)
        variants = {}
        for sign in (-1, 1):
            x = chain_x(i, sign)
            found = []
            for z in points:
                ev = Evaluator(z)
                try:
                    found.append(sign_between(ev.scalar(pulled), ev.scalar(factor) * ev.scalar(x)))
                except EvaluationDivisionByZero:
                    continue
            if found and found[0] and all(s == found[0] for s in found):
                variants[sign] = found[0]
        if len(variants) == 1:
            (signs[i],) = variants
            notes.append(f"X{i}: relative sign {signs[i]:+d} (displayed {X_DISPLAY_SIGNS[i]:+d})")
        else:
            signs[i] = X_DISPLAY_SIGNS[i]
            notes.append(f"X{i}: unresolved, kept displayed sign {X_DISPLAY_SIGNS[i]:+d}")
    logger.info("chain X signs: %s", signs)
    return signs, notes


def chain_case(n: int, points: Optional[Sequence[Mat]] = None, x_signs: Optional[Mapping[int, int]] = None) -> QuasiCase:
    notes: List[str] = []
    if x_signs is None:
        if points is None:
            points = random_points(random.Random(0), 4, n, 3)
        x_signs, notes = resolve_chain_signs(n, points)
    source = rectangles_seed(4, [1, 2, 3, 11, 12, 13] + list(range(14, n + 1)))
    target = chain_target(n, x_signs)
    sources = _chain_sources()
    factors = {cell(r, 12): sources[r][1] for r in (1, 2, 3)}
    return QuasiCase(
        name="chain",
        promotion=chain_promotion(n),
        source=source,
        target=target,
        pairing={v: v for v in source.mutable},
        factors=factors,
        notes=notes,
    )


# --------------------------------------------------------------------------
# forest
# --------------------------------------------------------------------------


def _forest_labels(n: int, a: int) -> Tuple[int, int, int, int]:
    b, c, d = a + 1, a + 2, a + 3
    if a < 5 or d > n - 1:
        raise WorkbenchError(f"forest seeds need 5 <= a and a + 4 <= n, got a = {a}, n = {n}")
    return b, c, d, d + 1


def forest_closed_forms(a: int) -> List[Tuple[str, str]]:
    """(vertex, closed form) for the three mutations at <1bc>, <12b>, <12c>"""
    b, c, d = a + 1, a + 2, a + 3
    s = label_char
    return [
        (cell(2, c), f"<12*{s(a)}{s(b)}*{s(c)}{s(d)}>"),
        (cell(1, b), f"<{s(a)}{s(c)}{s(d)}>"),
        (cell(1, c), f"<{s(a)}{s(b)}{s(d)}>"),
    ]


def forest_figure(n: int, a: int) -> Seed:
    """
    The mutated m = 3 rectangles seed as displayed, with the rectangles frozen set.

    Variables at 2:c, 1:b, 1:c are replaced by the closed forms; arrows away
    from the seven cells around them follow the rectangles pattern.
    """
    b, c, d, e = _forest_labels(n, a)
    base = rectangles_seed(3, range(1, n + 1))
    variables = dict(base.variables)
    for vertex, text in forest_closed_forms(a):
        variables[vertex] = parse(text)

    around = {cell(1, b), cell(1, c), cell(1, d), cell(2, c), cell(2, d), cell(3, c), cell(3, d)}
    arrows: List[Arrow] = []
    for (i, j), count in base.arrows.items():
        if i not in around and j not in around:
            arrows.extend([(i, j)] * count)
    p = cell
    arrows += [
        (p(1, a), p(2, c)), (p(2, c), p(2, b)),
        (p(2, c), p(1, d)), (p(1, d), p(1, e)), (p(2, b), p(2, d)), (p(2, d), p(2, e)),
        (p(2, e), p(1, d)), (p(1, d), p(2, d)), (p(2, d), p(2, c)), (p(1, d), p(1, c)),
        (p(1, c), p(2, c)), (p(2, c), p(1, b)), (p(1, b), p(1, a)), (p(3, e), p(2, d)),
        (p(1, b), p(3, d)), (p(3, c), p(1, c)),
    ]
    return Seed.build(variables, base.frozen, arrows)


def forest_target(n: int, a: int) -> Seed:
    """The forest figure with <124>, <134>, <acd>, <abd> frozen as well"""
    b, c, _, _ = _forest_labels(n, a)
    return forest_figure(n, a).freeze([cell(1, 4), cell(2, 4), cell(1, b), cell(1, c)])


def forest_case(n: int, a: int = 5) -> QuasiCase:
    b, c, d, _ = _forest_labels(n, a)
    source = rectangles_seed(3, [x for x in range(1, n + 1) if x not in (3, c)])
    target = forest_target(n, a)
    acd = br([a, c, d])
    pairing = {v: v for v in source.mutable}
    pairing[cell(1, b)] = cell(2, c)
    return QuasiCase(
        name="forest",
        promotion=forest_promotion(n, a),
        source=source,
        target=target,
        pairing=pairing,
        factors={
            cell(1, b): ratio([], [acd]),
            cell(2, d): ratio([br([a, b, d])], [acd]),
        },
    )


QUASI_CASES: Dict[str, Callable[..., QuasiCase]] = {
    "star": star_case,
    "spurion": spurion_case,
    "chain": chain_case,
    "forest": forest_case,
}


def quasi_case(name: str, **params) -> QuasiCase:
    """
    Build a named quasi-cluster case.

    Args:
        name: star (m, n), spurion (n), chain (n), or forest (n, a)
        params: the family's size parameters
    """
    try:
        builder = QUASI_CASES[name]
    except KeyError:
        raise WorkbenchError(f"unknown quasi-cluster family {name!r}; known: {', '.join(QUASI_CASES)}") from None
    return builder(**params)


NAMED_SEEDS: Dict[str, Callable[..., Seed]] = {
    "rectangles": lambda m, n: rectangles_seed(m, range(1, n + 1)),
    "star": star_target,
    "spurion": spurion_target,
    "chain": chain_target,
    "forest": forest_target,
}


def named_seed(name: str, **params) -> Seed:
    try:
        builder = NAMED_SEEDS[name]
    except KeyError:
        raise WorkbenchError(f"unknown seed {name!r}; known: {', '.join(NAMED_SEEDS)}") from None
    return builder(**params)


# --------------------------------------------------------------------------
# mutation schedules
# --------------------------------------------------------------------------

SPURION11: List[Tuple[str, str]] = [
    ("3:8", "<12*567*789>"),
    ("3:7", "<12*456*789>"),
    ("2:7", "<123*56*789>"),
    ("2:6", "<123*45*789>"),
    ("2:5", "<13*456*789>"),
    ("3:6", "<3789>"),
    ("3:5", "<23*456*789>"),
    ("3:8", "<123*456*78>"),
    ("2:8", "<123*456*89>"),
    ("1:8", "<123*456*79>"),
    ("1:5", "<123*46*789>"),
]

# row, column, and how many times that cell was mutated before
CHAIN50 = (
    "3C0 3B0 3A0 390 380 370 360 2C0 2B0 2A0 290 280 270 260 391 381 3A1 392 281 291 "
    "180 190 1A0 191 2A1 181 192 3C1 2C1 2B1 1C0 2C2 1B0 1C1 393 382 292 383 271 150 "
    "261 250 361 350 251 1B1 3C2 3B1 371 252"
).split()

SCHEDULES = ("spurion11", "chain50", "forest3")


def chain50_vertices() -> List[str]:
    """Resolve the schedule codes to grid cells, checking every bar count"""
    seen: Dict[str, int] = {}
    vertices = []
    for index, code in enumerate(CHAIN50, start=1):
        vertex = f"{code[0]}:{code[1]}"
        bars = int(code[2])
        if seen.get(vertex, 0) != bars:
            raise WorkbenchError(f"step {index}: {code} expects {bars} earlier mutations at {vertex}, found {seen.get(vertex, 0)}")
        seen[vertex] = bars + 1
        vertices.append(vertex)
    return vertices


def _check_step(index: int, seed: Seed, vertex: str, expected: str, evaluators: Sequence[Evaluator]) -> int:
    closed = parse(expected)
    lhs = [ev.scalar(seed.variables[vertex]) for ev in evaluators]
    rhs = [ev.scalar(closed) for ev in evaluators]
    signs = [sign_between(x, y) for x, y in zip(lhs, rhs)]
    if not signs[0] or any(s != signs[0] for s in signs):
        raise StepMismatch(index, f"{expected} = {rhs[0]}", f"{to_string(seed.variables[vertex], limit=80)} = {lhs[0]}")
    return signs[0]


def _schedule(name: str, n: int, a: int):
    """(base seed, [(vertex, closed form or None)], target, comparison scope, alternatives)"""
    if name == "spurion11":
        target = spurion_target(n, freeze_dashed=False)
        return rectangles_seed(4, range(1, n + 1)), list(SPURION11), target, target.mutable, None
    if name == "chain50":
        target = chain_target(n, freeze_dashed=False)
        scope = chain_target(n).mutable
        alternatives = {cell(r, 12): [chain_x(r, X_DISPLAY_SIGNS[r]), chain_x(r, -X_DISPLAY_SIGNS[r])] for r in range(1, 5)}
        steps = [(v, None) for v in chain50_vertices()]
        return rectangles_seed(4, range(1, n + 1)), steps, target, scope, alternatives
    if name == "forest3":
        target = forest_figure(n, a)
        steps = [(v, text) for v, text in forest_closed_forms(a)]
        return rectangles_seed(3, range(1, n + 1)), steps, target, target.mutable, None
    raise WorkbenchError(f"unknown schedule {name!r}; known: {', '.join(SCHEDULES)}")


def run_mutation_sequence(name: str, n: int, points: Sequence[Mat], a: int = 5) -> MutationReport:
    """
    Apply a named schedule to the rectangles seed and compare with its target.

    Steps with a closed form are checked as they are applied; the final seed is
    matched against the target by values and its arrows are compared around
    the target's mutable vertices.

    Raises:
        StepMismatch: a step's variable differs from its closed form
    """
    seed, steps, target, scope, alternatives = _schedule(name, n, a)
    evaluators = [Evaluator(z) for z in points]
    report = MutationReport(name=name, n=n)
    for index, (vertex, expected) in enumerate(steps, start=1):
        seed = mutate(seed, vertex)
        sign = _check_step(index, seed, vertex, expected, evaluators) if expected else None
        report.steps.append(MutationStep(index=index, vertex=vertex, expected=expected, sign=sign))
        logger.debug("%s step %d at %s", name, index, vertex)

    match = match_variables(seed, target, points, alternatives)
    report.matched = match.matched
    for t in match.missing:
        report.violations.append(f"target vertex {t} has no counterpart after {len(steps)} mutations")
    for t, position in match.chosen.items():
        if position:
            report.notes.append(f"{t} matched with the relative sign flipped")

    orientation, compared, disagreements = compare_arrows(seed, target, match.matched, scope)
    report.orientation = orientation
    report.arrows_compared = compared
    report.violations.extend(disagreements)
    logger.info("%s: %d steps, %d matched, orientation %+d", name, len(steps), len(match.matched), orientation)
    return report
