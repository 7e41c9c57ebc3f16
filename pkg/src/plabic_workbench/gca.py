"""
Grassmann-Cayley algebra over Q^m (or Q(sqrt D)^m).

Multivectors are sparse maps from sorted index tuples to exact scalars. The
shuffle (meet) product follows the convention

    A * B = sum over shuffles w of sign(w) <a_w(1..m-q) b_1..b_q> a_w(m-q+1..p)

so that A * B = 0 when p + q < m and A * B is the bracket when p + q = m.

Bracket expressions are small immutable trees evaluated at points, where a
point is an m x n matrix whose column ``label - 1`` is the vector of ``label``.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import DimensionMismatch, EvaluationDivisionByZero, GradeError
from .scalar import Mat, Scalar, to_rat

logger = logging.getLogger(__name__)

Blade = Tuple[int, ...]

LABEL_ALPHABET = "123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ"


def label_char(label: int) -> str:
    if not 1 <= label <= len(LABEL_ALPHABET):
        raise ValueError(f"label {label} outside the printable alphabet")
    return LABEL_ALPHABET[label - 1]


def char_label(char: str) -> int:
    index = LABEL_ALPHABET.find(char.upper())
    if index < 0:
        raise ValueError(f"not a column label: {char!r}")
    return index + 1


def _inversions(first: Sequence[int], second: Sequence[int]) -> int:
    return sum(1 for a in first for b in second if a > b)


def _wedge_blades(left: Blade, right: Blade) -> Tuple[int, Optional[Blade]]:
    if set(left) & set(right):
        return 0, None
    sign = -1 if _inversions(left, right) % 2 else 1
    return sign, tuple(sorted(left + right))


def _shuffle_blades(left: Blade, right: Blade, m: int) -> Tuple[int, Optional[Blade]]:
    """e_I * e_J for sorted I, J in an m-dimensional ambient space"""
    p, q = len(left), len(right)
    if p + q < m:
        return 0, None
    taken = set(right)
    front = tuple(i for i in range(m) if i not in taken)
    if not set(front) <= set(left):
        return 0, None
    rest = tuple(i for i in left if i not in front)
    moves = sum(1 for t in front for x in rest if x < t)
    sign = -1 if (moves + _inversions(front, right)) % 2 else 1
    return sign, rest


class Multivector:
    """Element of the exterior algebra on an m-dimensional space"""

    __slots__ = ("m", "_terms")

    def __init__(self, m: int, terms: Optional[Mapping[Blade, Scalar]] = None):
        self.m = m
        cleaned: Dict[Blade, Scalar] = {}
        for blade, coeff in (terms or {}).items():
            if coeff:
                blade = tuple(blade)
                if any(not 0 <= i < m for i in blade) or list(blade) != sorted(set(blade)):
                    raise ValueError(f"blade {blade} is not a sorted subset of range({m})")
                cleaned[blade] = coeff
        self._terms = cleaned

    # construction -----------------------------------------------------------

    @classmethod
    def scalar(cls, m: int, value) -> "Multivector":
        return cls(m, {(): value if not isinstance(value, int) else Fraction(value)})

    @classmethod
    def vector(cls, entries: Sequence) -> "Multivector":
        entries = [to_rat(e) if isinstance(e, int) else e for e in entries]
        return cls(len(entries), {(i,): c for i, c in enumerate(entries)})

    @classmethod
    def basis(cls, m: int, indices: Iterable[int]) -> "Multivector":
        """Wedge of standard basis vectors e_i (0-based, in the given order)"""
        result = cls.scalar(m, 1)
        for i in indices:
            result = wedge(result, cls(m, {(i,): Fraction(1)}))
        return result

    # inspection -------------------------------------------------------------

    @property
    def terms(self) -> Dict[Blade, Scalar]:
        return dict(self._terms)

    def __iter__(self):
        return iter(sorted(self._terms.items()))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def grades(self) -> set:
        return {len(b) for b in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.grades()) <= 1

    @property
    def grade(self) -> Optional[int]:
        """Grade of a homogeneous element, None for zero"""
        grades = self.grades()
        if not grades:
            return None
        if len(grades) > 1:
            raise GradeError(f"mixed grades {sorted(grades)}")
        return grades.pop()

    def coefficient(self, blade: Blade):
        return self._terms.get(tuple(blade), Fraction(0))

    def scalar_part(self):
        return self.coefficient(())

    def top(self):
        """Coefficient of e_1 ^ ... ^ e_m"""
        return self.coefficient(tuple(range(self.m)))

    def as_vector(self) -> Tuple:
        grade = self.grade
        if grade not in (None, 1):
            raise GradeError(f"expected a vector, got grade {grade}")
        return tuple(self.coefficient((i,)) for i in range(self.m))

    def span(self) -> List[Tuple]:
        """Basis of {v : v ^ F = 0}; for decomposable F this spans F"""
        grade = self.grade
        if grade is None:
            raise GradeError("span of the zero multivector")
        if grade == 0:
            return []
        rows_index = [b for b in combinations(range(self.m), grade + 1)]
        columns = []
        for i in range(self.m):
            image = wedge(Multivector(self.m, {(i,): Fraction(1)}), self)
            columns.append([image.coefficient(b) for b in rows_index])
        return Mat.from_columns(columns).kernel() if rows_index else [
            tuple(Fraction(int(i == j)) for j in range(self.m)) for i in range(self.m)
        ]

    # arithmetic -------------------------------------------------------------

    def _check(self, other: "Multivector"):
        if self.m != other.m:
            raise DimensionMismatch(f"ambient dimensions {self.m} and {other.m}")

    def __add__(self, other: "Multivector") -> "Multivector":
        self._check(other)
        terms = dict(self._terms)
        for blade, coeff in other._terms.items():
            terms[blade] = terms.get(blade, Fraction(0)) + coeff
        return Multivector(self.m, terms)

    def __neg__(self) -> "Multivector":
        return Multivector(self.m, {b: -c for b, c in self._terms.items()})

    def __sub__(self, other: "Multivector") -> "Multivector":
        return self + (-other)

    def scale(self, factor) -> "Multivector":
        return Multivector(self.m, {b: factor * c for b, c in self._terms.items()})

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.m == other.m and self._terms == other._terms

    def __hash__(self):
        return hash((self.m, frozenset(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for blade, coeff in self:
            name = "^".join(f"e{i + 1}" for i in blade) or "1"
            parts.append(f"({coeff})*{name}")
        return " + ".join(parts)


def wedge(left: Multivector, right: Multivector) -> Multivector:
    left._check(right)
    terms: Dict[Blade, Scalar] = {}
    for lb, lc in left._terms.items():
        for rb, rc in right._terms.items():
            sign, blade = _wedge_blades(lb, rb)
            if blade is None:
                continue
            terms[blade] = terms.get(blade, Fraction(0)) + sign * lc * rc
    return Multivector(left.m, terms)


def shuffle(left: Multivector, right: Multivector) -> Multivector:
    left._check(right)
    if not left.is_homogeneous() or not right.is_homogeneous():
        raise GradeError("shuffle requires homogeneous inputs")
    terms: Dict[Blade, Scalar] = {}
    for lb, lc in left._terms.items():
        for rb, rc in right._terms.items():
            sign, blade = _shuffle_blades(lb, rb, left.m)
            if blade is None:
                continue
            terms[blade] = terms.get(blade, Fraction(0)) + sign * lc * rc
    return Multivector(left.m, terms)


def wedge_all(vectors: Iterable[Multivector], m: int) -> Multivector:
    result = Multivector.scalar(m, 1)
    for v in vectors:
        result = wedge(result, v)
    return result


def bracket(value: Multivector):
    """<F>: the top coefficient, or F itself when F is a scalar"""
    grade = value.grade
    if grade is None:
        return Fraction(0)
    if grade == 0:
        return value.scalar_part()
    if grade == value.m:
        return value.top()
    raise GradeError(f"bracket of a grade-{grade} element in dimension {value.m}")


def _column(point, label: int) -> Tuple:
    if isinstance(point, Mat):
        return point.column(label - 1)
    return tuple(point[label])


def _ambient(point) -> int:
    if isinstance(point, Mat):
        return point.nrows
    return len(next(iter(point.values())))


def columns_blade(point, labels: Sequence[int]) -> Multivector:
    m = _ambient(point)
    return wedge_all((Multivector.vector(_column(point, i)) for i in labels), m)


def chain(a: Sequence[int], b: Sequence[int], c: Sequence[int], point: Mat):
    """Chain polynomial <A*B*C> for column label sets A, B, C"""
    m = point.nrows
    i, j, k = len(a), len(b), len(c)
    if not (i + j >= m and i + k >= m and j + k >= m and i + j + k == 2 * m):
        raise GradeError(f"chain sizes ({i},{j},{k}) invalid for m={m}")
    result = shuffle(shuffle(columns_blade(point, a), columns_blade(point, b)), columns_blade(point, c))
    return bracket(result)


# --------------------------------------------------------------------------
# bracket expressions
# --------------------------------------------------------------------------


class BracketExpr:
    """Base node; concrete nodes are immutable and compared by identity"""

    def __str__(self):
        return to_string(self)

    def __repr__(self):
        return f"BracketExpr({to_string(self, limit=120)!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Col(BracketExpr):
    label: int


@dataclass(frozen=True, eq=False, repr=False)
class Const(BracketExpr):
    value: int


@dataclass(frozen=True, eq=False, repr=False)
class Wedge(BracketExpr):
    parts: Tuple[BracketExpr, ...]


@dataclass(frozen=True, eq=False, repr=False)
class Shuffle(BracketExpr):
    left: BracketExpr
    right: BracketExpr


@dataclass(frozen=True, eq=False, repr=False)
class Bracket(BracketExpr):
    inner: BracketExpr


@dataclass(frozen=True, eq=False, repr=False)
class Sum(BracketExpr):
    terms: Tuple[Tuple[int, BracketExpr], ...]


@dataclass(frozen=True, eq=False, repr=False)
class Quotient(BracketExpr):
    numerator: BracketExpr
    denominator: BracketExpr


def cols(labels: Iterable[int]) -> BracketExpr:
    labels = list(labels)
    if len(labels) == 1:
        return Col(labels[0])
    return Wedge(tuple(Col(i) for i in labels))


def br(labels: Iterable[int]) -> BracketExpr:
    """<i1 i2 ... im>"""
    return Bracket(cols(labels))


def product(factors: Iterable[BracketExpr]) -> BracketExpr:
    factors = list(factors)
    if not factors:
        return Const(1)
    if len(factors) == 1:
        return factors[0]
    return Wedge(tuple(factors))


def ratio(numerators: Iterable[BracketExpr], denominators: Iterable[BracketExpr]) -> BracketExpr:
    denominators = list(denominators)
    top = product(numerators)
    if not denominators:
        return top
    return Quotient(top, product(denominators))


def plus(*terms: BracketExpr) -> BracketExpr:
    return Sum(tuple((1, t) for t in terms))


def minus(left: BracketExpr, right: BracketExpr) -> BracketExpr:
    return Sum(((1, left), (-1, right)))


def neg(expr: BracketExpr) -> BracketExpr:
    return Sum(((-1, expr),))


# printing -----------------------------------------------------------------


class _Truncated(Exception):
    pass


_LOOSE = (Sum, Quotient, Shuffle)


def to_string(expr: BracketExpr, limit: Optional[int] = None) -> str:
    """Render in the parse grammar; with a limit, long output is cut with '...'"""
    out: List[str] = []
    size = [0]

    def emit(text: str):
        out.append(text)
        size[0] += len(text)
        if limit is not None and size[0] > limit:
            raise _Truncated

    def wrap(node: BracketExpr, loose: tuple):
        if isinstance(node, loose):
            emit("(")
            walk(node)
            emit(")")
        else:
            walk(node)

    def walk(node: BracketExpr):
        if isinstance(node, Col):
            emit(label_char(node.label))
        elif isinstance(node, Const):
            if node.value < 0:
                raise ValueError("negative constants are written as a negated Sum")
            emit(f"#{node.value}")
        elif isinstance(node, Wedge):
            for part in node.parts:
                wrap(part, _LOOSE + (Wedge, Const))
        elif isinstance(node, Shuffle):
            wrap(node.left, (Sum, Quotient))
            emit("*")
            wrap(node.right, _LOOSE)
        elif isinstance(node, Bracket):
            emit("<")
            walk(node.inner)
            emit(">")
        elif isinstance(node, Quotient):
            wrap(node.numerator, (Sum,))
            emit("/")
            wrap(node.denominator, (Sum, Quotient))
        elif isinstance(node, Sum):
            for index, (sign, term) in enumerate(node.terms):
                if sign < 0:
                    emit("-")
                elif index:
                    emit("+")
                wrap(term, (Sum,))
        else:
            raise TypeError(f"unknown node {node!r}")

    try:
        walk(expr)
    except _Truncated:
        return "".join(out)[:limit] + "..."
    return "".join(out)


# parsing ------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.tokens = self._tokenize(text)
        self.pos = 0

    @staticmethod
    def _tokenize(text: str) -> List[str]:
        tokens: List[str] = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch == "#":
                j = i + 1
                while j < len(text) and text[j].isdigit():
                    j += 1
                if j == i + 1:
                    raise ValueError(f"integer literal expected at offset {i}")
                tokens.append(text[i:j])
                i = j
            elif ch in "()<>^*/+-":
                tokens.append(ch)
                i += 1
            elif ch.upper() in LABEL_ALPHABET:
                tokens.append(ch.upper())
                i += 1
            else:
                raise ValueError(f"unexpected character {ch!r} at offset {i}")
        return tokens

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected: Optional[str] = None) -> str:
        token = self.peek()
        if token is None or (expected is not None and token != expected):
            raise ValueError(f"expected {expected or 'token'} at token {self.pos}, got {token!r}")
        self.pos += 1
        return token

    def parse(self) -> BracketExpr:
        expr = self.sum()
        if self.peek() is not None:
            raise ValueError(f"trailing input at token {self.pos}: {self.peek()!r}")
        return expr

    def sum(self) -> BracketExpr:
        terms = []
        sign = 1
        if self.peek() == "-":
            self.take()
            sign = -1
        terms.append((sign, self.quotient()))
        while self.peek() in ("+", "-"):
            sign = 1 if self.take() == "+" else -1
            terms.append((sign, self.quotient()))
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return Sum(tuple(terms))

    def quotient(self) -> BracketExpr:
        expr = self.shuffle()
        while self.peek() == "/":
            self.take()
            expr = Quotient(expr, self.shuffle())
        return expr

    def shuffle(self) -> BracketExpr:
        expr = self.wedge()
        while self.peek() == "*":
            self.take()
            expr = Shuffle(expr, self.wedge())
        return expr

    def _starts_atom(self) -> bool:
        token = self.peek()
        return token is not None and (token in ("(", "<") or token.startswith("#") or token in LABEL_ALPHABET)

    def wedge(self) -> BracketExpr:
        parts = [self.atom()]
        while True:
            if self.peek() == "^":
                self.take()
                parts.append(self.atom())
            elif self._starts_atom():
                parts.append(self.atom())
            else:
                break
        return parts[0] if len(parts) == 1 else Wedge(tuple(parts))

    def atom(self) -> BracketExpr:
        token = self.take()
        if token == "(":
            expr = self.sum()
            self.take(")")
            return expr
        if token == "<":
            expr = self.sum()
            self.take(">")
            return Bracket(expr)
        if token.startswith("#"):
            return Const(int(token[1:]))
        if token in LABEL_ALPHABET:
            return Col(char_label(token))
        raise ValueError(f"unexpected token {token!r}")


def parse(text: str) -> BracketExpr:
    """Parse e.g. ``<(123*456)7*89>`` or ``(12*34)/<124>``"""
    return _Parser(text).parse()


# rewriting ----------------------------------------------------------------


def _rebuild(node: BracketExpr, leaf: Callable[[Col], Optional[BracketExpr]], memo: Dict[int, BracketExpr]):
    key = id(node)
    if key in memo:
        return memo[key]
    if isinstance(node, Col):
        result = leaf(node)
    elif isinstance(node, Const):
        result = node
    elif isinstance(node, Wedge):
        parts = [p for p in (_rebuild(x, leaf, memo) for x in node.parts) if p is not None]
        if not parts:
            raise ValueError("erasure emptied a wedge group")
        result = parts[0] if len(parts) == 1 else Wedge(tuple(parts))
    elif isinstance(node, Shuffle):
        result = Shuffle(_require(_rebuild(node.left, leaf, memo)), _require(_rebuild(node.right, leaf, memo)))
    elif isinstance(node, Bracket):
        result = Bracket(_require(_rebuild(node.inner, leaf, memo)))
    elif isinstance(node, Quotient):
        result = Quotient(
            _require(_rebuild(node.numerator, leaf, memo)),
            _require(_rebuild(node.denominator, leaf, memo)),
        )
    elif isinstance(node, Sum):
        result = Sum(tuple((s, _require(_rebuild(t, leaf, memo))) for s, t in node.terms))
    else:
        raise TypeError(f"unknown node {node!r}")
    memo[key] = result
    return result


def _require(node: Optional[BracketExpr]) -> BracketExpr:
    if node is None:
        raise ValueError("cannot erase a column that is not inside a wedge group")
    return node


def erase(expr: BracketExpr, label: int) -> BracketExpr:
    """Remove column ``label`` from every wedge group"""
    return _require(_rebuild(expr, lambda c: None if c.label == label else c, {}))


def substitute(expr: BracketExpr, mapping: Mapping[int, BracketExpr]) -> BracketExpr:
    """Replace columns by expressions (pullback along a promotion)"""
    return _rebuild(expr, lambda c: mapping.get(c.label, c), {})


def labels_of(expr: BracketExpr) -> set:
    found: set = set()
    seen: set = set()
    stack = [expr]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        if isinstance(node, Col):
            found.add(node.label)
        elif isinstance(node, Wedge):
            stack.extend(node.parts)
        elif isinstance(node, Shuffle):
            stack.extend((node.left, node.right))
        elif isinstance(node, Bracket):
            stack.append(node.inner)
        elif isinstance(node, Quotient):
            stack.extend((node.numerator, node.denominator))
        elif isinstance(node, Sum):
            stack.extend(t for _, t in node.terms)
    return found


# evaluation ---------------------------------------------------------------


PointLike = Union[Mat, Mapping[int, Sequence]]


def _evaluate(expr: BracketExpr, point: PointLike, memo: Dict[int, Multivector]) -> Multivector:
    """``memo`` is keyed by node identity; its owner keeps the evaluated roots alive"""
    m = _ambient(point)

    def walk(node: BracketExpr) -> Multivector:
        key = id(node)
        cached = memo.get(key)
        if cached is not None:
            return cached
        if isinstance(node, Col):
            value = Multivector.vector(_column(point, node.label))
        elif isinstance(node, Const):
            value = Multivector.scalar(m, node.value)
        elif isinstance(node, Wedge):
            value = Multivector.scalar(m, 1)
            for part in node.parts:
                value = wedge(value, walk(part))
        elif isinstance(node, Shuffle):
            value = shuffle(walk(node.left), walk(node.right))
        elif isinstance(node, Bracket):
            value = Multivector.scalar(m, bracket(walk(node.inner)))
        elif isinstance(node, Quotient):
            den = walk(node.denominator)
            if den.grade not in (None, 0):
                raise GradeError(f"non-scalar denominator in {to_string(node, limit=80)}")
            d = den.scalar_part()
            if not d:
                raise EvaluationDivisionByZero(to_string(node.denominator, limit=80))
            value = walk(node.numerator).scale(1 / d)
        elif isinstance(node, Sum):
            value = Multivector(m)
            for sign, term in node.terms:
                part = walk(term)
                value = value + (part if sign > 0 else -part)
        else:
            raise TypeError(f"unknown node {node!r}")
        memo[key] = value
        return value

    return walk(expr)


def evaluate(expr: BracketExpr, point: PointLike) -> Multivector:
    """Exact value of ``expr`` at ``point``; shared subtrees are evaluated once per call"""
    return _evaluate(expr, point, {})


def evaluate_scalar(expr: BracketExpr, point: PointLike):
    value = evaluate(expr, point)
    grade = value.grade
    if grade not in (None, 0):
        raise GradeError(f"expected a scalar, got grade {grade}")
    return value.scalar_part()


def evaluate_vector(expr: BracketExpr, point: PointLike) -> Tuple:
    return evaluate(expr, point).as_vector()


class Evaluator:
    """
    Evaluate many expressions at one point with a shared memo.

    The memo is keyed by node identity, so every evaluated root is kept alive
    for the evaluator's lifetime; ids of collected trees are never reused
    against stale entries.
    """

    def __init__(self, point: PointLike):
        self.point = point
        self._memo: Dict[int, Multivector] = {}
        self._alive: List[BracketExpr] = []

    def value(self, expr: BracketExpr) -> Multivector:
        self._alive.append(expr)
        return _evaluate(expr, self.point, self._memo)

    def scalar(self, expr: BracketExpr):
        value = self.value(expr)
        if value.grade not in (None, 0):
            raise GradeError(f"expected a scalar, got grade {value.grade}")
        return value.scalar_part()

    def vector(self, expr: BracketExpr) -> Tuple:
        return self.value(expr).as_vector()
