"""
Exact scalars and dense linear algebra.

Rationals are ``fractions.Fraction``. ``QuadExt`` holds a + b*sqrt(delta) for a
single non-square positive rational delta; results that land back in Q are
returned as plain fractions so equality tests stay exact. ``Mat`` is an
immutable dense matrix over either kind of scalar.
"""

import logging
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import DeltaMismatch, DimensionMismatch

logger = logging.getLogger(__name__)

Rat = Fraction


def to_rat(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rat(value)
    raise TypeError(f"cannot coerce {value!r} to a rational")


def format_rat(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rat(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def sqrt_rational(value: Fraction) -> Optional[Fraction]:
    """Exact square root of a nonnegative rational, or None if irrational"""
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def random_rational(rng: random.Random, bound: int = 10_000) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_nonzero_rational(rng: random.Random, bound: int = 10_000) -> Fraction:
    while True:
        value = random_rational(rng, bound)
        if value != 0:
            return value


@dataclass(frozen=True)
class QuadExt:
    """a + b*sqrt(delta) with delta a positive rational that is not a square"""

    a: Fraction
    b: Fraction
    delta: Fraction

    def _lift(self, other) -> "QuadExt":
        if isinstance(other, QuadExt):
            if other.delta != self.delta:
                raise DeltaMismatch(
                    f"mixing sqrt({format_rat(self.delta)}) with sqrt({format_rat(other.delta)})"
                )
            return other
        return QuadExt(to_rat(other), Fraction(0), self.delta)

    def __add__(self, other):
        if not isinstance(other, (QuadExt, int, Fraction)):
            return NotImplemented
        o = self._lift(other)
        return make_quad(self.a + o.a, self.b + o.b, self.delta)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.delta)

    def __sub__(self, other):
        if not isinstance(other, (QuadExt, int, Fraction)):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, (QuadExt, int, Fraction)):
            return NotImplemented
        o = self._lift(other)
        return make_quad(
            self.a * o.a + self.b * o.b * self.delta,
            self.a * o.b + self.b * o.a,
            self.delta,
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.delta

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.delta)

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QuadExt division by zero")
        return make_quad(self.a / n, -self.b / n, self.delta)

    def __truediv__(self, other):
        if not isinstance(other, (QuadExt, int, Fraction)):
            return NotImplemented
        o = self._lift(other)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return (self.a, self.b, self.delta) == (other.a, other.b, other.delta)
        if isinstance(other, (int, Fraction)):
            # non-square delta: a QuadExt with b != 0 is never rational
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.delta))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __lt__(self, other):
        return quad_sign(self - other) < 0

    def __gt__(self, other):
        return quad_sign(self - other) > 0

    def __le__(self, other):
        return quad_sign(self - other) <= 0

    def __ge__(self, other):
        return quad_sign(self - other) >= 0

    def __str__(self):
        return f"{format_rat(self.a)} + {format_rat(self.b)}*sqrt({format_rat(self.delta)})"

    def to_float(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(float(self.delta))


Scalar = Union[Fraction, QuadExt]


def make_quad(a, b, delta) -> Scalar:
    """Build a + b*sqrt(delta), collapsing to a Fraction when the value is rational"""
    a, b, delta = to_rat(a), to_rat(b), to_rat(delta)
    if delta <= 0:
        raise ValueError("QuadExt requires a positive discriminant")
    if b == 0:
        return a
    root = sqrt_rational(delta)
    if root is not None:
        return a + b * root
    return QuadExt(a, b, delta)


def quad_sign(x: Scalar) -> int:
    """Exact sign of a rational or of a + b*sqrt(delta) as a real number"""
    if not isinstance(x, QuadExt):
        x = to_rat(x)
        return (x > 0) - (x < 0)
    sa = (x.a > 0) - (x.a < 0)
    sb = (x.b > 0) - (x.b < 0)
    if sa == 0 or sb == 0 or sa == sb:
        return sa or sb
    # opposite signs: compare a^2 with b^2*delta
    lhs, rhs = x.a * x.a, x.b * x.b * x.delta
    if lhs == rhs:
        return 0
    return sa if lhs > rhs else sb


def is_zero(x) -> bool:
    return not x


def format_scalar(x: Scalar) -> str:
    if isinstance(x, QuadExt):
        return str(x)
    return format_rat(to_rat(x))


def _coerce(entry):
    if isinstance(entry, (QuadExt, Fraction)):
        return entry
    return to_rat(entry)


class Mat:
    """Immutable dense matrix of exact scalars"""

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: Optional[int] = None):
        data = tuple(tuple(_coerce(e) for e in row) for row in rows)
        if data:
            widths = {len(r) for r in data}
            if len(widths) != 1:
                raise DimensionMismatch("ragged rows")
            width = widths.pop()
        else:
            width = ncols or 0
        if ncols is not None and data and width != ncols:
            raise DimensionMismatch(f"expected {ncols} columns, got {width}")
        self._rows = data
        self.nrows = len(data)
        self.ncols = width

    # construction -----------------------------------------------------------

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Mat":
        return cls([[0] * ncols for _ in range(nrows)], ncols=ncols)

    @classmethod
    def identity(cls, size: int) -> "Mat":
        return cls([[1 if i == j else 0 for j in range(size)] for i in range(size)], ncols=size)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: Optional[int] = None) -> "Mat":
        columns = [tuple(c) for c in columns]
        if not columns:
            return cls([[] for _ in range(nrows or 0)], ncols=0)
        height = len(columns[0])
        if any(len(c) != height for c in columns):
            raise DimensionMismatch("columns of unequal length")
        return cls([[c[i] for c in columns] for i in range(height)], ncols=len(columns))

    @classmethod
    def random(cls, rng: random.Random, nrows: int, ncols: int, bound: int = 10_000) -> "Mat":
        return cls(
            [[random_rational(rng, bound) for _ in range(ncols)] for _ in range(nrows)],
            ncols=ncols,
        )

    # access -----------------------------------------------------------------

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, index):
        i, j = index
        return self._rows[i][j]

    def row(self, i: int) -> Tuple:
        return self._rows[i]

    def rows(self) -> Tuple[Tuple, ...]:
        return self._rows

    def column(self, j: int) -> Tuple:
        if not 0 <= j < self.ncols:
            raise IndexError(f"column {j} out of range")
        return tuple(r[j] for r in self._rows)

    def columns(self) -> List[Tuple]:
        return [self.column(j) for j in range(self.ncols)]

    def with_column(self, j: int, vector: Sequence) -> "Mat":
        cols = self.columns()
        cols[j] = tuple(vector)
        return Mat.from_columns(cols, nrows=self.nrows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Mat":
        for i in rows:
            if not 0 <= i < self.nrows:
                raise IndexError(f"row {i} out of range")
        for j in cols:
            if not 0 <= j < self.ncols:
                raise IndexError(f"column {j} out of range")
        return Mat([[self._rows[i][j] for j in cols] for i in rows], ncols=len(cols))

    def transpose(self) -> "Mat":
        return Mat.from_columns(self._rows, nrows=self.ncols) if self.nrows else Mat.zeros(self.ncols, 0)

    def to_lists(self) -> List[List]:
        return [list(r) for r in self._rows]

    # arithmetic -------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for ra, rb in zip(self._rows, other._rows) for a, b in zip(ra, rb)
        )

    def __hash__(self):
        return hash(self._rows)

    def __add__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return Mat([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self._rows, other._rows)], ncols=self.ncols)

    def __sub__(self, other: "Mat") -> "Mat":
        return self + other.scale(-1)

    def scale(self, factor) -> "Mat":
        return Mat([[factor * a for a in r] for r in self._rows], ncols=self.ncols)

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        cols = other.columns()
        return Mat(
            [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self._rows],
            ncols=other.ncols,
        )

    def apply(self, vector: Sequence) -> Tuple:
        if len(vector) != self.ncols:
            raise DimensionMismatch("vector length does not match column count")
        return tuple(sum((a * b for a, b in zip(r, vector)), Fraction(0)) for r in self._rows)

    def hstack(self, other: "Mat") -> "Mat":
        if self.nrows != other.nrows:
            raise DimensionMismatch("hstack row mismatch")
        return Mat([ra + rb for ra, rb in zip(self._rows, other._rows)], ncols=self.ncols + other.ncols)

    def vstack(self, other: "Mat") -> "Mat":
        if self.ncols != other.ncols:
            raise DimensionMismatch("vstack column mismatch")
        return Mat(self._rows + other._rows, ncols=self.ncols)

    # elimination ------------------------------------------------------------

    def rref(self) -> Tuple["Mat", Tuple[int, ...]]:
        """Reduced row echelon form and pivot columns"""
        rows = [list(r) for r in self._rows]
        pivots: List[int] = []
        lead = 0
        for col in range(self.ncols):
            pivot_row = next((i for i in range(lead, self.nrows) if rows[i][col]), None)
            if pivot_row is None:
                continue
            rows[lead], rows[pivot_row] = rows[pivot_row], rows[lead]
            inv = 1 / rows[lead][col]
            rows[lead] = [inv * x for x in rows[lead]]
            for i in range(self.nrows):
                if i != lead and rows[i][col]:
                    factor = rows[i][col]
                    rows[i] = [x - factor * y for x, y in zip(rows[i], rows[lead])]
            pivots.append(col)
            lead += 1
            if lead == self.nrows:
                break
        return Mat(rows, ncols=self.ncols), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel(self) -> List[Tuple]:
        """Basis of the right null space, one vector per free column"""
        reduced, pivots = self.rref()
        free = [j for j in range(self.ncols) if j not in pivots]
        basis = []
        for f in free:
            vec = [Fraction(0)] * self.ncols
            vec[f] = Fraction(1)
            for r, p in enumerate(pivots):
                vec[p] = -reduced[r, f]
            basis.append(tuple(vec))
        return basis

    def det(self):
        if self.nrows != self.ncols:
            raise DimensionMismatch("determinant of a non-square matrix")
        rows = [list(r) for r in self._rows]
        size = self.nrows
        result = Fraction(1)
        for col in range(size):
            pivot_row = next((i for i in range(col, size) if rows[i][col]), None)
            if pivot_row is None:
                return Fraction(0)
            if pivot_row != col:
                rows[col], rows[pivot_row] = rows[pivot_row], rows[col]
                result = -result
            pivot = rows[col][col]
            result = result * pivot
            for i in range(col + 1, size):
                if rows[i][col]:
                    factor = rows[i][col] / pivot
                    rows[i] = [x - factor * y for x, y in zip(rows[i], rows[col])]
        return result

    def minor(self, rowset: Sequence[int], colset: Sequence[int]):
        if len(rowset) != len(colset):
            raise DimensionMismatch("minor needs equally many rows and columns")
        return self.submatrix(rowset, colset).det()

    def plucker(self, colset: Sequence[int]):
        """Maximal minor on the given columns, in the given order"""
        return self.minor(range(self.nrows), colset)

    def pluckers(self) -> Iterator[Tuple[Tuple[int, ...], object]]:
        for cols in combinations(range(self.ncols), self.nrows):
            yield cols, self.plucker(cols)

    def row_space_contains(self, other: "Mat") -> bool:
        return self.vstack(other).rank() == self.rank()

    def __repr__(self):
        body = "; ".join(" ".join(format_scalar(x) for x in r) for r in self._rows)
        return f"Mat({self.nrows}x{self.ncols}: {body})"
