"""
Named promotion families as bracket-formula tables, plus the two 4-mass box
branches evaluated over Q(sqrt(Delta)).
"""

import logging
from fractions import Fraction
from typing import Callable, Dict, List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, SkipValidation

from .errors import NegativeDiscriminant, WorkbenchError, ZeroLeadingCoefficient
from .gca import BracketExpr, Quotient, Shuffle, br, cols, erase, evaluate_scalar, evaluate_vector, label_char, parse
from .promotion import Promotion
from .scalar import Mat, Scalar, make_quad
from .tangle import Tangle, bcfw_tangle, chain_tangle, forest_tangle, spurion_tangle, star_tangle

logger = logging.getLogger(__name__)


def _over(numerator: BracketExpr, denominator: BracketExpr) -> BracketExpr:
    return Quotient(numerator, denominator)


def _table(name: str, m: int, tangle: Tangle, substitutions: Sequence[Dict[int, BracketExpr]]) -> Promotion:
    return Promotion(
        name=name,
        m=m,
        n=tangle.n,
        domains=tuple(blob.names for blob in tangle.blobs),
        substitutions=tuple(substitutions),
        tangle=tangle,
    )


def star_promotion(m: int, n: int) -> Promotion:
    """j -> (1..j-1)*(j..m+1) / <[m+1] without j> for 3 <= j <= m; other labels fixed"""
    top = list(range(1, m + 2))
    table = {
        j: _over(Shuffle(cols(range(1, j)), cols(range(j, m + 2))), br(x for x in top if x != j))
        for j in range(3, m + 1)
    }
    return _table("star", m, star_tangle(m, n), [table])


def bcfw_promotion(n: int, a: int) -> Promotion:
    """Binary BCFW promotion for m = 4 with b = a+1, c = n-2, d = n-1"""
    b, c, d = a + 1, n - 2, n - 1
    five = (a, b, c, d, n)

    def frozen(e: int) -> BracketExpr:
        return br(x for x in five if x != e)

    left = {b: _over(Shuffle(cols([a, b]), cols([c, d, n])), frozen(b))}
    right = {
        d: _over(Shuffle(cols([c, d]), cols([a, b, n])), frozen(d)),
        n: _over(Shuffle(cols([c, d, n]), cols([a, b])), frozen(n)),
    }
    return _table("bcfw", 4, bcfw_tangle(n, a), [left, right])


SPURION_CHAIN = "<123*456*789>"

SPURION_FORMULAS = {
    2: "12*3(456*789)",
    7: "123*456*789",
    8: "(123*456)7*89",
}

CHAIN_CHAIN = "<(123*456)7(89A*BCD)>"

CHAIN_FORMULAS = {
    2: "12*(3(456*(7(89A*BCD))))",
    3: "123*456*(7(89A*BCD))",
    11: "BCD*89A*(7(123*456))",
    12: "CD*(B(89A*(7(456*123))))",
}


def erased_chain(text: str, label: int) -> BracketExpr:
    """F_i: the displayed chain with column i erased"""
    return erase(parse(text), label)


def _erasure_table(chain: str, formulas: Dict[int, str]) -> Dict[int, BracketExpr]:
    return {label: _over(parse(text), erased_chain(chain, label)) for label, text in formulas.items()}


def spurion_promotion(n: int) -> Promotion:
    return _table("spurion", 4, spurion_tangle(n), [_erasure_table(SPURION_CHAIN, SPURION_FORMULAS)])


def chain_promotion(n: int) -> Promotion:
    """Labels 1 and D are fixed; only 2, 3, B, C carry formulas"""
    return _table("chain", 4, chain_tangle(n), [_erasure_table(CHAIN_CHAIN, CHAIN_FORMULAS)])


def forest_promotion(n: int, a: int) -> Promotion:
    """Two m = 3 stars: 2 -> (12*34)/<134>, b -> (ab*cd)/<acd>"""
    b, c, d = a + 1, a + 2, a + 3
    table = {
        2: _over(Shuffle(cols([1, 2]), cols([3, 4])), br([1, 3, 4])),
        b: _over(Shuffle(cols([a, b]), cols([c, d])), br([a, c, d])),
    }
    return _table("forest", 3, forest_tangle(n, a), [table])


FAMILIES: Dict[str, Callable[..., Promotion]] = {
    "star": star_promotion,
    "bcfw": bcfw_promotion,
    "spurion": spurion_promotion,
    "chain": chain_promotion,
    "forest": forest_promotion,
}


def named_promotion(name: str, **params) -> Promotion:
    """
    Build a named promotion.

    Args:
        name: star (m, n), bcfw (n, a), spurion (n), chain (n) or forest (n, a)
        params: the family's size parameters

    Returns:
        The promotion with its formula table and tangle
    """
    try:
        builder = FAMILIES[name]
    except KeyError:
        raise WorkbenchError(f"unknown promotion family {name!r}; known: {', '.join(FAMILIES)}") from None
    return builder(**params)


# --------------------------------------------------------------------------
# 4-mass box
# --------------------------------------------------------------------------


def _c(label: int) -> str:
    return label_char(label)


def y_entry(i: int, j: int) -> BracketExpr:
    """Y_ij = <12i*43*56j>"""
    return parse(f"<12{_c(i)}*43*56{_c(j)}>")


def quadratic_coefficients(z: Mat) -> Tuple[Fraction, Fraction, Fraction]:
    """A = Y_88, B = Y_78 + Y_87, C = Y_77"""
    a = evaluate_scalar(y_entry(8, 8), z)
    b = evaluate_scalar(y_entry(7, 8), z) + evaluate_scalar(y_entry(8, 7), z)
    c = evaluate_scalar(y_entry(7, 7), z)
    return a, b, c


def _with(z: Mat, label: int, vector: Sequence) -> Dict[int, Tuple]:
    point = {j + 1: z.column(j) for j in range(z.ncols)}
    point[label] = tuple(vector)
    return point


class FourMassBox(BaseModel):
    """One branch of the 4-mass box promotion at a point z"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    branch: int = Field(..., description="+1 or -1")
    n: int = Field(..., description="Boundary count")
    a: Fraction = Field(..., description="A = Y_88")
    b: Fraction = Field(..., description="B = Y_78 + Y_87")
    c: Fraction = Field(..., description="C = Y_77")
    delta: Fraction = Field(..., description="B^2 - 4AC")
    alpha: SkipValidation[Scalar] = Field(..., description="(-B + branch*sqrt(delta)) / 2A")
    x: Tuple = Field(..., description="X = z_7 + alpha z_8")
    w: Tuple = Field(..., description="Image of z_2: (12*56X)/<156X>")
    images: Dict[int, Tuple] = Field(..., description="Domain label to promoted vector")

    @property
    def domain(self) -> Tuple[int, ...]:
        return (1, 2, 7, 8) + tuple(range(9, self.n + 1))

    def blob_point(self) -> Mat:
        return Mat.from_columns([self.images[label] for label in self.domain], nrows=4)

    def with_x(self, z: Mat) -> Dict[int, Tuple]:
        """z with X in the slot of label 7"""
        return _with(z, 7, self.x)


def four_mass_box(z: Mat, branch: int) -> FourMassBox:
    """
    Promote z along one branch of the 4-mass box.

    Raises:
        ZeroLeadingCoefficient: A(z) = 0
        NegativeDiscriminant: Delta(z) <= 0
        EvaluationDivisionByZero: <156X> vanishes
    """
    if branch not in (1, -1):
        raise WorkbenchError("branch is +1 or -1")
    if z.nrows != 4 or z.ncols < 8:
        raise WorkbenchError("the 4-mass box needs a 4 x n point with n >= 8")
    a, b, c = quadratic_coefficients(z)
    if a == 0:
        raise ZeroLeadingCoefficient("A = <128*43*568> vanishes")
    delta = b * b - 4 * a * c
    if delta <= 0:
        raise NegativeDiscriminant(f"discriminant {delta} is not positive")
    alpha = make_quad(-b / (2 * a), Fraction(branch) / (2 * a), delta)
    x = tuple(p + alpha * q for p, q in zip(z.column(6), z.column(7)))
    point = _with(z, 7, x)
    w = evaluate_vector(parse("(12*567)/<1567>"), point)
    images = {label: z.column(label - 1) for label in range(1, z.ncols + 1)}
    images[2] = w
    images[7] = x
    logger.debug("4-mass box branch %+d: delta = %s", branch, delta)
    return FourMassBox(
        branch=branch,
        n=z.ncols,
        a=a,
        b=b,
        c=c,
        delta=delta,
        alpha=alpha,
        x=x,
        w=w,
        images={label: images[label] for label in (1, 2, 7, 8) + tuple(range(9, z.ncols + 1))},
    )


class IdentityCheck(BaseModel):
    """Comparison of two sides of a polynomial identity at one point"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    family: str = Field(..., description="Identity family, shared by all its instances")
    name: str = Field(..., description="This instance")
    lhs: SkipValidation[Scalar] = Field(..., description="Left side value")
    rhs: SkipValidation[Scalar] = Field(..., description="Right side value")
    sign: int = Field(..., description="lhs = sign * rhs, 0 when neither sign works")

    @property
    def holds(self) -> bool:
        return self.sign != 0


def _compare(family: str, name: str, lhs, rhs) -> IdentityCheck:
    if lhs == rhs:
        sign = 1
    elif lhs == -rhs:
        sign = -1
    else:
        sign = 0
    return IdentityCheck(family=family, name=name, lhs=lhs, rhs=rhs, sign=sign)


def four_mass_box_identities(z: Mat) -> List[IdentityCheck]:
    """
    The polynomial identities behind the positivity certificates, at z.

    Each is compared up to sign, one instance per i in 9..n for the indexed
    families. They hold at every rational point, positive or not.
    """
    a, b, c = quadratic_coefficients(z)

    def val(text: str):
        return evaluate_scalar(parse(text), z)

    checks: List[IdentityCheck] = []
    b1278 = val("<1278>")
    for i in range(9, z.ncols + 1):
        s = _c(i)
        p7, p8 = val(f"<127{s}>"), val(f"<128{s}>")
        checks.append(_compare(
            "quadratic-12i",
            f"A<127{s}>^2 - B<127{s}><128{s}> + C<128{s}>^2",
            a * p7 * p7 - b * p7 * p8 + c * p8 * p8,
            b1278 * val(f"<(12{s}*34)65(78*12{s})>"),
        ))
        checks.append(_compare(
            "linear-12i",
            f"2A<127{s}> - B<128{s}>",
            2 * a * p7 - b * p8,
            b1278 * val(f"<12{s}*43*568>") + val(f"<(128*34)65(78*12{s})>"),
        ))
    q7, q8 = val("<1567>"), val("<1568>")
    checks.append(_compare(
        "quadratic-156",
        "A<1567>^2 - B<1567><1568> + C<1568>^2",
        a * q7 * q7 - b * q7 * q8 + c * q8 * q8,
        -val("<5678>") * val("<(156*34)21(78*156)>"),
    ))
    y7, y8 = val("<789*21*567>"), val("<789*21*568>")
    checks.append(_compare(
        "quadratic-789",
        "A Y7^2 - B Y7 Y8 + C Y8^2",
        a * y7 * y7 - b * y7 * y8 + c * y8 * y8,
        -b1278 * val("<5678>") * val("<(789*12)56*34*12(56*789)>"),
    ))
    return checks


def identity_signs(checks: Sequence[IdentityCheck]) -> Dict[str, int]:
    """Global sign per identity family; 0 when a family fails or mixes signs"""
    found: Dict[str, set] = {}
    for check in checks:
        found.setdefault(check.family, set()).add(check.sign)
    return {family: next(iter(signs)) if len(signs) == 1 else 0 for family, signs in found.items()}
