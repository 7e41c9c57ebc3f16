"""Exception hierarchy shared by every workbench module."""

from typing import Any, Optional


class WorkbenchError(Exception):
    """Base class for all workbench errors"""

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.context = context


class DimensionMismatch(WorkbenchError):
    """Operands live in different ambient dimensions or have incompatible shapes"""


class DeltaMismatch(WorkbenchError):
    """Two quadratic-extension values were built over different discriminants"""


class GradeError(WorkbenchError):
    """A multivector operation received an input of the wrong grade"""


class EvaluationDivisionByZero(WorkbenchError, ZeroDivisionError):
    """A quotient node evaluated to a zero denominator"""

    def __init__(self, path: str):
        super().__init__(f"denominator vanishes at {path}", path=path)
        self.path = path


class FormatError(WorkbenchError):
    """Malformed input in one of the text formats"""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}", line_no=line_no)
        self.line_no = line_no


class NotOrientable(WorkbenchError):
    """No (reverse) perfect orientation exists"""


class CyclicOrientation(WorkbenchError):
    """An acyclic orientation was required"""


class CapExceeded(WorkbenchError):
    """A configured search or enumeration cap was exceeded"""


class PatternMismatch(WorkbenchError):
    """A local move does not apply at the requested location"""


class Infeasible(WorkbenchError):
    """Required edges cannot be completed to a gauge fix"""


class WrongBoundaryCount(WorkbenchError):
    """Boundary count is not of the form km+1"""


class DegenerateBoundary(WorkbenchError):
    """A Grassmann-Cayley subspace label vanished"""


class NotGeneric(WorkbenchError):
    """The sampled boundary is not generic for the requested construction"""


class KernelDimensionError(WorkbenchError):
    """A white-vertex kernel is not one-dimensional with nonzero entries"""


class Degenerate(WorkbenchError):
    """A local solve or a blob matrix is degenerate"""


class RankDeficientSources(WorkbenchError):
    """Boundary columns on the source set do not have full rank"""


class NoBrushing(WorkbenchError):
    """No brushing exists; carries the min-cut certificate when available"""

    def __init__(self, message: str, cut: Optional[frozenset] = None):
        super().__init__(message, cut=cut)
        self.cut = cut


class ArityMismatch(WorkbenchError):
    """Blob size does not match the inserted tangle's boundary"""


class FrozenVertex(WorkbenchError):
    """Mutation or exchange ratio requested at a frozen vertex"""


class StepMismatch(WorkbenchError):
    """A mutation step did not produce the expected cluster variable"""

    def __init__(self, step: int, expected: Any, actual: Any):
        super().__init__(
            f"step {step}: expected {expected}, got {actual}",
            step=step,
            expected=expected,
            actual=actual,
        )
        self.step = step


class NegativeDiscriminant(WorkbenchError):
    """The 4-mass box discriminant is not positive"""


class ZeroLeadingCoefficient(WorkbenchError):
    """The 4-mass box quadratic has vanishing leading coefficient"""


class CertificateFailure(WorkbenchError):
    """A positivity certificate failed at a sampled point"""

    def __init__(self, statement: str, point: Any = None):
        super().__init__(f"certificate failed: {statement}", statement=statement, point=point)
        self.statement = statement
        self.point = point
