"""Exception taxonomy shared by every layer of the kernel."""


class KernelError(Exception):
    """Base class for all structured errors raised by this package."""


class DivisionByZeroFunction(KernelError):
    """Division by a rational function that is identically zero."""


class ChartMismatch(KernelError):
    """Operands live over different coordinate charts."""


class FrameMismatch(KernelError):
    """Operands live over different (or non-dual) frames."""


class DegreeMismatch(KernelError):
    """Graded operands have incompatible degrees for the operation."""


class ZeroTopSection(KernelError):
    """A top-degree section required to be nowhere vanishing is zero."""


class NotChartFrame(KernelError):
    """Operation needs a coordinate (tangent/cotangent) frame."""


class NotClosed(KernelError):
    """A form required to be closed has nonzero exterior derivative."""


class SingularMetric(KernelError):
    """Pseudo-metric is degenerate over the function field."""


class InvalidAlgebroid(KernelError):
    """Structure functions or anchor violate the Lie algebroid axioms."""


class NotBialgebroid(KernelError):
    """The pair of algebroids fails the compatibility condition."""


class BadNormalization(KernelError):
    """Top sections are not normalized to unit dual pairing."""


class DependentFrame(KernelError):
    """Sections supposed to form a frame are linearly dependent."""


class NotPure(KernelError):
    """A spinor whose annihilator is not maximal isotropic of full rank."""


class DegeneratePairing(KernelError):
    """The spinor pairing against the conjugate vanishes identically."""


class NotIntegrable(KernelError):
    """The derivative of the spinor is not a Clifford multiple of it."""


class SingularBasis(KernelError):
    """A claimed basis fails to span (defensive; unreachable on valid data)."""


class LeakageOutsideAdjacent(KernelError):
    """A derivative has graded components beyond the two adjacent blocks."""


class RankDeficient(KernelError):
    """Kernel or eigenspace has unexpected rank over the function field."""


class OddDimension(KernelError):
    """Spinor pairing operations need an even-dimensional chart."""


class ScenarioError(KernelError):
    """Scenario file failed to parse or validate; carries a location hint."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location
