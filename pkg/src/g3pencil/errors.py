"""Exception types raised across the package.

Every error deliberately raised by this package derives from
:class:`G3PencilError`, so callers (and the CLI) can catch one base class
and map the concrete class name to a machine-readable category.
"""


class G3PencilError(Exception):
    """Base class for all errors raised by g3pencil."""


class NonIsotropicInput(G3PencilError):
    """An operation restricted to isotropic vectors received one with x != 0."""


class ZeroVector(G3PencilError):
    """Normalization of a vector whose norm is numerically zero."""


class ParseError(G3PencilError):
    """Expression text could not be parsed.

    Carries the byte offset of the failure and a description of what was
    expected there.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class DomainError(G3PencilError):
    """Expression evaluation left the domain of one of its sub-expressions."""


class CurvatureVanishes(G3PencilError):
    """The curvature dropped below the configured floor at parameter s."""

    def __init__(self, s: float, kappa: float):
        super().__init__(f"curvature {kappa:g} below floor at s = {s:g}")
        self.s = s
        self.kappa = kappa


class TorsionVanishes(G3PencilError):
    """The torsion dropped below the configured floor at parameter s."""

    def __init__(self, s: float, tau: float):
        super().__init__(f"torsion {tau:g} below floor at s = {s:g}")
        self.s = s
        self.tau = tau


class InfeasibleLambda(G3PencilError):
    """The requested invariant value is unreachable at parameter s.

    Raised when the radicand of the binormal component turns negative,
    i.e. the feasibility bound on lambda is violated.
    """

    def __init__(self, s: float, ratio: float):
        super().__init__(
            f"invariant infeasible at s = {s:g}: |ratio| = {abs(ratio):g} exceeds 1"
        )
        self.s = s
        self.ratio = ratio


class SigmaVanishes(G3PencilError):
    """The scale function sigma(s) is numerically zero at parameter s."""

    def __init__(self, s: float):
        super().__init__(f"sigma(s) vanishes at s = {s:g}")
        self.s = s


class ZeroMarchingFactor(G3PencilError):
    """A product-form factor that must stay nonzero vanishes at parameter s."""

    def __init__(self, factor: str, s: float):
        super().__init__(f"marching factor {factor}(s) vanishes at s = {s:g}")
        self.factor = factor
        self.s = s


class NotProductForm(G3PencilError):
    """Control coefficients require a marching scale in product form."""


class ClassMismatch(G3PencilError):
    """The curve's classification does not match the requested special case."""


class SchemaError(G3PencilError):
    """A configuration document violates the published schema.

    ``path`` locates the offending entry inside the document, for example
    ``marching_scale.synthesis.lambda``.
    """

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
