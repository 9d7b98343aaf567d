"""Exception hierarchy shared by all edgecalc modules."""


class EdgeCalcError(Exception):
    """Base class for all library errors."""


class ZeroPoint(EdgeCalcError):
    """The origin has no hyperspherical coordinates."""


class DegenerateAngles(EdgeCalcError):
    """A point lies on (or a stencil crosses) a polar/axial locus of a chart."""


class WrongChart(EdgeCalcError):
    pass


class OutOfDomain(EdgeCalcError):
    pass


class OnSingularSet(EdgeCalcError):
    """Evaluation point lies on one of the Coulomb singular sets."""


class CoalescenceOverlap(OnSingularSet):
    """Electron-electron coalescence inside chart U1 (radicand of ``v`` vanishes)."""


class NonpositiveArgument(EdgeCalcError):
    pass


class OrderOverflow(EdgeCalcError):
    pass


class PreconditionError(EdgeCalcError):
    pass


class TruncationBound(EdgeCalcError):
    """The spherical-harmonic cutoff ``l_max`` is too small for the requested weight."""


class ConfigError(EdgeCalcError):
    pass
