"""Exception hierarchy shared across the package."""


class G2Error(Exception):
    """Base class for all domain errors."""


class NotMonicQuintic(G2Error):
    pass


class SingularCurve(G2Error):
    pass


class UnsupportedBranchConfiguration(G2Error):
    pass


class QuadratureNonConvergent(G2Error):
    pass


class NotPositiveDefinite(G2Error):
    pass


class DegenerateTheta(G2Error):
    pass


class PoleAtPoint(G2Error):
    pass


class InfinityNotSupported(G2Error):
    pass


class PathThroughBranchPoint(G2Error):
    pass


class NotOnThetaDivisor(G2Error):
    pass


class OnThetaDivisor(G2Error):
    pass


class OriginSingular(G2Error):
    pass


class UnsupportedOrder(G2Error):
    pass
