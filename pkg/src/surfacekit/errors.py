"""Exception hierarchy.

Every geometric failure derives from :class:`GeometryError`; the CLI maps
these to exit code 2.
"""


class GeometryError(Exception):
    """Base class for failures of a geometric precondition."""


class NotLoxodromic(GeometryError):
    pass


class SharedEndpoint(GeometryError):
    pass


class IntersectingAxes(GeometryError):
    pass


class DegenerateHexagon(GeometryError):
    pass


class NonLoxodromicCuff(GeometryError):
    pass


class HalfLengthMismatch(GeometryError):
    pass


class FootInconsistency(GeometryError):
    pass


class RelationViolated(GeometryError):
    pass


class NotAdmissible(GeometryError):
    pass


class NotLegal(GeometryError):
    pass


class DegeneratePants(GeometryError):
    pass


class NotFuchsian(GeometryError):
    pass


class DepthInsufficient(GeometryError):
    pass


class MassMismatch(GeometryError):
    pass


class SizeMismatch(GeometryError):
    pass


class NotSymmetric(GeometryError):
    pass


class InfeasibleSystem(GeometryError):
    pass


class MatchInfeasible(GeometryError):
    """No bijection within the distance budget exists.

    ``witness`` is a Hall violator: a subset ``C`` of the left side whose
    admissible partners ``neighbors`` number fewer than ``len(C)``.
    """

    def __init__(self, message, witness=(), neighbors=(), key=None):
        super().__init__(message)
        self.witness = tuple(witness)
        self.neighbors = tuple(neighbors)
        self.key = key


class NotSchottky(GeometryError):
    pass
