"""Exception types shared across the package."""


class MimError(Exception):
    """Base class for all domain errors."""


# -- scene model ------------------------------------------------------------

class DuplicateId(MimError):
    pass


class UnknownId(MimError):
    pass


class InvalidGeometry(MimError):
    pass


class UnresolvedAnchor(MimError):
    pass


class RuleViolation(MimError):
    pass


class NonOrthogonal(MimError):
    pass


class EndpointMismatch(MimError):
    pass


# -- routing ----------------------------------------------------------------

class RoutingFailed(MimError):
    pass


class DegenerateTerminals(RoutingFailed):
    pass


class Unreachable(RoutingFailed):
    """A search queue emptied before termination; internal error on connected grids."""


class BrokenChain(RoutingFailed):
    """A predecessor pointer was missing during path reconstruction."""


# -- persistence ------------------------------------------------------------

class InvalidMap(MimError):
    """Serialization/export requested for a map that fails validation."""


class MalformedXml(MimError):
    pass


class SchemaViolation(MimError):
    pass


class UnsupportedVersion(MimError):
    pass
