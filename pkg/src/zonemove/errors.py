"""Exception hierarchy.

Everything raised on purpose by the compiler derives from ``ZoneMoveError`` so
callers (the CLI in particular) can map failures to exit codes without
catching unrelated bugs.
"""


class ZoneMoveError(Exception):
    """Base class for all compiler errors."""


# circuit input
class CircuitError(ZoneMoveError):
    pass


class MalformedInput(CircuitError):
    pass


class QubitOutOfRange(CircuitError):
    pass


class SelfPair(CircuitError):
    pass


class DuplicateGateInBlock(CircuitError):
    pass


# benchmark generation
class BenchSpecError(ZoneMoveError):
    pass


class InfeasibleSpec(BenchSpecError):
    pass


class DegenerateSpec(BenchSpecError):
    pass


# hardware / layout
class SiteOutOfBounds(ZoneMoveError):
    pass


class InsufficientCapacity(ZoneMoveError):
    pass


# routing
class RoutingError(ZoneMoveError):
    pass


class InsufficientStorage(RoutingError):
    pass


class InsufficientCompute(RoutingError):
    pass


class UnplacedQubit(RoutingError):
    pass


class StaleMove(RoutingError):
    pass


class OccupancyViolation(RoutingError):
    pass


# scheduling / evaluation
class EmptyInput(ZoneMoveError):
    pass


class InvalidAodCount(ZoneMoveError):
    pass


class DecoherenceOverflow(ZoneMoveError):
    pass


class InconsistentCounters(ZoneMoveError):
    pass


class IncompleteTimeline(ZoneMoveError):
    pass
