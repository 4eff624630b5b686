"""Exception types raised by incrcomm."""


class IncrCommError(Exception):
    """Base class for all library errors."""


class NonPositiveWeight(IncrCommError, ValueError):
    pass


class SelfLoopRejected(IncrCommError, ValueError):
    pass


class UnknownNode(IncrCommError, KeyError):
    pass


class UnassignedNode(IncrCommError, KeyError):
    pass


class UnknownCommunity(IncrCommError, KeyError):
    pass


class AlreadyAssigned(IncrCommError, ValueError):
    pass


class SelfMerge(IncrCommError, ValueError):
    pass


class EmptyGraph(IncrCommError, ValueError):
    pass


class MalformedLine(IncrCommError, ValueError):
    def __init__(self, lineno: int, line: str, reason: str = "") -> None:
        self.lineno = lineno
        self.line = line
        msg = f"line {lineno}: cannot parse {line!r}"
        if reason:
            msg += f" ({reason})"
        super().__init__(msg)


class EmptyInput(IncrCommError, ValueError):
    pass


class TooFewEdges(IncrCommError, ValueError):
    pass


class NoEventsProcessed(IncrCommError, RuntimeError):
    pass


class UnknownNodeInPartitionFile(IncrCommError, ValueError):
    pass
