"""Exception hierarchy for the toolkit."""


class StconnError(Exception):
    """Base class for all toolkit errors."""


class InvalidAssignment(StconnError):
    pass


class InvalidGraph(StconnError):
    pass


class UnknownEdge(StconnError):
    pass


class UnknownVertex(StconnError):
    pass


class IncompatibleProblems(StconnError):
    pass


class PreconditionViolated(StconnError):
    pass


class EnumerationCapExceeded(StconnError):
    pass


class EmptyPromise(StconnError):
    pass


class PromiseViolated(StconnError):
    pass


class SimulationTooLarge(StconnError):
    pass
