"""Exception types raised by the topodiag library."""


class TopodiagError(Exception):
    """Base class for every error raised by topodiag."""


class GraphError(TopodiagError):
    """A graph is malformed or an operation's precondition on it fails."""


class DisconnectedGraphError(GraphError):
    """An operation that needs a connected graph received a disconnected one."""


class SpecError(TopodiagError):
    """A topology specification is invalid or unsupported for the request."""


class UnknownLemmaError(TopodiagError):
    """A lemma id is not present in the registry."""


class BudgetExceededError(TopodiagError):
    """A search ran past its node budget."""

    def __init__(self, limit: int, used: int, what: str = "search"):
        super().__init__(f"{what} exceeded its budget of {limit} nodes ({used} used)")
        self.limit = limit
        self.used = used
        self.what = what
