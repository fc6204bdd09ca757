"""Exception types shared across the package."""


class DomainError(ValueError):
    """A point lies outside the domain of the requested map."""


class IndeterminateError(ValueError):
    """Evaluation at a point where the map is 0/0-indeterminate."""


class PoleError(ValueError):
    """Evaluation too close to a pole of the map."""


class BranchError(ValueError):
    """No admissible branch exists (input on a slit or branch cut)."""


class UnivalenceError(ValueError):
    """A candidate domain map failed the injectivity checks.

    Carries a ``witness`` attribute when two boundary parameters were
    found mapping to nearly the same point.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class WeightBoundError(ValueError):
    """A weight field violates its stated upper/lower bounds."""


class SearchError(RuntimeError):
    """A numerical zero search exhausted its restarts without converging."""


class RefinementError(ValueError):
    """Sampled data is too coarse for the requested computation."""


class BracketError(RuntimeError):
    """A root bracket that theory guarantees was not found numerically."""
