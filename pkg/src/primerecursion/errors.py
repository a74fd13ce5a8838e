"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class NonpositiveBracket(DomainError):
    """The bracket value is <= 0, so its -1/s power does not exist yet."""


class InvalidPrimeSeq(ValueError):
    """A seed is not the run of consecutive primes starting at 2."""


class Indecisive(Exception):
    """An interval comparison straddles its threshold at the current precision."""


class InternalInconsistency(RuntimeError):
    """A soundness check failed; results can no longer be trusted."""


class NotConverged(RuntimeError):
    """No certificate passed anywhere on the s schedule."""

    def __init__(self, s_max, report=None):
        super().__init__(f"no certificate passed for s <= {s_max}")
        self.s_max = s_max
        self.report = report
