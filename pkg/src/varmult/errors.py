"""Exception types raised across the package."""


class SizeMismatchError(ValueError):
    """Two grid objects that must share a size do not."""


class HypothesisError(ValueError):
    """Exponents outside the range where the maximal bound is claimed."""


class InvariantError(AssertionError):
    """A verified property failed."""

    def __init__(self, prop, detail=""):
        self.prop = prop
        super().__init__(f"{prop}: {detail}" if detail else prop)
