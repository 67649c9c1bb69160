class BudgetExceeded(RuntimeError):
    """A search hit its node budget before reaching a verdict."""

    def __init__(self, message: str, nodes: int = 0):
        super().__init__(message)
        self.nodes = nodes


class NoPerfectMatching(RuntimeError):
    """Exhaustive search proved that no perfect matching exists."""
