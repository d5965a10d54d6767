"""Oracle query accounting for the classical/quantum separation experiment."""

from enum import Enum as PyEnum

from core.models import BitString, BooleanFunction


class QueryMethod(str, PyEnum):
    """How the oracle was consulted."""

    CLASSICAL = "classical"
    QUANTUM = "quantum"


class QueryTracker:
    """Count oracle queries per method and enforce optional hard budgets."""

    def __init__(
        self,
        f: BooleanFunction,
        budgets: dict[QueryMethod, int] | None = None,
    ):
        self.function = f
        self.budgets = dict(budgets or {})
        self._counts: dict[QueryMethod, int] = {m: 0 for m in QueryMethod}

    def log_query(self, method: QueryMethod, count: int = 1) -> int:
        """
        Record queries.

        Returns:
            Total queries of this method so far

        Raises:
            QueryBudgetExhausted: If the budget would be exceeded
        """
        budget = self.budgets.get(method)
        if budget is not None and self._counts[method] + count > budget:
            raise QueryBudgetExhausted(
                f"{method.value} query budget of {budget} exhausted",
                used=self._counts[method],
                budget=budget,
            )
        self._counts[method] += count
        return self._counts[method]

    def evaluate(self, x: BitString | int) -> int:
        """One classical oracle call f(x); returns the output value."""
        value = x.value if isinstance(x, BitString) else int(x)
        self.log_query(QueryMethod.CLASSICAL)
        return int(self.function.truth_table[value])

    @property
    def classical_queries(self) -> int:
        return self._counts[QueryMethod.CLASSICAL]

    @property
    def quantum_queries(self) -> int:
        return self._counts[QueryMethod.QUANTUM]


class QueryBudgetExhausted(Exception):
    """Raised when a query budget is exhausted."""

    def __init__(self, message: str, used: int, budget: int):
        super().__init__(message)
        self.used = used
        self.budget = budget
