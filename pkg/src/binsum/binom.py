"""Exact arithmetic for the increasing sequences C(n, k) and n**k.

Everything here is integer exact. Python ints are arbitrary precision, so
no magnitude can overflow; floats appear only in the diagnostic ratio
helper and never feed back into exact logic.
"""
from __future__ import annotations

import math

__all__ = [
    "binom",
    "floor_index",
    "count_upto",
    "asymptotic_ratio",
    "gap",
    "BinomialSequence",
    "PowerSequence",
]


def _require_order(k: int) -> None:
    if k < 1:
        raise ValueError(f"order must be k >= 1, got k={k}")


def binom(n: int, k: int) -> int:
    """Binomial coefficient C(n, k), exactly.

    Computed as the falling-factorial product n(n-1)...(n-k+1) with division
    interleaved after each factor, so every intermediate value is an integer.
    No floats and no full factorials. Returns 0 for n < k; k = 0 gives 1.
    """
    if n < 0 or k < 0:
        raise ValueError(f"binom requires n >= 0 and k >= 0, got n={n}, k={k}")
    if k == 0 or k == n:
        return 1
    if n < k:
        return 0
    k = min(k, n - k)
    out = 1
    for i in range(1, k + 1):
        # out * (n - i + 1) is a product of i consecutive integers times a
        # binomial coefficient, hence divisible by i.
        out = out * (n - i + 1) // i
    return out


def _bracket_floor(value_at, lo: int, bound: int) -> int:
    """Largest n >= lo with value_at(n) <= bound.

    Assumes value_at is nondecreasing and value_at(lo) <= bound. Brackets the
    answer by doubling, then bisects.
    """
    hi = lo + 1
    while value_at(hi) <= bound:
        lo = hi
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if value_at(mid) <= bound:
            lo = mid
        else:
            hi = mid
    return lo


def floor_index(k: int, bound: int) -> int:
    """Largest n with C(n, k) <= bound, for k >= 1 and bound >= 1.

    bound >= 1 guarantees n = k qualifies. Orders 1 and 2 have closed forms;
    the rest use exponential bracketing plus binary search.
    """
    _require_order(k)
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    if k == 1:
        return bound
    if k == 2:
        n = (1 + math.isqrt(8 * bound + 1)) // 2
        while n * (n - 1) // 2 > bound:
            n -= 1
        while (n + 1) * n // 2 <= bound:
            n += 1
        return n
    return _bracket_floor(lambda n: binom(n, k), k, bound)


def count_upto(k: int, bound: int) -> int:
    """Number of indices n >= k with C(n, k) <= bound."""
    return floor_index(k, bound) - k + 1


def asymptotic_ratio(k: int, bound: int) -> float:
    """count_upto(k, X) divided by its leading-order size (k!)^(1/k) X^(1/k).

    Diagnostic only; the return value is a float.
    """
    exact = count_upto(k, bound)
    leading = math.factorial(k) ** (1.0 / k) * float(bound) ** (1.0 / k)
    return exact / leading


def gap(k: int, n: int) -> int:
    """Difference C(n+1, k) - C(n, k) between consecutive sequence elements.

    Pascal's rule says the difference equals C(n, k-1); both sides are
    computed and compared before returning.
    """
    _require_order(k)
    if n < k:
        raise ValueError(f"gap requires n >= k, got n={n}, k={k}")
    g = binom(n + 1, k) - binom(n, k)
    assert g == binom(n, k - 1), f"Pascal identity failed at k={k}, n={n}"
    return g


class BinomialSequence:
    """The strictly increasing values C(n, k) for n >= k, at a fixed k >= 1."""

    __slots__ = ("order",)
    kind = "binomial"

    def __init__(self, order: int) -> None:
        _require_order(order)
        self.order = order

    @property
    def first_index(self) -> int:
        return self.order

    def value(self, n: int) -> int:
        if n < self.order:
            raise ValueError(f"index must be n >= {self.order}, got {n}")
        return binom(n, self.order)

    def floor_index(self, bound: int) -> int:
        return floor_index(self.order, bound)

    def count_upto(self, bound: int) -> int:
        return count_upto(self.order, bound)

    def index_of(self, value: int) -> int | None:
        """Index n with C(n, k) == value, or None."""
        if value < 1:
            return None
        n = floor_index(self.order, value)
        return n if binom(n, self.order) == value else None

    def contains(self, value: int) -> bool:
        return self.index_of(value) is not None

    def values_upto(self, bound: int) -> list[int]:
        if bound < 1:
            return []
        hi = floor_index(self.order, bound)
        return [binom(n, self.order) for n in range(self.order, hi + 1)]

    def __repr__(self) -> str:
        return f"BinomialSequence(order={self.order})"


class PowerSequence:
    """The strictly increasing values n**k for n >= 1, at a fixed k >= 1.

    Comparison sequence for the multiplicity statistics: same index
    conventions as BinomialSequence but with first index 1.
    """

    __slots__ = ("order",)
    kind = "power"
    first_index = 1

    def __init__(self, order: int) -> None:
        _require_order(order)
        self.order = order

    def value(self, n: int) -> int:
        if n < 1:
            raise ValueError(f"index must be n >= 1, got {n}")
        return n**self.order

    def floor_index(self, bound: int) -> int:
        if bound < 1:
            raise ValueError(f"bound must be >= 1, got {bound}")
        if self.order == 1:
            return bound
        if self.order == 2:
            return math.isqrt(bound)
        return _bracket_floor(lambda n: n**self.order, 1, bound)

    def count_upto(self, bound: int) -> int:
        return self.floor_index(bound)

    def index_of(self, value: int) -> int | None:
        if value < 1:
            return None
        n = self.floor_index(value)
        return n if n**self.order == value else None

    def contains(self, value: int) -> bool:
        return self.index_of(value) is not None

    def values_upto(self, bound: int) -> list[int]:
        if bound < 1:
            return []
        return [n**self.order for n in range(1, self.floor_index(bound) + 1)]

    def __repr__(self) -> str:
        return f"PowerSequence(order={self.order})"
