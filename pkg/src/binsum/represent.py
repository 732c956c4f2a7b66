"""Decompositions of integers into sums of binomial coefficients C(n, k).

Two families of tools live here. Constructive decompositions peel the
largest usable element and complete the small remainder (order 2 gets a
two-term completion, order 3 a greedy chain). Exact oracles answer "how few
summands suffice": a dense dynamic program over a whole range, and a
depth-limited search for single targets. The two admission policies,
repeated elements allowed or all elements distinct, are a mode shared by
every search entry point.
"""
from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .binom import BinomialSequence, binom, floor_index, gap
from .errors import ResourceBudgetError

__all__ = [
    "SearchMode",
    "Representation",
    "MinRepTable",
    "MinRepSurvey",
    "EXCEEDS_CAP",
    "CAP_MAX",
    "greedy_leading_term",
    "two_triangular",
    "greedy_chain",
    "decompose_k2",
    "decompose_k3",
    "minimal_representation",
    "min_rep_single",
    "min_rep_table",
    "survey_min_rep",
    "sumset_coverage_threshold",
]

# uint8 table cells: counts up to CAP_MAX are exact, EXCEEDS_CAP marks
# "no representation within the cap".
EXCEEDS_CAP = 255
CAP_MAX = 254

DEFAULT_MEMORY_BUDGET = 4 * 1024**3


class SearchMode(enum.Enum):
    """Summand admission policy for representation searches."""

    REPEATS = "repeats"
    DISTINCT = "distinct"

    @classmethod
    def coerce(cls, value: "SearchMode | str") -> "SearchMode":
        if isinstance(value, cls):
            return value
        return cls(value)


@dataclass(frozen=True)
class Representation:
    """A verified multiset of indices whose C(n, order) values sum to target.

    Indices are normalized to descending order. The sum is checked at
    construction, so an instance cannot exist in an inconsistent state.
    """

    target: int
    order: int
    indices: tuple[int, ...]
    distinct: bool = field(init=False)

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ValueError(f"order must be >= 1, got {self.order}")
        idx = tuple(sorted(self.indices, reverse=True))
        object.__setattr__(self, "indices", idx)
        if any(n < self.order for n in idx):
            raise ValueError(f"all indices must be >= {self.order}, got {idx}")
        total = sum(binom(n, self.order) for n in idx)
        if total != self.target:
            raise ValueError(
                f"indices sum to {total}, expected target {self.target}"
            )
        object.__setattr__(self, "distinct", len(set(idx)) == len(idx))

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(binom(n, self.order) for n in self.indices)

    def __len__(self) -> int:
        return len(self.indices)


def greedy_leading_term(target: int, k: int) -> tuple[int, int]:
    """Largest index n1 with C(n1, k) <= target, and the leftover.

    The leftover is strictly below the gap to the next element, which is
    what makes greedy peeling useful: for k = 2 it is below n1 itself.
    """
    if target < 1:
        raise ValueError(f"target must be >= 1, got {target}")
    n1 = floor_index(k, target)
    remainder = target - binom(n1, k)
    assert 0 <= remainder < gap(k, n1)
    return n1, remainder


def two_triangular(
    remainder: int, mode: SearchMode | str = SearchMode.REPEATS
) -> tuple[int, ...] | None:
    """Indices of at most two triangular numbers summing to remainder.

    Zero terms cover 0 and one term covers an exact triangular number.
    Otherwise ordered pairs a >= b are scanned with a descending, so the
    witness with the largest leading value wins. Distinct mode rejects
    a == b. Returns None when no such sum exists.
    """
    mode = SearchMode.coerce(mode)
    if remainder < 0:
        raise ValueError(f"remainder must be >= 0, got {remainder}")
    if remainder == 0:
        return ()
    a = floor_index(2, remainder)
    if binom(a, 2) == remainder:
        return (a,)
    while a >= 2:
        va = binom(a, 2)
        if 2 * va < remainder:
            return None
        rest = remainder - va
        if rest >= 1:
            b = floor_index(2, rest)
            if binom(b, 2) == rest and not (mode is SearchMode.DISTINCT and b == a):
                return (a, b)
        a -= 1
    return None


def greedy_chain(target: int, k: int, max_terms: int | None = None) -> list[int] | None:
    """Indices from repeatedly peeling the leading term until nothing is left.

    Always terminates (each step removes at least 1). Returns None when a
    term cap is given and the chain would exceed it.
    """
    if target < 1:
        raise ValueError(f"target must be >= 1, got {target}")
    indices: list[int] = []
    remainder = target
    while remainder:
        n, remainder = greedy_leading_term(remainder, k)
        indices.append(n)
        if max_terms is not None and len(indices) > max_terms:
            return None
    return indices


def _bounded_search(
    target: int, k: int, max_terms: int, mode: SearchMode
) -> tuple[int, ...] | None:
    """A representation of target with at most max_terms summands, or None.

    Depth-first over descending indices. The next index never exceeds the
    previous one (strictly below it in distinct mode) and never exceeds the
    floor index of the remainder; a branch dies once even max copies of its
    largest usable value cannot reach the remainder.
    """
    distinct = mode is SearchMode.DISTINCT

    def dfs(remainder: int, budget: int, index_cap: int) -> tuple[int, ...] | None:
        if remainder == 0:
            return ()
        if budget == 0:
            return None
        n = min(index_cap, floor_index(k, remainder))
        while n >= k:
            v = binom(n, k)
            if v * budget < remainder:
                return None
            rest = dfs(remainder - v, budget - 1, n - 1 if distinct else n)
            if rest is not None:
                return (n, *rest)
            n -= 1
        return None

    if target == 0:
        return ()
    return dfs(target, max_terms, floor_index(k, target))


def minimal_representation(
    target: int,
    k: int,
    h_max: int = 8,
    mode: SearchMode | str = SearchMode.REPEATS,
) -> Representation | None:
    """A representation of target with the fewest summands, up to h_max.

    Iterative deepening: term budgets are tried in increasing order, so the
    first hit is minimal. Returns None when even h_max terms do not suffice.
    """
    mode = SearchMode.coerce(mode)
    if target < 1:
        raise ValueError(f"target must be >= 1, got {target}")
    if h_max < 1:
        raise ValueError(f"h_max must be >= 1, got {h_max}")
    for budget in range(1, h_max + 1):
        found = _bounded_search(target, k, budget, mode)
        if found is not None:
            assert len(found) == budget
            return Representation(target, k, found)
    return None


def min_rep_single(
    target: int,
    k: int,
    h_max: int = 8,
    mode: SearchMode | str = SearchMode.REPEATS,
) -> int | None:
    """Minimal number of summands for a single target, or None above h_max.

    Agrees with min_rep_table wherever both apply; the table is the better
    tool for dense ranges, this one for isolated large targets.
    """
    rep = minimal_representation(target, k, h_max, mode)
    return None if rep is None else len(rep)


def decompose_k2(
    target: int, mode: SearchMode | str = SearchMode.REPEATS
) -> Representation | None:
    """At most three triangular summands for target, or None.

    Constructive route first: peel the largest triangular number, then
    complete the remainder with at most two more. Small targets (and some
    distinct-mode targets) defeat the construction; those fall back to an
    exhaustive search over all sums of at most three terms.
    """
    mode = SearchMode.coerce(mode)
    if target < 1:
        raise ValueError(f"target must be >= 1, got {target}")
    n1, remainder = greedy_leading_term(target, 2)
    tail = two_triangular(remainder, mode)
    if tail is not None:
        indices = (n1, *tail)
        if mode is SearchMode.REPEATS or len(set(indices)) == len(indices):
            return Representation(target, 2, indices)
    found = _bounded_search(target, 2, 3, mode)
    return None if found is None else Representation(target, 2, found)


def decompose_k3(target: int) -> Representation | None:
    """At most seven order-3 summands for target, or None.

    The greedy chain terminates within seven terms for every target tried so
    far; when it does not, a bounded exhaustive search takes over. A None
    would exhibit an integer with no seven-term representation at all.
    """
    if target < 1:
        raise ValueError(f"target must be >= 1, got {target}")
    chain = greedy_chain(target, 3, max_terms=7)
    if chain is not None:
        return Representation(target, 3, tuple(chain))
    found = _bounded_search(target, 3, 7, SearchMode.REPEATS)
    return None if found is None else Representation(target, 3, found)


@dataclass(frozen=True)
class MinRepTable:
    """Dense minimal-summand counts for every target in [0, range_end].

    counts is a uint8 array indexed by target - range_start; cells holding
    EXCEEDS_CAP mean "no representation within cap terms".
    """

    order: int
    range_start: int
    range_end: int
    cap: int
    mode: SearchMode
    counts: np.ndarray

    def count(self, target: int) -> int | None:
        if not (self.range_start <= target <= self.range_end):
            raise ValueError(
                f"target {target} outside [{self.range_start}, {self.range_end}]"
            )
        c = int(self.counts[target - self.range_start])
        return None if c == EXCEEDS_CAP else c


def _repeats_table(n: int, coins: list[int], cap: int) -> np.ndarray:
    """Unbounded-coin minimal counts over [0, n] as uint8.

    Layered reachability: layer t marks every target expressible as a sum of
    at most t coins, so the first layer that reaches a cell is exactly the
    DP value 1 + min(counts[N - v]). Vectorized as shifted ORs; stops early
    once a layer adds nothing or everything is reached.
    """
    counts = np.full(n + 1, EXCEEDS_CAP, dtype=np.uint8)
    counts[0] = 0
    reach = np.zeros(n + 1, dtype=bool)
    reach[0] = True
    if not coins:
        return counts
    coin_idx = np.asarray(coins, dtype=np.int64)
    layer = 0
    while layer < cap and not reach.all():
        layer += 1
        if layer == 1:
            new = reach.copy()
            new[coin_idx] = True
        else:
            prev = reach
            new = reach.copy()
            for v in coins:
                np.logical_or(new[v:], prev[: n + 1 - v], out=new[v:])
        newly = new & ~reach
        if not newly.any():
            break
        counts[newly] = layer
        reach = new
    return counts


def _distinct_table(n: int, coins: list[int], cap: int) -> np.ndarray:
    """Each-coin-at-most-once minimal counts over [0, n] as uint8.

    levels[t] holds the sums of exactly t distinct coins among those
    processed so far; coins are folded in one at a time with the level loop
    descending so no coin is used twice.
    """
    levels = np.zeros((cap + 1, n + 1), dtype=bool)
    levels[0, 0] = True
    for seen, v in enumerate(coins):
        for t in range(min(cap, seen + 1), 0, -1):
            np.logical_or(
                levels[t, v:], levels[t - 1, : n + 1 - v], out=levels[t, v:]
            )
    counts = np.full(n + 1, EXCEEDS_CAP, dtype=np.uint8)
    for t in range(cap, -1, -1):
        counts[levels[t]] = t
    return counts


def min_rep_table(
    k: int,
    range_end: int,
    cap: int = CAP_MAX,
    mode: SearchMode | str = SearchMode.REPEATS,
    *,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> MinRepTable:
    """Minimal summand counts for every target in [0, range_end].

    The default mode allows repeated elements (classic unbounded-coin DP);
    distinct mode bounds every element to a single use. Order 1 is the
    identity sequence, where every positive target is a single term.

    Estimated working memory above the budget raises ResourceBudgetError
    before any allocation.
    """
    mode = SearchMode.coerce(mode)
    if k < 1:
        raise ValueError(f"order must be >= 1, got k={k}")
    if range_end < 0:
        raise ValueError(f"range_end must be >= 0, got {range_end}")
    if not (1 <= cap <= CAP_MAX):
        raise ValueError(f"cap must be in [1, {CAP_MAX}], got {cap}")

    cells = range_end + 1
    arrays = 4 if mode is SearchMode.REPEATS else cap + 2
    required = arrays * cells
    if required > memory_budget:
        raise ResourceBudgetError(
            "min_rep_table working set exceeds the memory budget",
            required=required,
            budget=memory_budget,
        )

    if k == 1:
        counts = np.ones(cells, dtype=np.uint8)
        counts[0] = 0
        return MinRepTable(k, 0, range_end, cap, mode, counts)

    coins = BinomialSequence(k).values_upto(range_end)
    if mode is SearchMode.REPEATS:
        counts = _repeats_table(range_end, coins, cap)
    else:
        counts = _distinct_table(range_end, coins, cap)
    return MinRepTable(k, 0, range_end, cap, mode, counts)


@dataclass(frozen=True)
class MinRepSurvey:
    """Worst case of the minimal summand count over a target range."""

    order: int
    mode: SearchMode
    n_min: int
    n_max: int
    cap: int
    max_terms: int | None
    witnesses: tuple[tuple[int, int], ...]
    exceptions: tuple[int, ...]
    exception_count: int


def _chunk_ranges(lo: int, hi: int, chunk_size: int | None) -> list[tuple[int, int]]:
    if chunk_size is None or chunk_size <= 0:
        return [(lo, hi)]
    return [(a, min(a + chunk_size - 1, hi)) for a in range(lo, hi + 1, chunk_size)]


def survey_min_rep(
    k: int,
    n_min: int,
    n_max: int,
    mode: SearchMode | str = SearchMode.REPEATS,
    *,
    cap: int | None = None,
    max_witnesses: int = 10,
    max_exceptions: int = 100,
    chunk_size: int | None = None,
    threads: int = 1,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> MinRepSurvey:
    """Largest minimal summand count over [n_min, n_max], with witnesses.

    Builds the dense table once, then scans disjoint chunks of it (in a
    thread pool when threads > 1). The outcome does not depend on chunking
    or thread count: chunk maxima merge by max, witness and exception lists
    concatenate in ascending target order and are truncated to their
    configured limits. Targets with no representation within the cap are
    reported as exceptions, not failures.
    """
    mode = SearchMode.coerce(mode)
    if not (1 <= n_min <= n_max):
        raise ValueError(f"need 1 <= n_min <= n_max, got [{n_min}, {n_max}]")
    if cap is None:
        cap = CAP_MAX if mode is SearchMode.REPEATS else 8
    table = min_rep_table(k, n_max, cap, mode, memory_budget=memory_budget)
    counts = table.counts
    chunks = _chunk_ranges(n_min, n_max, chunk_size)

    def chunk_max(bounds: tuple[int, int]) -> int:
        lo, hi = bounds
        sub = counts[lo : hi + 1]
        valid = sub[sub != EXCEEDS_CAP]
        return int(valid.max()) if valid.size else -1

    def run(fn, items):
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                return list(pool.map(fn, items))
        return [fn(item) for item in items]

    maxima = run(chunk_max, chunks)
    best = max(maxima)
    max_terms = None if best < 0 else best

    def chunk_details(bounds: tuple[int, int]) -> tuple[list[int], list[int], int]:
        lo, hi = bounds
        sub = counts[lo : hi + 1]
        hits = (np.flatnonzero(sub == best)[:max_witnesses] + lo).tolist()
        missing = np.flatnonzero(sub == EXCEEDS_CAP)
        return hits, (missing[:max_exceptions] + lo).tolist(), int(missing.size)

    witnesses: list[tuple[int, int]] = []
    exceptions: list[int] = []
    exception_count = 0
    for hits, missing, missing_total in run(chunk_details, chunks):
        if max_terms is not None:
            witnesses.extend((n, max_terms) for n in hits)
        exceptions.extend(missing)
        exception_count += missing_total
    return MinRepSurvey(
        order=k,
        mode=mode,
        n_min=n_min,
        n_max=n_max,
        cap=cap,
        max_terms=max_terms,
        witnesses=tuple(witnesses[:max_witnesses]),
        exceptions=tuple(exceptions[:max_exceptions]),
        exception_count=exception_count,
    )


def sumset_coverage_threshold(
    r_max: int,
    mode: SearchMode | str = SearchMode.REPEATS,
    *,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> int:
    """Largest R <= r_max whose interval [ceil(R/2), R] misses some sum of
    at most two triangular numbers.

    An uncovered integer m blocks every R in [m, 2m], so the answer is
    min(2 * m, r_max) for the largest uncovered m, and 0 when every interval
    is fully covered. Distinct mode requires the two indices to differ; a
    lone triangular number or 0 still counts as covered in both modes.
    """
    mode = SearchMode.coerce(mode)
    if r_max < 1:
        raise ValueError(f"r_max must be >= 1, got {r_max}")
    required = 2 * (r_max + 1)
    if required > memory_budget:
        raise ResourceBudgetError(
            "coverage scan exceeds the memory budget",
            required=required,
            budget=memory_budget,
        )
    values = BinomialSequence(2).values_upto(r_max)
    reach = np.zeros(r_max + 1, dtype=bool)
    reach[0] = True

    if mode is SearchMode.REPEATS:
        singles = np.zeros(r_max + 1, dtype=bool)
        singles[0] = True
        for v in values:
            singles[v] = True
        for v in values:
            # pair sums v + T_b with T_b <= min(v, r_max - v)
            hi = min(2 * v, r_max)
            np.logical_or(reach[v : hi + 1], singles[: hi - v + 1], out=reach[v : hi + 1])
    else:
        seen = np.zeros(r_max + 1, dtype=bool)
        seen[0] = True  # v + 0 keeps lone triangulars covered
        for v in values:
            hi = min(2 * v, r_max)
            np.logical_or(reach[v : hi + 1], seen[: hi - v + 1], out=reach[v : hi + 1])
            seen[v] = True

    uncovered = np.flatnonzero(~reach[1:])
    if uncovered.size == 0:
        return 0
    m = int(uncovered[-1]) + 1
    return min(2 * m, r_max)
