"""Multiplicity statistics for h-fold sums from an increasing sequence.

For a fixed sequence and index bound, r(s) counts the ordered h-tuples of
indices whose values sum to s. Everything downstream (the second moment,
the number of distinct sums, the largest multiplicity and the
Cauchy-Schwarz floor it implies) is derived from that tally with exact
integer arithmetic.

Three interchangeable tally strategies produce identical counts:

  direct    enumerate every tuple (the oracle; cost len**h)
  mitm      enumerate both halves of the tuple, then convolve the two
            tallies (cost roughly len**ceil(h/2) plus the cross product
            of distinct half sums)
  convolve  fold the value list into a dense count array one factor at a
            time (cost (h-1) * len * max_sum; wins when sums are dense)

"auto" uses direct for h <= 2, then convolve when the dense array fits the
budget, then mitm.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .binom import BinomialSequence, PowerSequence
from .errors import ResourceBudgetError

__all__ = [
    "EnergyReport",
    "RestrictedTupleSpec",
    "RestrictedReport",
    "ExponentFit",
    "index_bound_for",
    "multiplicity_map",
    "energy_report",
    "restricted_distinct_sums",
    "fit_energy_exponent",
    "multiplicity_extremes",
]

SequenceLike = BinomialSequence | PowerSequence

DEFAULT_ENUMERATION_BUDGET = 20_000_000
DEFAULT_DENSE_BUDGET = 150_000_000
_PYTHON_FALLBACK_BUDGET = 1_000_000

STRATEGIES = ("auto", "direct", "mitm", "convolve")


def _resolve_sequence(k: int, sequence: SequenceLike | str | None) -> SequenceLike:
    if sequence is None or sequence == "binomial":
        return BinomialSequence(k)
    if sequence == "power":
        return PowerSequence(k)
    if isinstance(sequence, (BinomialSequence, PowerSequence)):
        if sequence.order != k:
            raise ValueError(
                f"sequence order {sequence.order} does not match k={k}"
            )
        return sequence
    raise ValueError(f"unknown sequence {sequence!r}")


def _admissible_values(seq: SequenceLike, index_bound: int) -> list[int]:
    if index_bound < seq.first_index:
        raise ValueError(
            f"index_bound must be >= {seq.first_index}, got {index_bound}"
        )
    return [seq.value(n) for n in range(seq.first_index, index_bound + 1)]


def _fits_int64(values: list[int], h: int) -> bool:
    return h * values[-1] < 2**62


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _tally_direct(values: list[int], h: int, budget: int) -> dict[int, int]:
    """Full h-fold enumeration. The oracle the other strategies must match."""
    tuples = len(values) ** h
    if tuples > budget:
        raise ResourceBudgetError(
            "direct enumeration exceeds the tuple budget",
            required=tuples,
            budget=budget,
        )
    if h == 1:
        return {v: 1 for v in values}
    if not _fits_int64(values, h):
        # Values too large for the int64 engine; enumerate with Python ints.
        if tuples > _PYTHON_FALLBACK_BUDGET:
            raise ResourceBudgetError(
                "direct enumeration of oversized values exceeds the "
                "Python-int budget",
                required=tuples,
                budget=_PYTHON_FALLBACK_BUDGET,
            )
        tally: dict[int, int] = {}
        for combo in product(values, repeat=h):
            s = sum(combo)
            tally[s] = tally.get(s, 0) + 1
        return tally
    arr = np.asarray(values, dtype=np.int64)
    sums = arr
    for _ in range(h - 1):
        sums = (sums[:, None] + arr[None, :]).ravel()
    keys, counts = np.unique(sums, return_counts=True)
    return {int(s): int(c) for s, c in zip(keys, counts)}


def _combine_tallies(
    left: dict[int, int], right: dict[int, int], budget: int
) -> dict[int, int]:
    """Convolution of two tallies: every cross pair, counts multiplied."""
    pairs = len(left) * len(right)
    if pairs > budget:
        raise ResourceBudgetError(
            "tally convolution exceeds the pair budget",
            required=pairs,
            budget=budget,
        )
    lk = np.fromiter(left.keys(), dtype=np.int64, count=len(left))
    lc = np.fromiter(left.values(), dtype=np.int64, count=len(left))
    rk = np.fromiter(right.keys(), dtype=np.int64, count=len(right))
    rc = np.fromiter(right.values(), dtype=np.int64, count=len(right))
    sums = (lk[:, None] + rk[None, :]).ravel()
    weights = (lc[:, None] * rc[None, :]).ravel()
    order = np.argsort(sums, kind="stable")
    sums = sums[order]
    weights = weights[order]
    starts = np.r_[0, np.flatnonzero(np.diff(sums)) + 1]
    totals = np.add.reduceat(weights, starts)
    return {int(s): int(c) for s, c in zip(sums[starts], totals)}


def _combine_python(left: dict[int, int], right: dict[int, int], budget: int) -> dict[int, int]:
    pairs = len(left) * len(right)
    if pairs > budget:
        raise ResourceBudgetError(
            "tally convolution exceeds the pair budget",
            required=pairs,
            budget=budget,
        )
    out: dict[int, int] = {}
    for s1, c1 in left.items():
        for s2, c2 in right.items():
            key = s1 + s2
            out[key] = out.get(key, 0) + c1 * c2
    return out


def _tally_mitm(values: list[int], h: int, budget: int) -> dict[int, int]:
    """Meet in the middle: tallies for both halves of the tuple, convolved."""
    if h == 1:
        return {v: 1 for v in values}
    left_h = h // 2
    right_h = h - left_h
    left = _tally_direct(values, left_h, budget)
    right = left if right_h == left_h else _tally_direct(values, right_h, budget)
    if _fits_int64(values, h):
        return _combine_tallies(left, right, budget)
    return _combine_python(left, right, budget)


def _dense_counts(
    values: list[int], h: int, dense_budget: int, threads: int = 1
) -> np.ndarray:
    """Dense array of tuple counts indexed by sum, via repeated convolution.

    Cell j after folding i factors counts the ordered i-tuples summing to j,
    so each fold is len(values) shifted adds. Counts are bounded by
    len(values)**(h-1) per cell, which picks the dtype. Exact integer
    arithmetic throughout; no floats, no FFT.
    """
    if not _fits_int64(values, h):
        raise ResourceBudgetError(
            "dense convolution needs sums below 2**62",
            required=h * values[-1],
            budget=2**62,
        )
    top = h * values[-1] + 1
    if top > dense_budget:
        raise ResourceBudgetError(
            "dense convolution exceeds the cell budget",
            required=top,
            budget=dense_budget,
        )
    dtype = np.int32 if len(values) ** (h - 1) < 2**31 else np.int64
    vals = np.asarray(values, dtype=np.int64)
    acc = np.zeros(values[-1] + 1, dtype=dtype)
    acc[vals] = 1
    for step in range(2, h + 1):
        nxt = np.zeros(step * values[-1] + 1, dtype=dtype)
        span = acc.size

        def fold(chunk: np.ndarray, out: np.ndarray) -> np.ndarray:
            for v in chunk:
                out[v : v + span] += acc
            return out

        if threads > 1 and len(values) >= 2 * threads:
            from concurrent.futures import ThreadPoolExecutor

            slices = np.array_split(vals, threads)
            parts = [np.zeros_like(nxt) for _ in slices]
            with ThreadPoolExecutor(max_workers=threads) as pool:
                list(pool.map(lambda sv: fold(sv[0], sv[1]), zip(slices, parts)))
            for part in parts:
                nxt += part
        else:
            fold(vals, nxt)
        acc = nxt
    return acc


def _dict_from_dense(arr: np.ndarray) -> dict[int, int]:
    keys = np.flatnonzero(arr)
    return {int(s): int(arr[s]) for s in keys}


def _pick_strategy(
    values: list[int], h: int, enumeration_budget: int, dense_budget: int
) -> str:
    if h <= 2 and len(values) ** h <= enumeration_budget:
        return "direct"
    if _fits_int64(values, h) and h * values[-1] + 1 <= dense_budget:
        return "convolve"
    return "mitm"


def _tally(
    values: list[int],
    h: int,
    strategy: str,
    enumeration_budget: int,
    dense_budget: int,
    threads: int = 1,
) -> tuple[dict[int, int] | None, np.ndarray | None]:
    """Dispatch to one strategy; returns (dict, None) or (None, dense array)."""
    if strategy not in STRATEGIES:
        raise ValueError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")
    if strategy == "auto":
        strategy = _pick_strategy(values, h, enumeration_budget, dense_budget)
    if strategy == "direct":
        return _tally_direct(values, h, enumeration_budget), None
    if strategy == "mitm":
        return _tally_mitm(values, h, enumeration_budget), None
    return None, _dense_counts(values, h, dense_budget, threads)


def multiplicity_map(
    k: int,
    h: int,
    index_bound: int,
    *,
    sequence: SequenceLike | str | None = None,
    strategy: str = "auto",
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET,
    dense_budget: int = DEFAULT_DENSE_BUDGET,
    threads: int = 1,
) -> dict[int, int]:
    """Tally {sum s: r(s)} over ordered h-tuples of indices in
    [first_index, index_bound].

    All strategies return identical exact counts; see the module docstring
    for their cost profiles.
    """
    if h < 1:
        raise ValueError(f"arity must be h >= 1, got {h}")
    seq = _resolve_sequence(k, sequence)
    values = _admissible_values(seq, index_bound)
    tally, dense = _tally(values, h, strategy, enumeration_budget, dense_budget, threads)
    if tally is not None:
        return tally
    return _dict_from_dense(dense)


def _aggregate(
    tally: dict[int, int] | None, dense: np.ndarray | None
) -> tuple[int, int, int, int]:
    """(total, energy, distinct, max multiplicity) from either tally form."""
    if tally is not None:
        total = sum(tally.values())
        energy = sum(c * c for c in tally.values())
        distinct = len(tally)
        max_mult = max(tally.values())
        return total, energy, distinct, max_mult
    assert dense is not None
    max_mult = int(dense.max())
    distinct = int(np.count_nonzero(dense))
    # int64 reductions only where the worst case provably fits
    if distinct * max_mult < 2**62:
        total = int(dense.sum(dtype=np.int64))
    else:
        total = sum(int(c) for c in dense[dense > 0])
    if distinct * max_mult * max_mult < 2**62:
        wide = dense.astype(np.int64)
        energy = int(wide @ wide)
    else:
        energy = sum(int(c) ** 2 for c in dense[dense > 0])
    return total, energy, distinct, max_mult


@dataclass(frozen=True)
class EnergyReport:
    """Aggregate multiplicity statistics for one (order, arity, bound) cell.

    total_tuples is the number of ordered h-tuples, energy the second moment
    sum of r(s)**2, and cs_lower_bound the Cauchy-Schwarz floor
    ceil(total**2 / energy) on the number of distinct sums. All fields are
    exact; the defining inequalities are checked at construction.
    """

    order: int
    arity: int
    index_bound: int
    value_bound: int | None
    sequence: str
    admissible_count: int
    total_tuples: int
    energy: int
    distinct_sums: int
    max_multiplicity: int
    cs_lower_bound: int

    def __post_init__(self) -> None:
        assert self.total_tuples == self.admissible_count**self.arity
        assert self.energy >= self.total_tuples
        assert self.distinct_sums * self.max_multiplicity >= self.total_tuples
        assert self.distinct_sums >= self.cs_lower_bound


def energy_report(
    k: int,
    h: int,
    index_bound: int,
    *,
    sequence: SequenceLike | str | None = None,
    value_bound: int | None = None,
    strategy: str = "auto",
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET,
    dense_budget: int = DEFAULT_DENSE_BUDGET,
    threads: int = 1,
) -> EnergyReport:
    """Exact multiplicity aggregates for h-fold sums up to index_bound."""
    if h < 1:
        raise ValueError(f"arity must be h >= 1, got {h}")
    seq = _resolve_sequence(k, sequence)
    values = _admissible_values(seq, index_bound)
    tally, dense = _tally(values, h, strategy, enumeration_budget, dense_budget, threads)
    total, energy, distinct, max_mult = _aggregate(tally, dense)
    count = len(values)
    return EnergyReport(
        order=k,
        arity=h,
        index_bound=index_bound,
        value_bound=value_bound,
        sequence=seq.kind,
        admissible_count=count,
        total_tuples=total,
        energy=energy,
        distinct_sums=distinct,
        max_multiplicity=max_mult,
        cs_lower_bound=_ceil_div(total * total, energy),
    )


def index_bound_for(
    k: int,
    bound: int,
    convention: str = "value",
    *,
    sequence: SequenceLike | str | None = None,
) -> int:
    """Index cap for a bound X: under the "value" convention every admitted
    value is <= X; under the literal "index" convention the indices
    themselves run up to X."""
    if convention == "value":
        return _resolve_sequence(k, sequence).floor_index(bound)
    if convention == "index":
        return bound
    raise ValueError(f"convention must be 'value' or 'index', got {convention!r}")


@dataclass(frozen=True)
class RestrictedTupleSpec:
    """Tuples whose every term is capped so the whole sum stays within budget.

    The per-term cap floor(c * X / h) is computed with exact rational
    arithmetic, so any h admissible values sum to at most c * X <= X.
    """

    order: int
    arity: int
    budget: int
    fraction: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "fraction", Fraction(self.fraction))
        if self.order < 1:
            raise ValueError(f"order must be >= 1, got {self.order}")
        if self.arity < 1:
            raise ValueError(f"arity must be >= 1, got {self.arity}")
        if self.budget < 1:
            raise ValueError(f"budget must be >= 1, got {self.budget}")
        if not (0 < self.fraction < 1):
            raise ValueError(f"fraction must be in (0, 1), got {self.fraction}")

    @property
    def per_term_cap(self) -> int:
        c = self.fraction
        return (c.numerator * self.budget) // (c.denominator * self.arity)


@dataclass(frozen=True)
class RestrictedReport:
    """EnergyReport plus the bounds specific to capped tuples.

    trivial_bound is admissible_count**(h-1): fixing all but one coordinate
    determines the last, so no sum can have a larger multiplicity.
    floor_lower_bound is ceil(total / max multiplicity), a second floor on
    the number of distinct sums. Both checks are asserted at construction.
    """

    spec: RestrictedTupleSpec
    report: EnergyReport
    per_term_cap: int
    max_index: int
    admissible_count: int
    trivial_bound: int
    floor_lower_bound: int

    def __post_init__(self) -> None:
        assert self.report.max_multiplicity <= self.trivial_bound
        assert self.report.distinct_sums >= self.floor_lower_bound

    @property
    def trivial_bound_ok(self) -> bool:
        return self.report.max_multiplicity <= self.trivial_bound

    @property
    def floor_ok(self) -> bool:
        return self.report.distinct_sums >= self.floor_lower_bound


def restricted_distinct_sums(
    spec: RestrictedTupleSpec,
    *,
    sequence: SequenceLike | str | None = None,
    strategy: str = "auto",
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET,
    dense_budget: int = DEFAULT_DENSE_BUDGET,
    threads: int = 1,
) -> RestrictedReport:
    """Multiplicity aggregates for tuples with per-term value cap
    floor(c * X / h)."""
    seq = _resolve_sequence(spec.order, sequence)
    cap = spec.per_term_cap
    if cap < 1:
        raise ValueError(
            f"per-term cap {cap} admits no values; raise the budget or fraction"
        )
    max_index = seq.floor_index(cap)
    values = _admissible_values(seq, max_index)
    assert spec.arity * values[-1] <= (
        spec.fraction.numerator * spec.budget // spec.fraction.denominator
    ) <= spec.budget
    tally, dense = _tally(
        values, spec.arity, strategy, enumeration_budget, dense_budget, threads
    )
    total, energy, distinct, max_mult = _aggregate(tally, dense)
    count = len(values)
    report = EnergyReport(
        order=spec.order,
        arity=spec.arity,
        index_bound=max_index,
        value_bound=spec.budget,
        sequence=seq.kind,
        admissible_count=count,
        total_tuples=total,
        energy=energy,
        distinct_sums=distinct,
        max_multiplicity=max_mult,
        cs_lower_bound=_ceil_div(total * total, energy),
    )
    return RestrictedReport(
        spec=spec,
        report=report,
        per_term_cap=cap,
        max_index=max_index,
        admissible_count=count,
        trivial_bound=count ** (spec.arity - 1),
        floor_lower_bound=_ceil_div(total, max_mult),
    )


@dataclass(frozen=True)
class ExponentFit:
    """Least-squares slope of log(energy) against log(bound).

    hypothesis_plausible records whether the fitted exponent sits below the
    comparison exponent 2h/k - 1; residual is the L2 norm of the log-scale
    fit residuals.
    """

    order: int
    arity: int
    sequence: str
    observations: tuple[tuple[int, int], ...]
    alpha_hat: float
    intercept: float
    residual: float
    comparison_exponent: float
    hypothesis_plausible: bool


def fit_energy_exponent(
    k: int,
    h: int,
    bounds: list[int],
    *,
    sequence: SequenceLike | str | None = None,
    strategy: str = "auto",
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET,
    dense_budget: int = DEFAULT_DENSE_BUDGET,
    threads: int = 1,
) -> ExponentFit:
    """Fit energy growth across value bounds; the index bound for each X is
    floor_index(k, X).

    Needs at least three strictly increasing bounds.
    """
    if len(bounds) < 3:
        raise ValueError(f"need at least 3 bounds, got {len(bounds)}")
    if any(b2 <= b1 for b1, b2 in zip(bounds, bounds[1:])):
        raise ValueError("bounds must be strictly increasing")
    seq = _resolve_sequence(k, sequence)
    observations = []
    for bound in bounds:
        report = energy_report(
            k,
            h,
            seq.floor_index(bound),
            sequence=seq,
            value_bound=bound,
            strategy=strategy,
            enumeration_budget=enumeration_budget,
            dense_budget=dense_budget,
            threads=threads,
        )
        observations.append((bound, report.energy))
    x = np.log([float(b) for b, _ in observations])
    y = np.log([float(e) for _, e in observations])
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.sum((slope * x + intercept - y) ** 2)))
    comparison = 2.0 * h / k - 1.0
    return ExponentFit(
        order=k,
        arity=h,
        sequence=seq.kind,
        observations=tuple(observations),
        alpha_hat=float(slope),
        intercept=float(intercept),
        residual=residual,
        comparison_exponent=comparison,
        hypothesis_plausible=bool(slope < comparison),
    )


def multiplicity_extremes(
    k: int,
    h: int,
    index_bound: int,
    top: int,
    *,
    sequence: SequenceLike | str | None = None,
    strategy: str = "auto",
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET,
    dense_budget: int = DEFAULT_DENSE_BUDGET,
    threads: int = 1,
) -> list[tuple[int, int]]:
    """The top sums by multiplicity: (s, r(s)) with r descending, ties by
    smaller s first."""
    if top < 1:
        raise ValueError(f"top must be >= 1, got {top}")
    if h < 1:
        raise ValueError(f"arity must be h >= 1, got {h}")
    seq = _resolve_sequence(k, sequence)
    values = _admissible_values(seq, index_bound)
    tally, dense = _tally(values, h, strategy, enumeration_budget, dense_budget, threads)
    if tally is not None:
        ranked = sorted(tally.items(), key=lambda item: (-item[1], item[0]))
        return ranked[:top]
    keys = np.flatnonzero(dense)
    counts = dense[keys]
    order = np.lexsort((keys, -counts))
    return [(int(keys[i]), int(counts[i])) for i in order[:top]]
