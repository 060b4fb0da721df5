"""Single-pass ground-set pruning for one budget or a geometric budget ladder.

The single-budget pruner streams the ground set once, keeping an element
when its marginal gain is at least ``delta * c(e) * f(A) / kappa``, tracking
the best feasible singleton on the side, and discarding the previous
checkpoint's elements whenever the running value has grown by more than a
factor ``n / epsilon`` since that checkpoint. The multi-budget variant runs
one such pruner per rung of a geometric budget ladder and returns the union
of their outputs.

Closed-form companions to the pruners live here as well: the pruned-set
size bound, the worst-case retention ratios, the ladder-size formula, the
big-item cost check, and the geometric-growth step count they rest on.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .errors import InputError

__all__ = [
    "PruneParams",
    "LadderParams",
    "DeletionEvent",
    "SinglePrunerState",
    "PruneReport",
    "process_element",
    "quickprune_single",
    "quickprune",
    "budget_ladder",
    "ladder_size",
    "size_bound",
    "alpha_single",
    "alpha_multi",
    "check_nhi",
    "geometric_recovery_steps",
]

# Tolerance for the ladder's boundary rung; absorbs float drift in the
# repeated multiplication without admitting a genuinely out-of-range rung.
_LADDER_RTOL = 1e-12


@dataclass(frozen=True)
class PruneParams:
    """Single-budget pruner knobs: budget, add-threshold scale, deletion rate."""

    kappa: float
    delta: float
    epsilon: float

    def __post_init__(self):
        if self.kappa <= 0:
            raise InputError("kappa must be positive")
        if self.delta <= 0:
            raise InputError("delta must be positive")
        if self.epsilon <= 0:
            raise InputError("epsilon must be positive")


@dataclass(frozen=True)
class LadderParams:
    """Multi-budget pruner knobs over the range [kappa_min, kappa_max]."""

    kappa_min: float
    kappa_max: float
    eta: float
    delta: float
    epsilon: float

    def __post_init__(self):
        if not 0 < self.kappa_min <= self.kappa_max:
            raise InputError("need 0 < kappa_min <= kappa_max")
        if not 0 < self.eta <= 0.5:
            raise InputError("eta must lie in (0, 1/2]")
        if self.delta <= 0:
            raise InputError("delta must be positive")
        if self.epsilon <= 0:
            raise InputError("epsilon must be positive")


@dataclass(frozen=True)
class DeletionEvent:
    """One firing of the checkpoint rule.

    ``removed`` is empty for the start-up firing that merely installs the
    first checkpoint (nothing existed to delete yet).
    """

    stream_pos: int
    trigger: int
    removed: tuple
    value_before: float
    value_after: float


class SinglePrunerState:
    """Mutable state of one single-budget pruner.

    Invariants kept by ``process_element``: the checkpoint is always a subset
    of the working set; cached values equal fresh oracle evaluations of their
    sets; every retained element and the best singleton fit the budget.
    ``ever_added`` accumulates every element that ever entered the working
    set, for deletion-loss instrumentation.
    """

    __slots__ = (
        "working", "working_set", "checkpoint", "checkpoint_set",
        "best_single", "f_working", "f_checkpoint", "f_best_single",
        "ever_added", "add_records", "events", "deletions", "processed",
    )

    def __init__(self):
        self.working = []           # retained elements, in add order
        self.working_set = set()
        self.checkpoint = ()        # snapshot of `working` at last checkpoint
        self.checkpoint_set = set()
        self.best_single = None
        self.f_working = 0.0
        self.f_checkpoint = 0.0
        self.f_best_single = 0.0
        self.ever_added = set()
        self.add_records = []       # (element, gain at add, cost)
        self.events = []
        self.deletions = 0
        self.processed = 0

    def pruned_set(self) -> set:
        out = set(self.working_set)
        if self.best_single is not None:
            out.add(self.best_single)
        return out


@dataclass
class PruneReport:
    """What a pruning run did: output, query cost, deletion activity."""

    pruned: frozenset
    oracle_calls: int
    deletions: int
    per_budget_sizes: dict
    elapsed: float
    n: int
    events: list = field(default_factory=list)
    instrumentation: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "pruned_size": len(self.pruned),
            "oracle_calls": self.oracle_calls,
            "deletions": self.deletions,
            "per_budget_sizes": {str(k): v for k, v in self.per_budget_sizes.items()},
            "elapsed_seconds": self.elapsed,
            "n": self.n,
            "deletion_log": [
                {
                    "stream_pos": e.stream_pos,
                    "trigger": e.trigger,
                    "removed": sorted(e.removed),
                    "value_before": e.value_before,
                    "value_after": e.value_after,
                }
                for e in self.events
            ],
            "instrumentation": self.instrumentation,
        }


def process_element(state: SinglePrunerState, oracle, cost_fn, params: PruneParams,
                    n: int, e: int) -> SinglePrunerState:
    """Feed one element through the single-budget pruning rules, in order:
    budget guard, add rule, best-singleton update, checkpoint deletion.

    Costs at most two fresh oracle queries (one when the working set is
    empty, where the singleton value doubles as the marginal), plus one
    re-evaluation when a deletion actually removes elements.
    """
    if n < 1:
        raise InputError("ground-set size n must be >= 1")
    state.processed += 1
    cost = cost_fn(e)
    if cost > params.kappa:
        return state
    already_in = e in state.working_set
    if already_in:
        # Duplicate of a retained element: marginal is zero by idempotence,
        # which can never satisfy a positive threshold, and the singleton
        # comparison was already made. One query keeps the accounting flat.
        gain = 0.0
        f_single = oracle.eval({e})
    elif not state.working:
        f_single = oracle.eval({e})
        gain = f_single - state.f_working
    else:
        gain = oracle.marginal(e, state.working_set, state.f_working)
        f_single = oracle.eval({e})
    if not already_in and gain >= params.delta * cost * state.f_working / params.kappa:
        state.working.append(e)
        state.working_set.add(e)
        state.ever_added.add(e)
        state.f_working += gain
        state.add_records.append((e, gain, cost))
    if f_single > state.f_best_single:
        state.best_single = e
        state.f_best_single = f_single
    if state.f_working > (n / params.epsilon) * state.f_checkpoint:
        removed = tuple(state.checkpoint)
        value_before = state.f_working
        if removed:
            removed_set = state.checkpoint_set
            state.working = [v for v in state.working if v not in removed_set]
            state.working_set.difference_update(removed_set)
            # Fresh evaluation rather than a cache adjustment: deletions are
            # the one place the incremental value would go stale.
            state.f_working = oracle.eval(state.working_set) if state.working else 0.0
            state.deletions += 1
        state.checkpoint = tuple(state.working)
        state.checkpoint_set = set(state.working)
        state.f_checkpoint = state.f_working
        state.events.append(DeletionEvent(
            stream_pos=state.processed - 1,
            trigger=e,
            removed=removed,
            value_before=value_before,
            value_after=state.f_working,
        ))
    return state


def quickprune_single(stream, oracle, cost_fn, params: PruneParams, n: int,
                      instrument: bool = False):
    """Prune the ground set for one budget in a single streaming pass.

    Returns ``(pruned_ids, report)`` where the pruned set is the retained
    working set plus the best feasible singleton. Each stream element is
    touched exactly once; a rejected element is never revisited. With
    ``instrument=True`` the report additionally carries the value of the
    surviving set and of everything ever added (two extra queries, issued
    after the pass and excluded from the reported call count).
    """
    if n < 1:
        raise InputError("ground-set size n must be >= 1")
    if params.epsilon >= n:
        raise InputError("epsilon must be smaller than the ground-set size")
    start = time.monotonic()
    calls_before = oracle.query_count
    state = SinglePrunerState()
    for e in stream:
        process_element(state, oracle, cost_fn, params, n, e)
    pruned = frozenset(state.pruned_set())
    oracle_calls = oracle.query_count - calls_before
    report = PruneReport(
        pruned=pruned,
        oracle_calls=oracle_calls,
        deletions=state.deletions,
        per_budget_sizes={params.kappa: len(pruned)},
        elapsed=time.monotonic() - start,
        n=n,
        events=list(state.events),
    )
    if instrument:
        f_surviving = oracle.eval(state.working_set) if state.working_set else 0.0
        f_ever_added = oracle.eval(state.ever_added) if state.ever_added else 0.0
        report.instrumentation = {
            "f_surviving": f_surviving,
            "f_ever_added": f_ever_added,
            "ever_added_size": len(state.ever_added),
        }
    return set(pruned), report


def budget_ladder(kappa_min: float, kappa_max: float, eta: float) -> list:
    """Geometric budget rungs kappa_max * (1 - eta)^i down to (1 - eta) * kappa_min.

    Exactly the set {kappa_max * (1-eta)^i : i >= 0,
    (1-eta) * kappa_min <= rung <= kappa_max}, sorted descending.
    """
    if not 0 < kappa_min <= kappa_max:
        raise InputError("need 0 < kappa_min <= kappa_max")
    if not 0 < eta <= 0.5:
        raise InputError("eta must lie in (0, 1/2]")
    lo = (1.0 - eta) * kappa_min
    cutoff = lo * (1.0 - _LADDER_RTOL)
    rungs = []
    tau = float(kappa_max)
    while tau >= cutoff:
        rungs.append(tau)
        tau *= 1.0 - eta
    return rungs


def ladder_size(kappa_min: float, kappa_max: float, eta: float) -> int:
    """Closed-form rung count of ``budget_ladder`` for the same arguments."""
    if not 0 < kappa_min <= kappa_max:
        raise InputError("need 0 < kappa_min <= kappa_max")
    if not 0 < eta <= 0.5:
        raise InputError("eta must lie in (0, 1/2]")
    span = math.log(kappa_max / ((1.0 - eta) * kappa_min))
    step = math.log(1.0 / (1.0 - eta))
    return int(math.floor(span / step + 1e-9)) + 1


def quickprune(stream, oracle, cost_fn, params: LadderParams, n: int):
    """Prune for every budget in [kappa_min, kappa_max] in one streaming pass.

    One single-budget pruner runs per ladder rung; every stream element is
    fed to all of them; the result is the union of the per-rung outputs.
    """
    if n < 1:
        raise InputError("ground-set size n must be >= 1")
    if params.epsilon >= n:
        raise InputError("epsilon must be smaller than the ground-set size")
    start = time.monotonic()
    calls_before = oracle.query_count
    rungs = budget_ladder(params.kappa_min, params.kappa_max, params.eta)
    per_rung = [
        (PruneParams(kappa=tau, delta=params.delta, epsilon=params.epsilon),
         SinglePrunerState())
        for tau in rungs
    ]
    for e in stream:
        for rung_params, state in per_rung:
            process_element(state, oracle, cost_fn, rung_params, n, e)
    union = set()
    sizes = {}
    events = []
    deletions = 0
    for (rung_params, state), tau in zip(per_rung, rungs):
        out = state.pruned_set()
        sizes[tau] = len(out)
        union |= out
        deletions += state.deletions
        events.extend(state.events)
    report = PruneReport(
        pruned=frozenset(union),
        oracle_calls=oracle.query_count - calls_before,
        deletions=deletions,
        per_budget_sizes=sizes,
        elapsed=time.monotonic() - start,
        n=n,
        events=events,
    )
    return union, report


def size_bound(n: float, kappa: float, delta: float, c_min: float, epsilon: float) -> float:
    """Worst-case pruned-set size for one budget:
    2 * (1 + kappa / (delta * c_min)) * ln(n / epsilon) + 3.

    Natural logarithm throughout. ``c_min`` is the smallest cost among
    elements that fit the budget (others never enter the working set).
    """
    if min(n, kappa, delta, c_min, epsilon) <= 0:
        raise InputError("all size-bound arguments must be positive")
    if n / epsilon <= 1.0:
        raise InputError("size bound requires n / epsilon > 1")
    return 2.0 * (1.0 + kappa / (delta * c_min)) * math.log(n / epsilon) + 3.0


def _validate_alpha_args(delta: float, epsilon: float, gamma: float):
    if delta <= 0:
        raise InputError("delta must be positive")
    if epsilon < 0:
        raise InputError("epsilon must be non-negative")
    if not 0 < gamma <= 1:
        raise InputError("gamma must lie in (0, 1]")
    if epsilon / gamma > 1.0:
        raise InputError("epsilon / gamma must not exceed 1")


def alpha_single(delta: float, epsilon: float, gamma: float) -> float:
    """Worst-case fraction of the single-budget optimum retained in the
    pruned set: delta * gamma^4 * (1 - epsilon / gamma)
    / (2 * (delta * gamma^2 + 1) * (1 + delta / gamma)).
    """
    _validate_alpha_args(delta, epsilon, gamma)
    numer = delta * gamma ** 4 * (1.0 - epsilon / gamma)
    denom = 2.0 * (delta * gamma ** 2 + 1.0) * (1.0 + delta / gamma)
    return numer / denom


def alpha_multi(delta: float, epsilon: float, gamma: float) -> float:
    """Worst-case retention across the whole budget range: the single-budget
    ratio with an extra gamma / 3 factor."""
    return alpha_single(delta, epsilon, gamma) * gamma / 3.0


def check_nhi(solution, cost_fn, kappa: float, eta: float) -> bool:
    """True iff no element of ``solution`` costs more than kappa * (1 - eta).

    The multi-budget retention guarantee assumes an optimal solution passes
    this check at every budget in the range. Vacuously true when empty.
    """
    limit = kappa * (1.0 - eta)
    return all(cost_fn(v) <= limit for v in solution)


def geometric_recovery_steps(beta: float, g: float) -> int:
    """Steps of growth by at least (1 + beta) needed to recover a factor 1/g.

    The smallest integer m >= ((beta + 1) / beta) * ln(1 / g); any positive
    sequence with y_i >= (1 + beta) * y_{i-1} for m such steps satisfies
    y_m >= y_0 / g. This is the counting argument behind the pruned-set size
    bound: between checkpoints the working set's value must grow
    geometrically, so only boundedly many elements fit before a deletion.
    """
    if beta <= 0:
        raise InputError("beta must be positive")
    if not 0 < g <= 1:
        raise InputError("g must lie in (0, 1]")
    return max(0, math.ceil((beta + 1.0) / beta * math.log(1.0 / g)))
