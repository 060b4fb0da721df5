"""Downstream heuristics run on pruned or full ground sets.

``greedy_cardinality`` and ``greedy_knapsack`` are lazy (priority-queue)
greedy implementations; stale heap keys are upper bounds on true marginals
for submodular objectives, so re-verifying the top of the heap before each
commit reproduces the naive greedy selection exactly, including id-order
tie-breaking. ``brute_force_opt`` is the exhaustive verification oracle used
to check retention guarantees at desk scale.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .errors import InputError

__all__ = [
    "Solution",
    "greedy_cardinality",
    "greedy_knapsack",
    "brute_force_opt",
    "cardinality_solver",
    "knapsack_solver",
]


@dataclass(frozen=True)
class Solution:
    """A feasible solution with its value, cost and query bill."""

    ids: frozenset
    value: float
    cost: float
    oracle_calls: int

    def to_json_dict(self) -> dict:
        return {
            "ids": sorted(self.ids),
            "value": self.value,
            "cost": self.cost,
            "oracle_calls": self.oracle_calls,
        }


def greedy_cardinality(oracle, U, k: int) -> Solution:
    """Standard greedy under a size constraint, lazily evaluated.

    Selects up to ``k`` elements, each round committing the element with the
    largest fresh marginal gain, ties going to the smaller id. Equivalent to
    naive greedy whenever the oracle is submodular.
    """
    if k < 0:
        raise InputError("k must be non-negative")
    ids = sorted(set(U))
    start_calls = oracle.query_count
    chosen = set()
    value = 0.0
    if k > 0 and ids:
        # Heap entries are (-gain, id, stamp); an entry is fresh iff its
        # stamp equals the current solution size.
        heap = [(-oracle.eval({v}), v, 0) for v in ids]
        heapq.heapify(heap)
        while heap and len(chosen) < k:
            neg_gain, v, stamp = heapq.heappop(heap)
            if stamp == len(chosen):
                chosen.add(v)
                value += -neg_gain
            else:
                gain = oracle.marginal(v, chosen, value)
                heapq.heappush(heap, (-gain, v, len(chosen)))
    final_value = oracle.eval(chosen) if chosen else 0.0
    return Solution(
        ids=frozenset(chosen),
        value=final_value,
        cost=float(len(chosen)),
        oracle_calls=oracle.query_count - start_calls,
    )


def greedy_knapsack(oracle, cost_fn, U, kappa: float) -> Solution:
    """Budgeted greedy: cost-benefit selection compared against the best
    feasible singleton, returning whichever scores higher.

    The density pass lazily commits the element with the best fresh
    gain-to-cost ratio that still fits the remaining budget; elements that
    stop fitting are dropped for good since the remaining budget only
    shrinks.
    """
    if kappa <= 0:
        raise InputError("kappa must be positive")
    ids = sorted(set(U))
    start_calls = oracle.query_count
    costs = {}
    feasible = []
    for v in ids:
        c = float(cost_fn(v))
        if c <= kappa:
            costs[v] = c
            feasible.append(v)
    chosen = set()
    value = 0.0
    spent = 0.0
    best_single = None
    best_single_value = 0.0
    if feasible:
        heap = []
        for v in feasible:
            f_single = oracle.eval({v})
            if f_single > best_single_value:
                best_single = v
                best_single_value = f_single
            heap.append((-f_single / costs[v], v, 0, f_single))
        heapq.heapify(heap)
        while heap:
            _, v, stamp, gain = heapq.heappop(heap)
            if spent + costs[v] > kappa:
                continue
            if stamp == len(chosen):
                chosen.add(v)
                value += gain
                spent += costs[v]
            else:
                gain = oracle.marginal(v, chosen, value)
                heapq.heappush(heap, (-gain / costs[v], v, len(chosen), gain))
    if best_single is not None and best_single_value > value:
        chosen = {best_single}
        spent = costs[best_single]
    final_value = oracle.eval(chosen) if chosen else 0.0
    return Solution(
        ids=frozenset(chosen),
        value=final_value,
        cost=spent,
        oracle_calls=oracle.query_count - start_calls,
    )


def brute_force_opt(oracle, cost_fn, U, kappa: float) -> Solution:
    """Exact maximizer by exhaustive subset enumeration with cost pruning.

    Enumerates every feasible subset once, in lexicographic order of sorted
    ids, so ties resolve deterministically to the first maximizer found.
    Capped at 22 elements.
    """
    if kappa < 0:
        raise InputError("kappa must be non-negative")
    ids = sorted(set(U))
    if len(ids) > 22:
        raise InputError(f"exhaustive search capped at 22 elements, got {len(ids)}")
    start_calls = oracle.query_count
    elems = [(v, float(cost_fn(v))) for v in ids if cost_fn(v) <= kappa]
    best_ids = frozenset()
    best_value = 0.0
    best_cost = 0.0
    current = set()

    def descend(i, cur_cost):
        nonlocal best_ids, best_value, best_cost
        for j in range(i, len(elems)):
            v, c = elems[j]
            if cur_cost + c > kappa:
                continue
            current.add(v)
            val = oracle.eval(current)
            if val > best_value:
                best_ids = frozenset(current)
                best_value = val
                best_cost = cur_cost + c
            descend(j + 1, cur_cost + c)
            current.remove(v)

    descend(0, 0.0)
    return Solution(
        ids=best_ids,
        value=best_value,
        cost=best_cost,
        oracle_calls=oracle.query_count - start_calls,
    )


def cardinality_solver(oracle, cost_fn, U, budget) -> Solution:
    """Uniform-signature adapter for size-constrained sweeps."""
    return greedy_cardinality(oracle, U, int(budget))


def knapsack_solver(oracle, cost_fn, U, budget) -> Solution:
    """Uniform-signature adapter for knapsack sweeps."""
    return greedy_knapsack(oracle, cost_fn, U, float(budget))
