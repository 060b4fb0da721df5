"""Retention and pruning metrics, plus budget sweeps.

For a heuristic H, a ground set U and a pruned set U', the three numbers
reported per run are the retention ratio p_r = f(H(U')) / f(H(U)), the
pruned fraction p_g = 1 - |U'| / |U|, and their product. p_r may exceed 1:
pruning occasionally helps the heuristic, and no clamping is applied.

CSV rows follow the fixed column order in ``CSV_COLUMNS``.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

from .errors import InputError

__all__ = ["EvalRecord", "CSV_COLUMNS", "evaluate_pruning", "sweep_budgets",
           "write_csv", "write_json_lines"]

CSV_COLUMNS = [
    "pruner", "budget", "p_r", "p_g", "combined", "n", "n_pruned",
    "oracle_calls_prune", "oracle_calls_solve", "undefined", "out_of_range",
]


@dataclass(frozen=True)
class EvalRecord:
    """One (pruner, budget) evaluation row."""

    pruner: str
    budget: float
    p_r: float
    p_g: float
    combined: float
    n: int
    n_pruned: int
    oracle_calls_prune: int
    oracle_calls_solve: int
    undefined: bool = False
    out_of_range: bool = False

    def to_row(self) -> list:
        return [getattr(self, col) for col in CSV_COLUMNS]

    def to_json_dict(self) -> dict:
        return {col: getattr(self, col) for col in CSV_COLUMNS}


def evaluate_pruning(oracle, cost_fn, U, U_pruned, solver, budget,
                     pruner: str = "", oracle_calls_prune: int = 0,
                     budget_range=None) -> EvalRecord:
    """Run the solver on the full and pruned ground sets at one budget.

    ``solver(oracle, cost_fn, ids, budget)`` must return a Solution. When the
    full-set solution has zero value, p_r is 1 if the pruned-set solution is
    also zero and NaN (with the undefined flag) otherwise.
    """
    U = set(U)
    U_pruned = set(U_pruned)
    if not U:
        raise InputError("ground set must be non-empty")
    if not U_pruned <= U:
        raise InputError("pruned set must be a subset of the ground set")
    calls_before = oracle.query_count
    full_solution = solver(oracle, cost_fn, U, budget)
    pruned_solution = solver(oracle, cost_fn, U_pruned, budget)
    calls_solve = oracle.query_count - calls_before
    undefined = False
    if full_solution.value == 0:
        p_r = 1.0 if pruned_solution.value == 0 else math.nan
        undefined = math.isnan(p_r)
    else:
        p_r = pruned_solution.value / full_solution.value
    p_g = 1.0 - len(U_pruned) / len(U)
    out_of_range = False
    if budget_range is not None:
        lo, hi = budget_range
        out_of_range = not lo <= budget <= hi
    return EvalRecord(
        pruner=pruner,
        budget=float(budget),
        p_r=p_r,
        p_g=p_g,
        combined=p_r * p_g,
        n=len(U),
        n_pruned=len(U_pruned),
        oracle_calls_prune=oracle_calls_prune,
        oracle_calls_solve=calls_solve,
        undefined=undefined,
        out_of_range=out_of_range,
    )


def sweep_budgets(oracle, cost_fn, U, pruner_outputs: dict, budgets, solver,
                  prune_calls: dict = None, budget_range=None) -> list:
    """One EvalRecord per (budget, pruner) pair.

    ``pruner_outputs`` maps pruner name to its pruned set; pruning is done
    once per pruner by the caller and only the solving repeats per budget.
    Budgets iterate in the given order, pruners in name order, so the output
    ordering is deterministic. Budgets outside ``budget_range`` are still
    evaluated but flagged.
    """
    prune_calls = prune_calls or {}
    records = []
    for budget in budgets:
        for name in sorted(pruner_outputs):
            records.append(evaluate_pruning(
                oracle, cost_fn, U, pruner_outputs[name], solver, budget,
                pruner=name,
                oracle_calls_prune=prune_calls.get(name, 0),
                budget_range=budget_range,
            ))
    return records


def write_csv(records, fh) -> None:
    writer = csv.writer(fh)
    writer.writerow(CSV_COLUMNS)
    for record in records:
        writer.writerow(record.to_row())


def write_json_lines(records, fh) -> None:
    for record in records:
        fh.write(json.dumps(record.to_json_dict()) + "\n")
