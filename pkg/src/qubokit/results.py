"""Record tables and post-processing of solver output.

Solver results are numpy structured arrays with one small-integer field per
variable plus a ``probability`` field (and, after annotation, ``evaluation``).
Sorting is by descending probability with ties broken by the assignment
tuple, descending, which keeps orderings reproducible across solvers.
"""

from __future__ import annotations

from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import EmptyResultsError

RESERVED_FIELDS = ("probability", "evaluation")

ScoreFn = Callable[[Mapping[str, int], float], float]


def build_records(
    var_order: Sequence[str],
    assignments: np.ndarray | Sequence[Sequence[int]],
    probabilities: np.ndarray | Sequence[float],
) -> np.ndarray:
    """Pack rows of assignment bits and probabilities into a record table."""
    bits = np.asarray(assignments, dtype=np.int8)
    probs = np.asarray(probabilities, dtype=np.float64)
    if bits.ndim != 2 or bits.shape[1] != len(var_order):
        raise ValueError("assignment matrix shape does not match var_order")
    if probs.shape != (bits.shape[0],):
        raise ValueError("one probability per assignment row required")
    dtype = np.dtype([(name, np.int8) for name in var_order] + [("probability", np.float64)])
    records = np.empty(bits.shape[0], dtype=dtype)
    for column, name in enumerate(var_order):
        records[name] = bits[:, column]
    records["probability"] = probs
    return records


def variable_fields(records: np.ndarray) -> list[str]:
    return [name for name in records.dtype.names if name not in RESERVED_FIELDS]


def record_assignment(record, fields: Sequence[str]) -> dict[str, int]:
    return {name: int(record[name]) for name in fields}


def _sorted_indices(records: np.ndarray) -> np.ndarray:
    fields = variable_fields(records)
    # lexsort: last key is primary.  Negations give descending order on
    # probability first, then on the assignment tuple (x0 most significant).
    keys = [-records[name].astype(np.int16) for name in reversed(fields)]
    keys.append(-records["probability"])
    return np.lexsort(tuple(keys))


def sort_solver_results(records: np.ndarray, limit_results: int) -> np.ndarray:
    """Most probable records first, truncated to ``limit_results``."""
    if limit_results < 1:
        raise ValueError(f"limit_results must be >= 1, got {limit_results}")
    if len(records) == 0:
        raise EmptyResultsError("no records to sort")
    order = _sorted_indices(records)
    return records[order][:limit_results].copy()


def weighted_avg_evaluation(
    records: np.ndarray,
    score_fn: ScoreFn,
    penalty: float = 0.0,
    limit_results: int = 10,
    normalize: bool = True,
) -> float:
    """Probability-weighted mean score of the most probable records.

    Keeps the ``limit_results`` most probable rows; with ``normalize`` their
    probabilities are rescaled to sum to one before weighting.
    """
    kept = sort_solver_results(records, limit_results)
    weights = kept["probability"].astype(float)
    if normalize:
        total = weights.sum()
        if total > 0:
            weights = weights / total
    fields = variable_fields(kept)
    return float(
        sum(
            w * score_fn(record_assignment(rec, fields), penalty)
            for rec, w in zip(kept, weights)
        )
    )


def add_evaluation_to_results(
    records: np.ndarray, score_fn: ScoreFn, penalty: float = 0.0
) -> np.ndarray:
    """Append an ``evaluation`` column holding each record's score."""
    fields = variable_fields(records)
    dtype = np.dtype(records.dtype.descr + [("evaluation", np.float64)])
    out = np.empty(len(records), dtype=dtype)
    for name in records.dtype.names:
        out[name] = records[name]
    out["evaluation"] = [
        score_fn(record_assignment(rec, fields), penalty) for rec in records
    ]
    return out
