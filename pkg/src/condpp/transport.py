"""Exact assignment and balanced transport on small cost matrices.

Rectangular problems are reduced to square ones by padding with cost 1, the
diameter of the truncated ground metric, so unmatched real points pay the
same penalty as a cardinality mismatch does in the configuration distance.
Pad pairs are dropped from the reported matching and never contribute to its
cost.  The square core is scipy's Hungarian-family solver, which is exact;
tests compare against brute-force enumeration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

__all__ = ["Matching", "check_cost_matrix", "solve_assignment", "solve_balanced_transport"]

PAD_COST = 1.0

# Entries may overshoot [0, 1] by rounding noise only.
_ENTRY_TOL = 1e-9


@dataclass(frozen=True)
class Matching:
    """Injective matching of the smaller index set into the larger.

    pairs holds (row, col) index pairs into the original cost matrix; every
    index on the smaller side appears exactly once.  cost is the exact sum of
    the matched entries (pad pairs excluded).
    """

    pairs: tuple[tuple[int, int], ...]
    cost: float
    n_rows: int
    n_cols: int

    @property
    def mean_cost(self) -> float:
        """cost averaged over matched pairs; 0 when nothing is matched."""
        return self.cost / len(self.pairs) if self.pairs else 0.0


def check_cost_matrix(costs) -> np.ndarray:
    """Validate and return an (r, c) float cost matrix with entries in [0, 1]."""
    arr = np.asarray(costs, dtype=float)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError("cost matrix must be 2-d and non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError("cost matrix entries must be finite")
    if arr.min() < -_ENTRY_TOL or arr.max() > 1.0 + _ENTRY_TOL:
        raise ValueError("cost matrix entries must lie in [0, 1]")
    return np.clip(arr, 0.0, 1.0)


def solve_assignment(costs) -> Matching:
    """Minimum-cost injection of the smaller index set into the larger."""
    arr = check_cost_matrix(costs)
    r, c = arr.shape
    n = max(r, c)
    if r == c:
        padded = arr
    else:
        padded = np.full((n, n), PAD_COST)
        padded[:r, :c] = arr
    rows, cols = linear_sum_assignment(padded)
    pairs = tuple(
        (int(i), int(j)) for i, j in zip(rows, cols) if i < r and j < c
    )
    cost = math.fsum(arr[i, j] for i, j in pairs)
    return Matching(pairs=pairs, cost=cost, n_rows=r, n_cols=c)


def solve_balanced_transport(costs) -> Matching:
    """Optimal transport between uniform weights on two equal-size sets.

    With uniform marginals an optimal plan is a permutation, so this is the
    square assignment problem; mean_cost of the result is the transport value.
    """
    arr = check_cost_matrix(costs)
    if arr.shape[0] != arr.shape[1]:
        raise ValueError("balanced transport requires a square cost matrix")
    return solve_assignment(arr)
