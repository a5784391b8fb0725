"""Integer Smith normal form.

Matrices are numpy arrays. Work starts in int64; whenever an entry
grows past a safe bound the computation restarts on object arrays of
Python integers, so results are always exact.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

_SAFE = 2**31


class _Overflow(Exception):
    pass


@dataclass
class SmithForm:
    """U @ M @ V = D with U, V unimodular and D diagonal (divisibility chain).

    ``V_inverse`` is kept exactly alongside V, by the inverse row operations.
    """

    diagonal: List[int]
    U: Optional[np.ndarray]
    V: np.ndarray
    rank: int
    V_inverse: Optional[np.ndarray] = None

    @property
    def invariant_factors(self) -> List[int]:
        return [d for d in self.diagonal if d > 1]


def _check(*arrays: np.ndarray) -> None:
    for array in arrays:
        if array is not None and array.dtype != object and array.size and np.abs(array).max() > _SAFE:
            raise _Overflow()


def _smith(matrix: np.ndarray, track_rows: bool) -> SmithForm:
    A = matrix.copy()
    rows, cols = A.shape
    dtype = A.dtype
    U = np.eye(rows, dtype=dtype) if track_rows else None
    if dtype == object:
        U = np.array([[int(i == j) for j in range(rows)] for i in range(rows)], dtype=object) if track_rows else None
        V = np.array([[int(i == j) for j in range(cols)] for i in range(cols)], dtype=object)
    else:
        V = np.eye(cols, dtype=dtype)
    W = V.copy()
    diagonal: List[int] = []
    t = 0
    while t < min(rows, cols):
        block = A[t:, t:]
        nonzero = np.argwhere(block != 0)
        if len(nonzero) == 0:
            break
        magnitudes = np.abs(block[nonzero[:, 0], nonzero[:, 1]])
        r, c = nonzero[int(np.argmin(magnitudes))]
        r, c = r + t, c + t
        A[[t, r]] = A[[r, t]]
        if U is not None:
            U[[t, r]] = U[[r, t]]
        A[:, [t, c]] = A[:, [c, t]]
        V[:, [t, c]] = V[:, [c, t]]
        W[[t, c]] = W[[c, t]]
        while True:
            pivot = A[t, t]
            done = True
            for i in range(t + 1, rows):
                if A[i, t] != 0:
                    q = A[i, t] // pivot
                    A[i] = A[i] - q * A[t]
                    if U is not None:
                        U[i] = U[i] - q * U[t]
                    if A[i, t] != 0:
                        done = False
            _check(A, U)
            for j in range(t + 1, cols):
                if A[t, j] != 0:
                    q = A[t, j] // pivot
                    A[:, j] = A[:, j] - q * A[:, t]
                    V[:, j] = V[:, j] - q * V[:, t]
                    W[t] = W[t] + q * W[j]
                    if A[t, j] != 0:
                        done = False
            _check(A, U, V, W)
            if done:
                rest = A[t + 1:, t + 1:]
                bad = np.argwhere(rest % pivot != 0) if rest.size else []
                if len(bad) == 0:
                    break
                # fold an offending row into the pivot row
                i = int(bad[0][0]) + t + 1
                A[t] = A[t] + A[i]
                if U is not None:
                    U[t] = U[t] + U[i]
                continue
            # move the smallest remaining entry of row/column t to the pivot
            line = [(abs(A[i, t]), i, t) for i in range(t, rows) if A[i, t] != 0]
            line += [(abs(A[t, j]), t, j) for j in range(t, cols) if A[t, j] != 0]
            _, r, c = min(line)
            if r != t:
                A[[t, r]] = A[[r, t]]
                if U is not None:
                    U[[t, r]] = U[[r, t]]
            if c != t:
                A[:, [t, c]] = A[:, [c, t]]
                V[:, [t, c]] = V[:, [c, t]]
                W[[t, c]] = W[[c, t]]
        if A[t, t] < 0:
            A[:, t] = -A[:, t]
            V[:, t] = -V[:, t]
            W[t] = -W[t]
        diagonal.append(int(A[t, t]))
        t += 1
    return SmithForm(diagonal, U, V, len(diagonal), W)


def smith_normal_form(matrix, track_rows: bool = True) -> SmithForm:
    """Smith normal form of an integer matrix with its transforms."""
    array = np.asarray(matrix)
    if array.ndim != 2:
        raise ValueError(f"expected a 2-d integer matrix, got shape {array.shape}")
    try:
        return _smith(array.astype(np.int64), track_rows)
    except _Overflow:
        logger.debug("Smith form switched to arbitrary precision for shape %s", array.shape)
        return _smith(np.array([[int(v) for v in row] for row in array.tolist()], dtype=object).reshape(array.shape), track_rows)


def row_basis(rows: Sequence[Dict[int, int]], width: int) -> np.ndarray:
    """Integer echelon basis of the lattice spanned by sparse rows.

    Rows are given as ``{column: value}``; duplicates and zero rows are
    dropped first. The returned basis spans the same lattice, so it has
    the same Smith invariants and the same integrality conditions.
    """
    unique = {tuple(sorted((c, v) for c, v in row.items() if v)) for row in rows}
    unique.discard(())
    pivots: Dict[int, List[int]] = {}
    for entries in sorted(unique):
        row = [0] * width
        for c, v in entries:
            row[c] = v
        _insert(pivots, row)
    ordered = [pivots[c] for c in sorted(pivots)]
    if not ordered:
        return np.zeros((0, width), dtype=np.int64)
    return _as_array(ordered)


def _as_array(rows: List[List[int]]) -> np.ndarray:
    biggest = max(abs(v) for row in rows for v in row)
    if biggest <= _SAFE:
        return np.array(rows, dtype=np.int64)
    return np.array(rows, dtype=object)


def _insert(pivots: Dict[int, List[int]], row: List[int]) -> None:
    while True:
        lead = next((c for c, v in enumerate(row) if v != 0), None)
        if lead is None:
            return
        if lead not in pivots:
            if row[lead] < 0:
                row = [-v for v in row]
            pivots[lead] = row
            return
        pivot = pivots[lead]
        a, b = pivot[lead], row[lead]
        g, x, y = _extended_gcd(a, b)
        combined = [x * p + y * r for p, r in zip(pivot, row)]
        reduced = [(a // g) * r - (b // g) * p for p, r in zip(pivot, row)]
        pivots[lead] = combined
        row = reduced


def _extended_gcd(a: int, b: int) -> Tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t
