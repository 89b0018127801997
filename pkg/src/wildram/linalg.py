"""Linear algebra over F_p and over the truncated discrete valuation ring F_p[[Y]]/(Y^K).

Matrices over R_K = F_p[[Y]]/(Y^K) are integer arrays of shape
``(rows, cols, K)``; the last axis holds Y-coefficients. Smith reduction
uses minimal-valuation pivots (ties go to the lowest row, then the lowest
column); the resulting valuations are the elementary divisors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["rank_mod_p", "nullspace_mod_p", "SmithResult", "smith_dvr", "series_valuation"]


def _row_reduce(M: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    A = np.array(M, dtype=np.int64) % p
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        i = r + nz[0]
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        others = np.nonzero(A[:, c])[0]
        others = others[others != r]
        if len(others):
            A[others] = (A[others] - np.outer(A[others, c], A[r])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def rank_mod_p(M: np.ndarray, p: int) -> int:
    if M.size == 0:
        return 0
    return len(_row_reduce(M, p)[1])


def nullspace_mod_p(M: np.ndarray, p: int) -> np.ndarray:
    """Basis of {x : M x = 0} as the rows of an array."""
    rows, cols = M.shape
    R, piv = _row_reduce(M, p)
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for f in free:
        x = np.zeros(cols, dtype=np.int64)
        x[f] = 1
        for r, c in enumerate(piv):
            x[c] = (-R[r, f]) % p
        basis.append(x)
    return np.array(basis, dtype=np.int64).reshape(len(basis), cols)


def series_valuation(f: np.ndarray) -> int:
    """Y-adic valuation of a truncated series (len(f) when zero)."""
    nz = np.nonzero(f)[0]
    return int(nz[0]) if len(nz) else len(f)


def _smul(f: np.ndarray, g: np.ndarray, p: int, K: int) -> np.ndarray:
    return np.convolve(f, g)[:K] % p


def _unit_inverse(u: np.ndarray, p: int, K: int) -> np.ndarray:
    inv = np.zeros(K, dtype=np.int64)
    c = pow(int(u[0]), -1, p)
    for k in range(K):
        s = int(np.dot(u[1 : k + 1][::-1], inv[:k])) if k else 0
        inv[k] = ((1 if k == 0 else 0) - s) * c % p
    return inv


@dataclass
class SmithResult:
    valuations: list[int]  # one per diagonal slot; K means zero mod Y^K
    U: np.ndarray | None  # row transform, shape (rows, rows, K)
    K: int
    p: int

    def divisors(self) -> list[int]:
        """Nontrivial elementary divisor exponents: 0 < v < K."""
        return [v for v in self.valuations if 0 < v < self.K]

    def zero_count(self) -> int:
        return sum(1 for v in self.valuations if v >= self.K)

    def class_coordinates(self, x: np.ndarray) -> np.ndarray:
        """Coordinates over F_p of the class of x in the cokernel's torsion part.

        x has shape (rows, K). Slot i contributes its first v_i coefficients.
        """
        if self.U is None:
            raise ValueError("row transform was not tracked")
        p, K = self.p, self.K
        rows = self.U.shape[0]
        y = np.zeros((rows, K), dtype=np.int64)
        for i in range(rows):
            for j in range(rows):
                if self.U[i, j].any() and x[j].any():
                    y[i] = (y[i] + _smul(self.U[i, j], x[j], p, K)) % p
        parts = [y[i, :v] for i, v in enumerate(self.valuations) if v < K]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    def free_coordinates(self, x: np.ndarray) -> np.ndarray:
        """Components of U x in the slots whose divisor is zero (and any extra rows)."""
        p, K = self.p, self.K
        rows = self.U.shape[0]
        y = np.zeros((rows, K), dtype=np.int64)
        for i in range(rows):
            for j in range(rows):
                if self.U[i, j].any() and x[j].any():
                    y[i] = (y[i] + _smul(self.U[i, j], x[j], p, K)) % p
        idx = [i for i, v in enumerate(self.valuations) if v >= K] + list(
            range(len(self.valuations), rows)
        )
        return y[idx]


def smith_dvr(A: np.ndarray, p: int, track_rows: bool = False) -> SmithResult:
    """Smith reduction of a matrix over F_p[[Y]]/(Y^K)."""
    A = np.array(A, dtype=np.int64) % p
    rows, cols, K = A.shape
    U = None
    if track_rows:
        U = np.zeros((rows, rows, K), dtype=np.int64)
        for i in range(rows):
            U[i, i, 0] = 1
    vals = []
    for t in range(min(rows, cols)):
        best = (K, None, None)
        for i in range(t, rows):
            for j in range(t, cols):
                v = series_valuation(A[i, j])
                if v < best[0]:
                    best = (v, i, j)
        v, bi, bj = best
        if bi is None:
            vals.extend([K] * (min(rows, cols) - t))
            break
        if bi != t:
            A[[t, bi]] = A[[bi, t]]
            if U is not None:
                U[[t, bi]] = U[[bi, t]]
        if bj != t:
            A[:, [t, bj]] = A[:, [bj, t]]
        pivot_unit = np.zeros(K, dtype=np.int64)
        pivot_unit[: K - v] = A[t, t, v:]
        uinv = _unit_inverse(pivot_unit, p, K)
        for i in range(t + 1, rows):
            if not A[i, t].any():
                continue
            q = np.zeros(K, dtype=np.int64)
            q[: K - v] = A[i, t, v:]
            f = _smul(q, uinv, p, K)  # A[i,t] = f * pivot
            for j in range(t, cols):
                if A[t, j].any():
                    A[i, j] = (A[i, j] - _smul(f, A[t, j], p, K)) % p
            if U is not None:
                for j in range(rows):
                    if U[t, j].any():
                        U[i, j] = (U[i, j] - _smul(f, U[t, j], p, K)) % p
        # column operations clear row t; they do not affect U
        for j in range(t + 1, cols):
            A[t, j] = 0
        vals.append(v)
    return SmithResult(vals, U, K, p)
