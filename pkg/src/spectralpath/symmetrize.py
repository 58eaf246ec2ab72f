"""Symmetrization of matrices by positive diagonal conjugation.

A matrix A is symmetrizable here when some diagonal D with positive entries
makes D A D^-1 symmetric.  Writing w_i = D_ii^2, that is equivalent to the
detailed-balance relations w_i A_ij = w_j A_ji, so the search reduces to
propagating entry ratios over a spanning forest of the support graph and
checking consistency on the remaining pairs.  Squares absorb sign choices,
so restricting D to positive entries loses no generality.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .digraph import is_irreducible_tridiagonal
from .linalg import DEFAULT_TOL, Tolerance, as_matrix

__all__ = [
    "Symmetrizer",
    "NotSymmetrizable",
    "find_symmetrizer",
    "tridiagonal_symmetrizer",
]


@dataclass(frozen=True)
class Symmetrizer:
    """Positive weights w with w_i A_ij = w_j A_ji for the source matrix.

    `delta` is the diagonal of D = diag(sqrt(w)); conjugation by D
    symmetrizes the source matrix.
    """

    kappa: np.ndarray

    @property
    def delta(self) -> np.ndarray:
        return np.sqrt(self.kappa)

    def conjugate(self, A) -> np.ndarray:
        """D A D^-1 for D = diag(delta)."""
        A = as_matrix(A)
        d = self.delta
        return (A * d[:, None]) / d[None, :]


@dataclass(frozen=True)
class NotSymmetrizable:
    """Witness that no positive-diagonal symmetrizer exists.

    reason is one of 'asymmetric_pattern', 'nonpositive_ratio',
    'inconsistent_cycle'; witness is the offending index pair.
    """

    reason: str
    witness: tuple


def find_symmetrizer(A, tol: Tolerance = DEFAULT_TOL):
    """Search for positive weights w with w_i A_ij = w_j A_ji.

    Weights are propagated along a breadth-first spanning forest of the
    support graph (w_j = w_i * A_ij / A_ji, root weight 1 per component)
    and then every pair is checked for consistency with a relative
    tolerance.  Returns a Symmetrizer on success and a NotSymmetrizable
    witness otherwise.
    """
    A = as_matrix(A)
    n = A.shape[0]
    nz = np.abs(A) > tol.zero_tol

    for i in range(n):
        for j in range(i + 1, n):
            if nz[i, j] != nz[j, i]:
                return NotSymmetrizable("asymmetric_pattern", (i, j))
            if nz[i, j] and A[i, j] * A[j, i] <= 0.0:
                return NotSymmetrizable("nonpositive_ratio", (i, j))

    w = np.zeros(n)
    for root in range(n):
        if w[root] > 0.0:
            continue
        w[root] = 1.0
        queue = deque([root])
        while queue:
            i = queue.popleft()
            for j in range(n):
                if i != j and nz[i, j] and w[j] == 0.0:
                    w[j] = w[i] * A[i, j] / A[j, i]
                    queue.append(j)

    for i in range(n):
        for j in range(i + 1, n):
            if not nz[i, j]:
                continue
            lhs = w[i] * A[i, j]
            rhs = w[j] * A[j, i]
            if abs(lhs - rhs) > tol.residual_tol * max(abs(lhs), abs(rhs), 1.0):
                return NotSymmetrizable("inconsistent_cycle", (i, j))
    return Symmetrizer(kappa=w)


def tridiagonal_symmetrizer(A, tol: Tolerance = DEFAULT_TOL) -> Symmetrizer:
    """Closed-form weights for a nonnegative irreducible tridiagonal matrix.

    kappa_i is the ratio of the superdiagonal product A_01 ... A_{i-1,i}
    to the subdiagonal product A_10 ... A_{i,i-1}, with kappa_0 = 1; these
    weights satisfy K A = A^T K exactly.
    """
    A = as_matrix(A)
    n = A.shape[0]
    if np.min(A) < 0.0:
        raise ValueError("tridiagonal symmetrizer expects a nonnegative matrix")
    if not is_irreducible_tridiagonal(A, tol):
        raise ValueError("matrix is not irreducible tridiagonal")
    kappa = np.ones(n)
    for i in range(1, n):
        kappa[i] = kappa[i - 1] * (A[i - 1, i] / A[i, i - 1])
    return Symmetrizer(kappa=kappa)
