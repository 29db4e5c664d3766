"""Small exact linear algebra over ``fractions.Fraction``.

Only what the brute-force oracles need: conversion, row reduction, solving
and kernels. Matrices are lists of row lists.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

import numpy as np
import scipy.sparse as sp


def to_fraction(value) -> Fraction:
    """Exact rational value of an int, Fraction, float or numpy scalar."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value)
    f = float(value)
    if not np.isfinite(f):
        raise ValueError(f"non-finite value {value!r}")
    return Fraction(f)


def to_fraction_matrix(M) -> list[list[Fraction]]:
    if sp.issparse(M):
        M = M.toarray()
    if isinstance(M, np.ndarray):
        if M.ndim == 1:
            M = M.reshape(1, -1)
        return [[to_fraction(v) for v in row] for row in M.tolist()]
    rows = [list(r) for r in M]
    return [[to_fraction(v) for v in row] for row in rows]


def to_fraction_vector(v) -> list[Fraction]:
    if sp.issparse(v):
        v = v.toarray().ravel()
    return [to_fraction(x) for x in np.asarray(v, dtype=object).ravel().tolist()]


def rref(M: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns; the input is not modified."""
    R = [list(row) for row in M]
    if not R:
        return R, []
    ncols = len(R[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(R)) if R[i][col] != 0), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        p = R[r][col]
        if p != 1:
            R[r] = [v / p for v in R[r]]
        for i in range(len(R)):
            if i != r and R[i][col] != 0:
                f = R[i][col]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(col)
        r += 1
        if r == len(R):
            break
    return R, pivots


def rank(M) -> int:
    return len(rref(M)[1])


def kernel_basis(M: list[list[Fraction]], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{x : M x = 0}``, one vector per free column."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    R, pivots = rref(M) if M else ([], [])
    free = [j for j in range(ncols) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(M: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """One exact solution of ``M x = rhs`` (free variables zero) or None."""
    ncols = len(M[0]) if M else 0
    aug = [list(row) + [r] for row, r in zip(M, rhs)]
    R, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(R, pivots):
        x[p] = row[-1]
    return x


def inverse(M: list[list[Fraction]]) -> list[list[Fraction]] | None:
    k = len(M)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(k)] for i, row in enumerate(M)]
    R, pivots = rref(aug)
    if pivots[:k] != list(range(k)):
        return None
    return [row[k:] for row in R]


def integer_primitive(v: list[Fraction]) -> tuple[int, ...]:
    """Scale a nonzero rational vector to coprime integers, first nonzero positive."""
    den = lcm(*(x.denominator for x in v)) if v else 1
    ints = [int(x * den) for x in v]
    g = 0
    for a in ints:
        g = gcd(g, a)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    ints = [a // g for a in ints]
    first = next(a for a in ints if a != 0)
    if first < 0:
        ints = [-a for a in ints]
    return tuple(ints)


def matvec(M: list[list[Fraction]], x: list[Fraction]) -> list[Fraction]:
    return [sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in M]
