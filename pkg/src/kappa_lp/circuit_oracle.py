"""Exact brute-force oracles: circuits, imbalance measures and tiny LPs.

Everything here runs in rational arithmetic and is exponential by design.
The solver never calls into this module; tests and the CLI ``kappa`` and
``--oracle-check`` paths do.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .exact import (
    integer_primitive,
    inverse,
    matvec,
    rank,
    rref,
    solve,
    to_fraction_matrix,
    to_fraction_vector,
)

ELEMENTARY_CAP = 16
EXACT_LP_CAP = 14
NEAREST_POINT_CAP = 10


class OracleCapExceeded(ValueError):
    """The brute-force oracle refuses inputs above its size cap."""


@dataclass(frozen=True)
class ElementaryVectorSet:
    vectors: tuple[tuple[int, ...], ...]
    dimension: int

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)


class OracleStatus(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class ExactOracleResult:
    phi: Fraction | None
    x_star: tuple[Fraction, ...] | None
    status: OracleStatus


def _row_basis(M: list[list[Fraction]]) -> list[list[Fraction]]:
    """Independent rows spanning the row space of ``M`` (same kernel)."""
    R, pivots = rref(M)
    return R[: len(pivots)]


def enumerate_elementary(M, cap: int = ELEMENTARY_CAP) -> ElementaryVectorSet:
    """All support-minimal vectors of ``ker(M)``, one coprime integer vector each.

    Depth-first search over independent column sets ``I`` in increasing
    index order. A column ``j > max(I)`` in the span of ``M_I`` whose
    representation uses every column of ``I`` closes a circuit ``I + {j}``.
    Each circuit is produced exactly once, from its support minus its
    largest index.
    """
    rows = to_fraction_matrix(M)
    ncols = len(rows[0]) if rows else 0
    if ncols > cap:
        raise OracleCapExceeded(f"{ncols} columns exceeds the enumeration cap {cap}")
    rows = _row_basis(rows) if rows else []
    cols = [[row[j] for row in rows] for j in range(ncols)]
    found = []

    # basis entries: (pivot row, reduced column, coefficients over original columns)
    def extend(basis, start):
        for j in range(start, ncols):
            v = list(cols[j])
            coef = {j: Fraction(1)}
            for p, red, bcoef in basis:
                if v[p] != 0:
                    f = v[p] / red[p]
                    v = [a - f * b for a, b in zip(v, red)]
                    for k, val in bcoef.items():
                        coef[k] = coef.get(k, Fraction(0)) - f * val
            if any(x != 0 for x in v):
                p = next(i for i, x in enumerate(v) if x != 0)
                extend(basis + [(p, v, coef)], j + 1)
            else:
                members = {k for _, _, bc in basis for k in bc}
                support = {k for k, val in coef.items() if val != 0}
                if support == members | {j}:
                    g = [Fraction(0)] * ncols
                    for k, val in coef.items():
                        g[k] = val
                    found.append(integer_primitive(g))

    extend([], 0)
    return ElementaryVectorSet(tuple(sorted(set(found))), ncols)


def _ratio(g) -> Fraction:
    nz = [abs(v) for v in g if v != 0]
    return Fraction(max(nz), min(nz))


def kappa(M, cap: int = ELEMENTARY_CAP) -> Fraction:
    """Fractional circuit imbalance of ``ker(M)``; 1 for a trivial kernel."""
    vecs = enumerate_elementary(M, cap)
    return max((_ratio(g) for g in vecs), default=Fraction(1))


def kappa_bar(M, cap: int = ELEMENTARY_CAP) -> int:
    """Max circuit imbalance of ``ker(M)``; 1 for a trivial kernel."""
    vecs = enumerate_elementary(M, cap)
    return max((max(abs(v) for v in g) for g in vecs), default=1)


def imbalances(M, cap: int = ELEMENTARY_CAP) -> tuple[Fraction, int]:
    vecs = enumerate_elementary(M, cap)
    k = max((_ratio(g) for g in vecs), default=Fraction(1))
    kb = max((max(abs(v) for v in g) for g in vecs), default=1)
    return k, kb


def extended_matrix(A) -> list[list[Fraction]]:
    """Rows of ``(A | -I_m)`` whose kernel is the extended subspace of ``A``."""
    rows = to_fraction_matrix(A)
    m = len(rows)
    return [row + [Fraction(-int(i == k)) for k in range(m)] for i, row in enumerate(rows)]


def kappa_extended(A, cap: int = ELEMENTARY_CAP) -> tuple[Fraction, int]:
    """``(kappa, kappa_bar)`` of ``ker(A | -I_m)``."""
    return imbalances(extended_matrix(A), cap)


def dual_extended_matrix(A) -> list[list[Fraction]]:
    """Rows of ``(A^T | I_n)``."""
    rows = to_fraction_matrix(A)
    m, n = len(rows), len(rows[0])
    return [[rows[i][j] for i in range(m)] + [Fraction(int(j == k)) for k in range(n)] for j in range(n)]


def _exact_instance(inst):
    A = to_fraction_matrix(inst.A.toarray() if hasattr(inst, "A") else inst[0])
    if hasattr(inst, "A"):
        b, c, u = (to_fraction_vector(v) for v in (inst.b, inst.c, inst.u))
    else:
        b, c, u = (to_fraction_vector(v) for v in inst[1:4])
    return A, b, c, u


def exact_lp(inst, cap: int = EXACT_LP_CAP) -> ExactOracleResult:
    """Exact optimum of ``min <c,x>, Ax = b, 0 <= x <= u`` by basic-point enumeration.

    ``inst`` is an :class:`LPInstance` or a tuple ``(A, b, c, u)`` of exact
    data. Every basic point of a nonempty polytope is visited, so the
    absence of a feasible candidate proves emptiness.
    """
    A, b, c, u = _exact_instance(inst)
    m, n = len(A), len(A[0])
    if n > cap:
        raise OracleCapExceeded(f"n = {n} exceeds the exact LP cap {cap}")
    aug_R, aug_piv = rref([row + [bi] for row, bi in zip(A, b)])
    if n in aug_piv:
        return ExactOracleResult(None, None, OracleStatus.INFEASIBLE)
    r = len(aug_piv)
    rows = [row[:-1] for row in aug_R[:r]]
    rhs = [row[-1] for row in aug_R[:r]]
    best_val = None
    best_x = None
    for B in itertools.combinations(range(n), r):
        AB = [[row[j] for j in B] for row in rows]
        inv = inverse(AB) if r else []
        if inv is None:
            continue
        N = [j for j in range(n) if j not in B]
        x0 = matvec(inv, rhs) if r else []
        dirs = [matvec(inv, [row[j] * u[j] for row in rows]) if r else [] for j in N]
        den = lcm(*(v.denominator for v in x0), *(v.denominator for d in dirs for v in d),
                  *(u[j].denominator for j in B), 1)
        X0 = np.array([int(v * den) for v in x0], dtype=object)
        D = np.array([[int(v * den) for v in d] for d in dirs], dtype=object).reshape(len(N), r)
        UB = np.array([int(u[j] * den) for j in B], dtype=object)
        Z = np.array(list(itertools.product((0, 1), repeat=len(N))), dtype=object).reshape(2 ** len(N), len(N))
        XB = X0[None, :] - Z.dot(D) if r else np.zeros((Z.shape[0], 0), dtype=object)
        ok = np.all(XB >= 0, axis=1) & np.all(XB <= UB[None, :], axis=1) if r else np.ones(Z.shape[0], bool)
        for idx in np.flatnonzero(ok):
            x = [Fraction(0)] * n
            for k, j in enumerate(B):
                x[j] = Fraction(int(XB[idx, k]), den)
            for k, j in enumerate(N):
                x[j] = u[j] if Z[idx, k] else Fraction(0)
            val = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))
            if best_val is None or val < best_val:
                best_val, best_x = val, tuple(x)
    if best_val is None:
        return ExactOracleResult(None, None, OracleStatus.INFEASIBLE)
    assert matvec(A, list(best_x)) == b
    return ExactOracleResult(best_val, best_x, OracleStatus.OPTIMAL)


def _patterns(n):
    return itertools.product((0, 1, 2), repeat=n)


def nearest_feasible_point(A, b, u, y, cap: int = NEAREST_POINT_CAP):
    """Exact Euclidean projection of ``y`` onto ``{x : Ax = b, 0 <= x <= u}``.

    Enumerates which coordinates sit at 0, at ``u_i`` or are free; on the
    free set the projection onto the affine slice has a closed form. The
    best feasible candidate over all patterns is the projection. Returns
    ``(x, squared_distance)`` or None when the set is empty.
    """
    A = to_fraction_matrix(A)
    b, u, y = (to_fraction_vector(v) for v in (b, u, y))
    m, n = len(A), len(A[0])
    if n > cap:
        raise OracleCapExceeded(f"n = {n} exceeds the nearest-point cap {cap}")
    best = None
    for pat in _patterns(n):
        x = [Fraction(0)] * n
        free = []
        for i, p in enumerate(pat):
            if p == 0:
                x[i] = Fraction(0)
            elif p == 1:
                x[i] = u[i]
            else:
                free.append(i)
        if any(pat[i] == 1 and u[i] == 0 for i in range(n)):
            continue  # same point as the pattern with that coordinate at 0
        rhs = [bi - sum((A[k][i] * x[i] for i in range(n) if pat[i] != 2), Fraction(0))
               for k, bi in enumerate(b)]
        AF = [[A[k][i] for i in free] for k in range(m)]
        r = [rk - sum((a * y[i] for a, i in zip(AF[k], free)), Fraction(0)) for k, rk in enumerate(rhs)]
        if free:
            G = [[sum((AF[k][t] * AF[l][t] for t in range(len(free))), Fraction(0)) for l in range(m)]
                 for k in range(m)]
            lam = solve(G, r)
            if lam is None:
                continue
            step = [sum((AF[k][t] * lam[k] for k in range(m)), Fraction(0)) for t in range(len(free))]
            for t, i in enumerate(free):
                x[i] = y[i] + step[t]
            if any(not (0 <= x[i] <= u[i]) for i in free):
                continue
            if matvec(A, x) != b:
                continue
        elif any(v != 0 for v in r):
            continue
        d2 = sum(((xi - yi) ** 2 for xi, yi in zip(x, y)), Fraction(0))
        if best is None or d2 < best[1]:
            best = (tuple(x), d2)
    return best


def box_least_squares(K, d, lower, upper, cap: int = NEAREST_POINT_CAP):
    """Exact ``min 0.5 ||K x - d||^2`` over a box, with a minimizer.

    The minimizers form the polytope ``{x in box : K x = p*}`` for the unique
    optimal image ``p*``, which has a vertex whose free columns are
    independent. Enumerating bound patterns with independent free columns
    and solving the normal equations therefore reaches the optimum.
    """
    K = to_fraction_matrix(K)
    d, lo, hi = (to_fraction_vector(v) for v in (d, lower, upper))
    m, n = len(K), len(K[0])
    if n > cap:
        raise OracleCapExceeded(f"n = {n} exceeds the box least-squares cap {cap}")
    best = None
    for pat in _patterns(n):
        free = [i for i, p in enumerate(pat) if p == 2]
        if len(free) > m:
            continue
        x = [lo[i] if p == 0 else hi[i] if p == 1 else Fraction(0) for i, p in enumerate(pat)]
        resid = [dk - sum((K[k][i] * x[i] for i in range(n) if pat[i] != 2), Fraction(0))
                 for k, dk in enumerate(d)]
        if free:
            KF = [[K[k][i] for i in free] for k in range(m)]
            if rank(KF) < len(free):
                continue
            G = [[sum((KF[k][s] * KF[k][t] for k in range(m)), Fraction(0)) for t in range(len(free))]
                 for s in range(len(free))]
            rhs = [sum((KF[k][s] * resid[k] for k in range(m)), Fraction(0)) for s in range(len(free))]
            sol = solve(G, rhs)
            for t, i in enumerate(free):
                x[i] = sol[t]
            if any(not (lo[i] <= x[i] <= hi[i]) for i in free):
                continue
        r = [v - dk for v, dk in zip(matvec(K, x), d)]
        val = sum((v * v for v in r), Fraction(0)) / 2
        if best is None or val < best[1]:
            best = (tuple(x), val)
    return best
