from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kappa_lp.circuit_oracle import (
    OracleCapExceeded,
    OracleStatus,
    dual_extended_matrix,
    enumerate_elementary,
    exact_lp,
    imbalances,
    kappa,
    kappa_bar,
    kappa_extended,
    nearest_feasible_point,
)
from kappa_lp.generators import gen_netflow

# Kernel of this matrix is span{(4, 7, 8)}.
SPAN_478 = [[7, -4, 0], [2, 0, -1]]


def test_single_elementary_vector():
    assert enumerate_elementary([[1, 1]]).vectors == ((1, -1),)
    assert enumerate_elementary(SPAN_478).vectors == ((4, 7, 8),)


def test_imbalance_of_478():
    assert kappa(SPAN_478) == 2
    assert kappa_bar(SPAN_478) == 8


def test_two_three():
    assert kappa([[2, 3]]) == Fraction(3, 2)
    assert kappa_bar([[2, 3]]) == 3
    # ker([2, 3, -1]) has circuits (1, 0, 2), (0, 1, 3), (3, -2, 0)
    assert kappa_extended([[2, 3]]) == (Fraction(3), 3)


def test_directed_triangle_has_one_circulation():
    A = [[1, 0, -1], [-1, 1, 0], [0, -1, 1]]
    assert enumerate_elementary(A).vectors == ((1, 1, 1),)
    assert kappa_extended(A)[1] == 1


def test_undirected_triangle_at_most_two():
    A = [[1, 0, 1], [1, 1, 0], [0, 1, 1]]
    assert kappa_extended(A)[1] <= 2


def test_trivial_kernel():
    assert kappa(np.eye(3)) == 1 and kappa_bar(np.eye(3)) == 1


def test_cap_refuses():
    with pytest.raises(OracleCapExceeded):
        enumerate_elementary(np.ones((1, 17)))


def test_exact_lp_examples():
    r = exact_lp((np.eye(2), [1, 1], [1, 1], [2, 2]))
    assert r.status is OracleStatus.OPTIMAL and r.phi == 2 and r.x_star == (1, 1)
    r = exact_lp(([[1, 1]], [1], [0, 1], [1, 1]))
    assert r.phi == 0 and r.x_star == (1, 0)
    assert exact_lp(([[1, 1]], [3], [0, 1], [1, 1])).status is OracleStatus.INFEASIBLE


def test_exact_lp_matches_scipy():
    from scipy.optimize import linprog

    for seed in range(5):
        inst = gen_netflow(4, 7, seed)
        ref = linprog(inst.c, A_eq=inst.A.toarray(), b_eq=inst.b, bounds=list(zip([0] * inst.n, inst.u)))
        assert abs(float(exact_lp(inst).phi) - ref.fun) < 1e-7


int_matrices = st.integers(1, 2).flatmap(
    lambda m: st.integers(m + 1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n), min_size=m, max_size=m)))


@given(int_matrices)
def test_elementary_vectors_are_support_minimal(M):
    vecs = enumerate_elementary(M).vectors
    supports = [frozenset(i for i, v in enumerate(g) if v) for g in vecs]
    for g, s in zip(vecs, supports):
        assert all(sum(r[j] * g[j] for j in range(len(g))) == 0 for r in M)
        assert not any(t < s for t in supports)
        assert next(v for v in g if v) > 0
    assert len(set(supports)) == len(supports)


@given(int_matrices)
def test_kappa_at_most_kappa_bar(M):
    k, kb = imbalances(M)
    assert k <= kb


@given(int_matrices)
def test_kappa_duality(M):
    if not any(any(r) for r in M):
        return
    assert kappa(dual_extended_matrix(M)) == kappa_extended(M)[0]


@given(int_matrices)
def test_kappa_lower_bound(M):
    A = np.array(M, dtype=float)
    if not A.any():
        return
    n = A.shape[1]
    a1 = Fraction(int(np.abs(A).sum(axis=0).max()))
    assert n * kappa_extended(M)[0] * a1 >= 1


def test_nearest_point_is_projection():
    x, d2 = nearest_feasible_point([[1, 1]], [1], [1, 1], [1, 1])
    assert x == (Fraction(1, 2), Fraction(1, 2)) and d2 == Fraction(1, 2)
    assert nearest_feasible_point([[1, 1]], [3], [1, 1], [0, 0]) is None
