import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kappa_lp.generators import gen_netflow, gen_random
from kappa_lp.lp_core import KappaTooSmall, LPInstance
from kappa_lp.potential import (
    PotentialParams,
    dual_from_point,
    f_tau_eval,
    potential_objective,
    potential_smoothness,
    round_cost,
    spectral_norm,
)


def test_params_relations():
    inst = gen_netflow(5, 10, 0)
    p = PotentialParams.build(inst, 1e-6, 3.0)
    n, m = inst.n, inst.m
    assert p.epsilon == 1 / (8 * n * 3)
    assert math.isclose(p.sigma, 2 * p.epsilon * inst.c_inf)
    assert math.isclose(p.C_bar, 64 * n * p.C * 3.0)
    assert math.isclose(p.C_bar * math.sqrt(p.zeta), 1e-6 / (4 * n**4 * math.sqrt(m) * 9))
    assert p.L == 2 * (n + 1)
    assert p.window == (p.C_bar**2 * p.zeta, 2 * p.C_bar**2 * p.zeta)


def test_params_detect_small_kappa():
    inst = LPInstance([[0.01, 0.01]], [0.0], [1.0, 1.0], [1.0, 1.0])
    with pytest.raises(KappaTooSmall):
        PotentialParams.build(inst, 1e-3, 1.0)


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=8).filter(any), st.integers(1, 40))
def test_round_cost_grid_and_direction(c, grid):
    eps = 1 / grid
    c = np.array(c, dtype=float)
    ch = round_cost(c, eps).c_hat
    ref = c / np.max(np.abs(c))
    assert np.max(np.abs(ch)) == 1.0
    for a, r in zip(ch, ref):
        steps = round(a * grid)
        assert a == steps / grid
        assert abs(a) <= abs(r) + 1e-15 and abs(r) - abs(a) < eps
        assert a == 0 or math.copysign(1, a) == math.copysign(1, r)


def test_round_cost_rejects_zero():
    with pytest.raises(ValueError):
        round_cost([0.0, 0.0], 0.5)


def test_spectral_norm_upper_bounds():
    for seed in range(5):
        inst = gen_random(3, 7, seed)
        true = np.linalg.norm(inst.A.toarray(), 2)
        est = spectral_norm(inst.A)
        assert true <= est <= 1.06 * true


def test_smoothness_bound_valid():
    inst = gen_random(3, 7, 0)
    ch = round_cost(inst.c, 1 / 56)
    L = potential_smoothness(inst, ch)
    H = np.outer(ch.c_hat, ch.c_hat) + inst.A.toarray().T @ inst.A.toarray() / inst.A_norm1**2
    assert np.linalg.eigvalsh(H).max() <= L <= 2 * (inst.n + 1)


def test_compiled_value_matches_reference():
    inst = gen_random(3, 7, 2)
    ch = round_cost(inst.c, 1 / 56)
    rng = np.random.default_rng(0)
    for tau in (-3.0, 0.0, 2.0):
        obj = potential_objective(inst, ch, tau, 10.0)
        x = rng.random(inst.n) * inst.u
        v, g, _, _ = f_tau_eval(inst, ch, tau, x)
        assert math.isclose(obj.value(x), v, rel_tol=1e-12, abs_tol=1e-15)
        assert np.allclose(obj.eval(x)[1], g, rtol=1e-12, atol=1e-15)


def test_dual_from_point_needs_positive_hinge():
    inst = gen_netflow(4, 6, 0)
    ch = round_cost(inst.c, 1 / 48)
    x = np.zeros(inst.n)
    with pytest.raises(ValueError):
        dual_from_point(inst, ch, 1.0, x)
    pi = dual_from_point(inst, ch, -1.0, x)
    assert np.allclose(pi, inst.c_inf * inst.b / inst.A_norm1**2)
