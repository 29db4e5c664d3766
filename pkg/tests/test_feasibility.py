import numpy as np
import pytest

from kappa_lp.feasibility import (
    PhaseOneStatus,
    StepCounter,
    feasibility_schedule,
    feasible,
    slack_extension,
    two_phase,
)
from kappa_lp.generators import gen_infeasible, gen_netflow, gen_random
from kappa_lp.lp_core import KappaTooSmall, LPInstance, check_delta_feasible


def test_already_feasible_start_costs_nothing():
    inst = LPInstance([[1.0, -1.0]], [0.0], [1.0, 1.0], [1.0, 1.0])
    counter = StepCounter()
    assert np.array_equal(feasible(inst, 1e-3, counter=counter), [0.0, 0.0])
    assert counter.gradient_steps == 0


@pytest.mark.parametrize("delta", [1e-2, 1e-4, 1e-8])
def test_meets_tolerance(delta):
    for inst in (gen_netflow(5, 10, 4), gen_random(3, 8, 4)):
        x = feasible(inst, delta)
        assert check_delta_feasible(inst, x, delta)


def test_target_implies_tolerance():
    # 0.5 ||r||_2^2 <= target forces ||r||_1 <= sqrt(m) ||r||_2 <= delta ||A||_1
    inst = gen_random(3, 8, 0)
    _, _, target = feasibility_schedule(inst, 1e-3)
    assert np.sqrt(inst.m) * np.sqrt(2 * target) <= 1e-3 * inst.A_norm1 * (1 + 1e-12)


def test_infeasible_system_raises():
    inst = LPInstance([[1.0, 1.0]], [5.0], [0.0, 0.0], [1.0, 1.0])
    with pytest.raises(KappaTooSmall):
        feasible(inst, 1e-3)


def test_slack_extension_shape():
    inst = gen_netflow(4, 6, 0)
    ext = slack_extension(inst)
    assert ext.A.shape == (4, 6 + 8)
    assert list(ext.c) == [0.0] * 6 + [1.0] * 8
    assert np.all(ext.u[6:] == np.max(np.abs(inst.b)))


def test_two_phase_feasible():
    inst = gen_netflow(5, 10, 2)
    r = two_phase(inst, 1e-3)
    assert r.status is PhaseOneStatus.FEASIBLE_WITH_RHS
    assert r.slack_mass <= 1e-3 / 4
    assert inst.residual_l1(r.x_bar) <= 1e-3 / 2 * inst.A_norm1
    assert np.array_equal(r.b_bar, inst.A @ r.x_bar)


def test_two_phase_infeasible():
    r = two_phase(gen_infeasible(5, 10, 1), 1e-3)
    assert r.status is PhaseOneStatus.INFEASIBLE
    assert r.slack_mass > 1e-3 / 4


def test_two_phase_zero_rhs():
    inst = LPInstance([[1.0, -1.0]], [0.0], [1.0, 1.0], [1.0, 1.0])
    r = two_phase(inst, 1e-3)
    assert r.status is PhaseOneStatus.FEASIBLE_WITH_RHS and not r.x_bar.any()
