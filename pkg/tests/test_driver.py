import numpy as np
import pytest

from kappa_lp.circuit_oracle import OracleStatus, exact_lp
from kappa_lp.driver import DriverConfig, Tolerances, solve
from kappa_lp.generators import gen_infeasible, gen_netflow
from kappa_lp.lp_core import InstanceError, LPInstance, Verdict, check_certificate
from kappa_lp.trace import Trace


def test_config_validation():
    with pytest.raises(ValueError):
        DriverConfig(delta=0.0)
    with pytest.raises(ValueError):
        DriverConfig(delta=1e-3, kappa_hat_init=0.5)


def test_tolerance_wiring():
    inst = gen_netflow(5, 10, 0)
    tol = Tolerances.for_instance(inst, 1e-3, 2.0)
    assert tol.delta_opt == 1e-3 / (8 * 10 + 4)
    assert tol.delta_feas == tol.delta_opt / (8 * 10 * np.sqrt(5) * 2.0 * inst.A_norm1)


def test_netflow_solved_with_small_kappa():
    inst = gen_netflow(5, 10, 1)
    r = solve(inst, DriverConfig(1e-3))
    assert r.verdict is Verdict.SOLVED
    assert r.kappa_hat_final in (1.0, 2.0)
    assert inst.residual_l1(r.x) <= 1e-3 * inst.A_norm1
    phi = float(exact_lp(inst).phi)
    assert inst.objective(r.x) <= phi + 1e-3 * inst.c_inf


def test_infeasible_verdict():
    inst = gen_infeasible(5, 10, 0)
    assert exact_lp(inst).status is OracleStatus.INFEASIBLE
    assert solve(inst, DriverConfig(1e-3)).verdict is Verdict.INFEASIBLE


def test_trivial_zero_instance():
    inst = LPInstance([[1.0, -1.0]], [0.0], [0.0, 0.0], [1.0, 1.0])
    r = solve(inst, DriverConfig(1e-3))
    assert r.verdict is Verdict.SOLVED
    assert not r.x.any() and not r.certificate.pi.any()


def test_invalid_instance_is_rejected():
    with pytest.raises(InstanceError):
        solve(LPInstance([[0.5, 0.25]], [0.1], [1.0, 1.0], [1.0, 1.0]), DriverConfig(1e-3))


def test_cap_reached_is_a_verdict():
    inst = gen_netflow(5, 10, 2)
    cfg = DriverConfig(1e-3, kappa_hat_cap=4.0, budget_multiplier=1e-12)
    r = solve(inst, cfg)
    assert r.verdict is Verdict.KAPPA_CAP_REACHED
    assert [a.kappa_hat for a in r.kappa_attempts] == [1.0, 2.0, 4.0]


def test_deterministic_and_traced():
    inst = gen_netflow(5, 10, 3)
    trace = Trace()
    a = solve(inst, DriverConfig(1e-3), trace)
    b = solve(inst, DriverConfig(1e-3))
    assert np.array_equal(a.x, b.x) and a.gradient_steps == b.gradient_steps
    assert np.array_equal(a.certificate.pi, b.certificate.pi)
    assert trace.total_steps() == a.gradient_steps
    assert trace.events[0].phase == "TwoPhase"


def test_certificate_level():
    inst = gen_netflow(5, 10, 4)
    r = solve(inst, DriverConfig(1e-3))
    tol = Tolerances.for_instance(inst, 1e-3, r.kappa_hat_final)
    sub = inst.replace(b=r.rhs)
    assert check_certificate(sub, r.x, r.certificate, 2 * tol.delta_opt)
