import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kappa_lp.lp_core import (
    DualCertificate,
    InstanceError,
    LPInstance,
    certificate_violations,
    check_certificate,
    check_delta_feasible,
    one_norm,
)


def test_one_norm_is_max_column_sum():
    assert one_norm([[1, -2], [3, 1]]) == 4.0
    assert one_norm([[0.5, 0.25]]) == 0.5


def test_rejects_bad_shapes_and_values():
    with pytest.raises(InstanceError):
        LPInstance([[1.0, 1.0]], [1.0], [1.0], [1.0, 1.0])
    with pytest.raises(InstanceError):
        LPInstance([[1.0]], [np.nan], [1.0], [1.0])
    with pytest.raises(InstanceError):
        LPInstance([[1.0]], [0.0], [1.0], [-1.0])


def test_validate_gates():
    with pytest.raises(InstanceError, match="zero"):
        LPInstance([[0.0, 0.0]], [0.0], [1.0, 1.0], [1.0, 1.0]).validate()
    with pytest.raises(InstanceError, match="exceeds"):
        LPInstance(np.eye(2)[:, :1], [0.0, 0.0], [1.0], [1.0]).validate()
    small = LPInstance([[0.5, 0.25]], [0.1], [1.0, 1.0], [1.0, 1.0])
    with pytest.raises(InstanceError, match="normalize"):
        small.validate()
    small.normalized().validate()
    assert small.normalized().A_norm1 == 1.0


def test_restrict_keeps_columns():
    inst = LPInstance([[1.0, 2.0, 3.0]], [1.0], [1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    sub = inst.restrict([0, 2], b=[0.5])
    assert sub.n == 2 and list(sub.c) == [1.0, 3.0] and list(sub.u) == [1.0, 3.0]
    assert list(sub.b) == [0.5]


def test_delta_feasibility(identity2):
    assert check_delta_feasible(identity2, [1.0, 1.0], 0.0)
    assert not check_delta_feasible(identity2, [1.0, 1.1], 0.05)
    assert check_delta_feasible(identity2, [1.0, 1.1], 0.11)
    assert not check_delta_feasible(identity2, [-0.1, 1.0], 1.0)


def test_certificate_at_optimum(identity2):
    cert = DualCertificate(np.array([1.0, 1.0]), np.zeros(2), np.zeros(2))
    assert check_certificate(identity2, [1.0, 1.0], cert, 0.0)


def test_certificate_reports_each_violation(identity2):
    cert = DualCertificate(np.array([1.0, 1.0]), np.array([-1.0, 0.0]), np.zeros(2))
    problems = certificate_violations(identity2, [1.0, 1.0], cert, 1e-3)
    assert any("negative" in p for p in problems)
    assert any("A^T pi" in p for p in problems)
    assert not check_certificate(identity2, [1.0, 1.0], cert, 1e-3)


def test_certificate_zero_denominators_are_vacuous():
    # x at both bounds and Ax = b: every product-form condition is 0 <= bound.
    inst = LPInstance([[1.0, 1.0]], [1.0], [1.0, -1.0], [0.0, 1.0])
    cert = DualCertificate(np.array([5.0]), np.array([0.0, 0.0]), np.array([4.0, 6.0]))
    assert check_certificate(inst, [0.0, 1.0], cert, 0.0)


@given(st.lists(st.floats(-3, 3), min_size=3, max_size=3))
def test_fix_up_identity_always_certifies_equality(pi):
    inst = LPInstance([[1.0, 2.0, 0.0], [0.0, 1.0, -1.0], [1.0, 0.0, 1.0]], [1.0, 0.0, 1.0],
                      [1.0, -2.0, 0.5], [1.0, 1.0, 1.0])
    pi = np.array(pi)
    rc = inst.c - inst.AT @ pi
    cert = DualCertificate(pi, np.maximum(rc, 0), np.maximum(-rc, 0))
    eq = inst.AT @ pi + cert.w_minus - cert.w_plus - inst.c
    assert np.max(np.abs(eq)) <= 1e-12
