"""Dual certificates for an approximately optimal point.

The certificate ``(pi, w_minus, w_plus)`` comes from a box-constrained least
squares problem over all three blocks, followed by a fix-up that makes the
equality ``A^T pi + w_minus - w_plus = c`` hold exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .fgm import Box, LeastSquaresObjective, RestartSchedule, blocks_for_target, rfgm
from .lp_core import DualCertificate, KappaTooSmall, LPInstance, certificate_violations
from .potential import spectral_norm


@dataclass
class CertProblem:
    """``min 0.5 ||A^T pi + w_minus - w_plus - c||^2`` over a box, stopped at ``target``.

    Zero denominators in the box edges give infinite (absent) bounds.
    """

    objective: LeastSquaresObjective
    box: Box
    target: float
    m: int
    n: int

    def split(self, z):
        m, n = self.m, self.n
        return z[:m], z[m:m + n], z[m + n:]


def _safe_ratio(num: float, den) -> np.ndarray:
    den = np.asarray(den, dtype=float)
    out = np.full(den.shape, math.inf)
    pos = den > 0
    out[pos] = num / den[pos]
    return out


def cert_problem(inst: LPInstance, x, delta_opt: float) -> CertProblem:
    x = np.asarray(x, dtype=float)
    m, n = inst.m, inst.n
    bound = 2 * delta_opt * inst.c_inf
    res = inst.residual_l1(x)
    pi_cap = math.inf if res == 0 else bound / res
    lower = np.concatenate([np.full(m, -pi_cap), np.zeros(2 * n)])
    upper = np.concatenate([np.full(m, pi_cap), _safe_ratio(bound, x), _safe_ratio(bound, inst.u - x)])
    eye = sp.identity(n, format="csr")
    K = sp.hstack([inst.AT, eye, -eye], format="csr")
    # K K^T = A^T A + 2 I, so the gradient is (||A||_2^2 + 2)-Lipschitz.
    L = spectral_norm(inst.A) ** 2 + 2.0
    obj = LeastSquaresObjective(K, inst.c, L)
    target = 0.5 * (bound / inst.u_one) ** 2 if inst.u_one > 0 else 0.0
    return CertProblem(obj, Box(lower, upper), target, m, n)


def fix_up(inst: LPInstance, pi) -> DualCertificate:
    """Keep ``pi`` and absorb the reduced cost into ``w_minus`` and ``w_plus``."""
    rc = inst.c - inst.AT @ np.asarray(pi, dtype=float)
    return DualCertificate(np.asarray(pi, dtype=float).copy(), np.maximum(rc, 0.0), np.maximum(-rc, 0.0))


def dual_certificate(inst: LPInstance, x, delta_feas: float, delta_opt: float, kappa_hat: float,
                     budget_multiplier: float = 1.0, counter=None, trace=None) -> DualCertificate:
    """A ``2 delta_opt``-certificate for ``x`` or :class:`KappaTooSmall`.

    ``delta_feas`` documents the accuracy ``x`` was computed to; the
    construction itself only needs ``delta_opt``.
    """
    x = np.asarray(x, dtype=float)
    if inst.c_inf == 0:
        return DualCertificate(np.zeros(inst.m), np.zeros(inst.n), np.zeros(inst.n))
    prob = cert_problem(inst, x, delta_opt)
    mu = min(1.0 / (inst.m * kappa_hat) ** 2, prob.objective.lipschitz_L)
    z0 = np.zeros(inst.m + 2 * inst.n)
    f0 = prob.objective.value(z0)
    k = max(blocks_for_target(f0, prob.target), 1) if prob.target > 0 else 1
    schedule = RestartSchedule.from_constants(prob.objective.lipschitz_L, mu, k)
    cap = int(math.ceil(schedule.k * schedule.h_R * budget_multiplier))
    z, st = rfgm(prob.objective, prob.box, z0, schedule, target_value=prob.target, max_steps=cap)
    if counter is not None:
        counter.add(st.steps, st.blocks)
    if trace is not None:
        trace.emit("Cert", 0, f_value=st.f_final, steps=st.steps)
    pi, _, _ = prob.split(z)
    cert = fix_up(inst, pi)
    problems = certificate_violations(inst, x, cert, 2 * delta_opt)
    if problems:
        raise KappaTooSmall("certificate check failed: " + "; ".join(problems))
    return cert
