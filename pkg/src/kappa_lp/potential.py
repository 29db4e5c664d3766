"""The discretized penalty potential and its parameter set.

For a threshold ``tau`` the potential is::

    F(x) = 0.5 * max(0, <c_hat, x> - tau)^2 + ||A x - b||^2 / (2 ||A||_1^2)

where ``c_hat`` is ``c / ||c||_inf`` rounded toward zero onto the grid of
multiples of ``epsilon``. Its gradient at ``x`` defines a dual estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .fgm import LeastSquaresObjective
from .lp_core import KappaTooSmall, LPInstance


@dataclass(frozen=True)
class PotentialParams:
    """Accuracy and conditioning constants for one inner-loop call.

    ``kappa_hat`` stands in for every circuit imbalance constant. ``L`` and
    ``mu`` are the smoothness and quadratic growth bounds for the potential.
    """

    kappa_hat: float
    epsilon: float
    sigma: float
    C: float
    C_bar: float
    zeta: float
    L: float
    mu: float

    @classmethod
    def build(cls, inst: LPInstance, delta_feas: float, kappa_hat: float) -> "PotentialParams":
        if kappa_hat < 1:
            raise ValueError("kappa_hat must be at least 1")
        n, m = inst.n, inst.m
        a1 = inst.A_norm1
        ceil_k = math.ceil(kappa_hat)
        epsilon = 1.0 / (8 * n * ceil_k)
        sigma = inst.c_inf / (4 * n * ceil_k)
        C = n * math.sqrt(m) * kappa_hat * a1
        C_bar = 64 * n * C * kappa_hat
        zeta = (delta_feas / (4 * kappa_hat**2 * n**4 * C_bar * math.sqrt(m))) ** 2
        L = 2.0 * (n + 1)
        mu = epsilon**2 / (64 * m**4 * a1**4 * kappa_hat**4)
        params = cls(kappa_hat, epsilon, sigma, C, C_bar, zeta, L, mu)
        params._check(inst, delta_feas)
        return params

    def _check(self, inst: LPInstance, delta_feas: float) -> None:
        n, m = inst.n, inst.m
        assert math.isclose(1 / self.epsilon, round(1 / self.epsilon), rel_tol=1e-12)
        assert math.isclose(self.sigma, 2 * self.epsilon * inst.c_inf, rel_tol=1e-12, abs_tol=0.0)
        expected = delta_feas / (4 * n**4 * math.sqrt(m) * self.kappa_hat**2)
        assert math.isclose(self.C_bar * math.sqrt(self.zeta), expected, rel_tol=1e-12)
        # These lower bounds follow from n * kappa * ||A||_1 >= 1, which holds
        # for the true kappa; a violation means the guess is too small.
        if self.C < math.sqrt(m) * (1 - 1e-12) or self.C_bar < 64 * math.sqrt(m) * (1 - 1e-12):
            raise KappaTooSmall("n * kappa_hat * ||A||_1 < 1")

    @property
    def window(self) -> tuple[float, float]:
        w = self.C_bar**2 * self.zeta
        return w, 2 * w


@dataclass(frozen=True)
class RoundedCost:
    c_hat: np.ndarray


def round_cost(c, epsilon: float) -> RoundedCost:
    """Round ``c / ||c||_inf`` toward zero onto multiples of ``epsilon``."""
    c = np.asarray(c, dtype=float)
    c_inf = float(np.max(np.abs(c))) if c.size else 0.0
    if c_inf == 0:
        raise ValueError("c = 0 has no rounded cost; use the pure feasibility path")
    grid = round(1 / epsilon)
    if not math.isclose(grid * epsilon, 1.0, rel_tol=1e-14):
        raise ValueError("1/epsilon must be an integer")
    scale = Fraction(c_inf)
    steps = np.array([math.floor(Fraction(abs(v)) * grid / scale) for v in c.tolist()], dtype=float)
    c_hat = np.sign(c) * steps / grid
    c_hat.setflags(write=False)
    return RoundedCost(c_hat)


def _c_hat(c_hat) -> np.ndarray:
    return c_hat.c_hat if isinstance(c_hat, RoundedCost) else np.asarray(c_hat, dtype=float)


def f_tau_eval(inst: LPInstance, c_hat, tau: float, x):
    """Value, gradient, hinge term ``alpha`` and scaled residual norm ``beta``."""
    ch = _c_hat(c_hat)
    x = np.asarray(x, dtype=float)
    a1 = inst.A_norm1
    r = inst.residual(x)
    alpha = max(0.0, float(ch @ x) - tau)
    beta = float(np.linalg.norm(r)) / a1
    value = 0.5 * alpha**2 + 0.5 * beta**2
    grad = alpha * ch + (inst.AT @ r) / a1**2
    return value, grad, alpha, beta


def dual_from_point(inst: LPInstance, c_hat, tau: float, x) -> np.ndarray:
    """Dual estimate ``||c||_inf (b - A x) / (||A||_1^2 alpha)``; needs ``alpha > 0``."""
    ch = _c_hat(c_hat)
    x = np.asarray(x, dtype=float)
    alpha = float(ch @ x) - tau
    if not alpha > 0:
        raise ValueError(f"alpha = {alpha!r} must be positive")
    return inst.c_inf * (inst.b - inst.A @ x) / (inst.A_norm1**2 * alpha)


def spectral_norm(A, iters: int = 2000, rtol: float = 1e-6) -> float:
    """Largest singular value of ``A`` by power iteration, inflated by 5 percent.

    The deterministic start vector keeps solves reproducible. The Rayleigh
    estimate approaches the true norm from below, so the inflation keeps
    ``1 / L`` a valid step size.
    """
    n = A.shape[1]
    if A.nnz == 0:
        return 0.0
    v = np.random.default_rng(0x5EED).standard_normal(n)
    v /= np.linalg.norm(v)
    AT = A.T.tocsr()
    est = 0.0
    for _ in range(iters):
        w = AT @ (A @ v)
        nw = float(np.linalg.norm(w))
        if nw == 0:
            break
        v = w / nw
        new = math.sqrt(nw)
        if abs(new - est) <= rtol * new:
            est = new
            break
        est = new
    return 1.05 * est


def potential_smoothness(inst: LPInstance, c_hat) -> float:
    """Lipschitz bound ``||c_hat||^2 + ||A||_2^2 / ||A||_1^2`` for the gradient.

    The Hessian is dominated by ``c_hat c_hat^T + A^T A / ||A||_1^2`` so this
    is valid, and it never exceeds ``2(n + 1)``.
    """
    ch = _c_hat(c_hat)
    bound = float(ch @ ch) + (spectral_norm(inst.A) / inst.A_norm1) ** 2
    return min(bound, 2.0 * (inst.n + 1))


def potential_objective(inst: LPInstance, c_hat, tau: float, lipschitz_L: float) -> LeastSquaresObjective:
    return LeastSquaresObjective(inst.A, inst.b, lipschitz_L, weight=1.0 / inst.A_norm1**2,
                                 hinge=_c_hat(c_hat), tau=tau)
