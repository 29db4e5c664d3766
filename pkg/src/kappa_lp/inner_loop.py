"""Binary search on the threshold ``tau`` that produces a primal-dual pair.

Each probe minimizes the potential for one ``tau`` with the restarted fast
gradient method. Probes whose value falls below the acceptance window move
the upper end of the search interval down, probes above it move the lower
end up, and a probe inside the window yields the pair ``(x, pi)``. Every
returned pair is checked against the accuracy conditions the outer loop
needs; any failure is reported rather than passed on.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .fgm import Box, RestartSchedule, blocks_for_target, rfgm
from .lp_core import LPInstance
from .potential import (
    PotentialParams,
    dual_from_point,
    potential_objective,
    potential_smoothness,
    round_cost,
)


class PairStatus(str, enum.Enum):
    OK = "Ok"
    WINDOW_MISSED = "WindowMissed"
    GUARANTEE_VIOLATED = "GuaranteeViolated"


@dataclass
class InnerConfig:
    """Knobs for the inner loop.

    ``restart_period`` fixes the block length of the restarted method; None
    uses the length implied by ``L`` and ``mu`` capped at ``max_period``.
    ``practical_window`` widens the acceptance window to the size the
    accuracy checks actually require (see :func:`acceptance_window`).
    """

    budget_multiplier: float = 1.0
    restart_period: int | None = None
    max_period: int = 200
    practical_window: bool = True
    warm_start: bool = False


@dataclass
class PairResult:
    x: np.ndarray
    pi: np.ndarray | None
    theta_value: float
    residual_l1: float
    tau_final: float
    status: PairStatus
    alpha: float = math.nan
    f_value: float = math.nan
    probes: int = 0
    gradient_steps: int = 0
    restarts: int = 0
    fixed_count: int = 0
    reason: str = ""
    search_log: list = field(default_factory=list)


def reduced_cost(inst: LPInstance, pi) -> np.ndarray:
    return inst.c - inst.AT @ np.asarray(pi, dtype=float)


def theta(inst: LPInstance, x, pi, sigma: float) -> float:
    """Mass of ``x`` on coordinates with reduced cost above ``sigma`` plus
    mass of ``u - x`` on coordinates with reduced cost below ``-sigma``."""
    x = np.asarray(x, dtype=float)
    rc = reduced_cost(inst, pi)
    return float(np.sum(x[rc > sigma]) + np.sum((inst.u - x)[rc < -sigma]))


def fixing_sets(inst: LPInstance, pi) -> tuple[np.ndarray, np.ndarray]:
    """Indices with reduced cost below ``-||c||/4`` and above ``+||c||/4``."""
    rc = reduced_cost(inst, pi)
    t = inst.c_inf / 4
    return np.flatnonzero(rc < -t), np.flatnonzero(rc > t)


def acceptance_window(inst: LPInstance, delta_feas: float, params: PotentialParams, practical: bool = True):
    """Lower edge ``W`` of the window ``[W, 2W]``.

    The nominal edge is ``C_bar^2 zeta``. Any value inside ``[W, 2W]`` with
    ``W = (delta_feas / (4 n sqrt(m)))^2`` already forces the residual to
    half of what the feasibility condition allows, and the conditions are
    verified explicitly on return, so the practical edge is the larger of
    the two. The nominal one sits near the resolution limit of doubles.
    """
    nominal = params.C_bar**2 * params.zeta
    if not practical:
        return nominal
    return max(nominal, (delta_feas / (4 * inst.n * math.sqrt(inst.m))) ** 2)


def check_pair(inst: LPInstance, x, pi, delta_feas: float, delta_opt: float, params: PotentialParams, alpha: float):
    """Verify the pair against the outer loop's accuracy conditions.

    Returns ``(failures, theta, residual_l1, fixed_count)``.
    """
    n, m = inst.n, inst.m
    k = params.kappa_hat
    a1 = inst.A_norm1
    th = theta(inst, x, pi, params.sigma)
    res = inst.residual_l1(x)
    J1, J2 = fixing_sets(inst, pi)
    nJ = len(J1) + len(J2)
    fails = []
    lhs = th * a1 + res
    if not lhs <= delta_feas * a1 / n:
        fails.append(f"feasibility: {lhs:.3e} > {delta_feas * a1 / n:.3e}")
    lhs = k * inst.c_one * res + nJ * k * inst.c_one * (2 + k * a1) * th
    if not lhs <= delta_opt * inst.c_inf / n:
        fails.append(f"optimality: {lhs:.3e} > {delta_opt * inst.c_inf / n:.3e}")
    pi_inf = float(np.max(np.abs(pi))) if m else 0.0
    if not pi_inf <= 4 * n * math.sqrt(m) * k * inst.c_inf:
        fails.append(f"dual bound: ||pi|| = {pi_inf:.3e}")
    root = math.sqrt(params.zeta)
    if not th <= n * root / 2:
        fails.append(f"theta {th:.3e} > n sqrt(zeta) / 2 = {n * root / 2:.3e}")
    if not alpha >= 32 * n * k * root:
        fails.append(f"alpha {alpha:.3e} below 32 n kappa sqrt(zeta)")
    if not params.epsilon * alpha >= 4 * root:
        fails.append(f"epsilon * alpha {params.epsilon * alpha:.3e} below 4 sqrt(zeta)")
    return fails, th, res, nJ


def _frank_wolfe_gap(grad, x, box: Box) -> float:
    vertex = np.where(grad > 0, box.lower, box.upper)
    return float(grad @ (x - vertex))


def iteration_cap(inst: LPInstance, params: PotentialParams, blocks: int, multiplier: float) -> int:
    """Per-call gradient step budget ``64 k sqrt(n) m^2 ||A||_1^2 kappa^2 / epsilon``."""
    cap = 64 * max(blocks, 1) * math.sqrt(inst.n) * inst.m**2 * inst.A_norm1**2 * params.kappa_hat**2 / params.epsilon
    return int(min(cap * multiplier, 2**62))


def get_primal_dual_pair(inst: LPInstance, delta_feas: float, delta_opt: float, params: PotentialParams,
                         config: InnerConfig | None = None, trace=None, depth: int = 0) -> PairResult:
    cfg = config or InnerConfig()
    c_hat = round_cost(inst.c, params.epsilon)
    L = potential_smoothness(inst, c_hat)
    W = acceptance_window(inst, delta_feas, params, cfg.practical_window)
    zeta_eff = W / params.C_bar**2
    width = params.C_bar * math.sqrt(zeta_eff)
    tau_plus = inst.u_one
    tau_minus = -inst.u_one - 2 * width
    box = Box(np.zeros(inst.n), inst.u)
    base = potential_objective(inst, c_hat, 0.0, L)
    if cfg.restart_period is not None:
        h = cfg.restart_period
    else:
        h = min(RestartSchedule.restart_period(L, min(params.mu, L)), cfg.max_period)
    x_start = np.zeros(inst.n)
    below = np.nextafter(W, 0.0)
    result = PairResult(x_start, None, math.nan, math.nan, math.nan, PairStatus.WINDOW_MISSED)
    last_x = x_start
    while True:
        if tau_plus - tau_minus < width / 2:
            result.reason = f"interval width {tau_plus - tau_minus:.3e} below {width / 2:.3e}"
            result.x = last_x
            return result
        tau = 0.5 * (tau_plus + tau_minus)
        obj = base.with_tau(tau)
        x0 = last_x if cfg.warm_start else x_start
        f0 = obj.value(x0)
        k = max(blocks_for_target(f0, zeta_eff), 1)
        budget = iteration_cap(inst, params, k, cfg.budget_multiplier)
        # The block count k only suffices at the nominal period; with a
        # shorter period keep going until a decision or the step budget.
        schedule = RestartSchedule(mu=params.mu, h_R=h, k=max(k, -(-budget // h)))
        decision = {}

        def stop(x, f, obj=obj, tau=tau, decision=decision):
            if f > 2 * W:
                _, g = obj.eval(x)
                if f - _frank_wolfe_gap(g, x, box) > 2 * W:
                    decision["side"] = "minus"
                    return True
            elif f >= W and float(c_hat.c_hat @ x) - tau > 0:
                alpha = float(c_hat.c_hat @ x) - tau
                pi = dual_from_point(inst, c_hat, tau, x)
                fails, *_ = check_pair(inst, x, pi, delta_feas, delta_opt, params, alpha)
                if not fails:
                    decision["side"] = "window"
                    return True
            return False

        x, st = rfgm(obj, box, x0, schedule, target_value=below, max_steps=budget, should_stop=stop)
        result.probes += 1
        result.gradient_steps += st.steps
        result.restarts += st.blocks
        f = st.f_final
        last_x = x
        result.search_log.append((tau, f))
        if trace is not None:
            trace.emit("Inner", depth, tau=tau, f_value=f, steps=0)
            trace.emit("FGM", depth, tau=tau, f_value=f, steps=st.steps)
        if st.reached_target or f < W:
            tau_plus = tau
            continue
        side = decision.get("side")
        if side is None and st.budget_exhausted:
            result.status = PairStatus.GUARANTEE_VIOLATED
            result.reason = "gradient step budget exhausted"
            result.x, result.tau_final, result.f_value = x, tau, f
            return result
        if side == "minus" or (side is None and f > 2 * W):
            tau_minus = tau
            continue
        # inside the window
        alpha = float(c_hat.c_hat @ x) - tau
        result.x, result.tau_final, result.f_value, result.alpha = x, tau, f, alpha
        if not alpha > 0:
            result.status = PairStatus.GUARANTEE_VIOLATED
            result.reason = "alpha vanished inside the window"
            return result
        pi = dual_from_point(inst, c_hat, tau, x)
        fails, th, res, nJ = check_pair(inst, x, pi, delta_feas, delta_opt, params, alpha)
        result.pi, result.theta_value, result.residual_l1, result.fixed_count = pi, th, res, nJ
        if fails:
            result.status = PairStatus.GUARANTEE_VIOLATED
            result.reason = "; ".join(fails)
        else:
            result.status = PairStatus.OK
        return result
