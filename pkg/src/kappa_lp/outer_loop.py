"""Recursive variable fixing with cost shifting.

Each level asks the inner loop for a primal-dual pair ``(x, pi)``. Columns
whose reduced cost ``c - A^T pi`` exceeds ``||c||/4`` in magnitude are fixed
at the bound complementarity points to, the cost is shifted to
``c - A^T pi`` and the remaining columns are solved recursively with a
right-hand side reproduced by ``x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .feasibility import StepCounter, feasible
from .inner_loop import InnerConfig, PairStatus, fixing_sets, get_primal_dual_pair, reduced_cost
from .lp_core import KappaTooSmall, LPInstance
from .potential import PotentialParams


@dataclass(frozen=True)
class FixingPlan:
    """Partition of the columns after one inner-loop call.

    ``J1`` holds reduced costs below ``-||c||/4`` and is fixed at ``u``;
    ``J2`` holds reduced costs above ``+||c||/4`` and is fixed at 0.
    """

    J1: np.ndarray
    J2: np.ndarray
    N: np.ndarray
    b_bar: np.ndarray
    c_new: np.ndarray
    lam: float


def classify_indices(inst: LPInstance, pi, x=None) -> FixingPlan:
    """Fixing sets, shifted cost and accuracy gain ``lambda`` for a dual ``pi``.

    ``b_bar = A_N x_N`` needs the primal point; without it ``b_bar`` is the
    product with zeros. ``lambda = ||c||/(2 ||c_new on N||)`` and is infinite
    when the shifted cost vanishes on ``N``.
    """
    J1, J2 = fixing_sets(inst, pi)
    fixed = np.zeros(inst.n, dtype=bool)
    fixed[J1] = True
    fixed[J2] = True
    N = np.flatnonzero(~fixed)
    c_new = reduced_cost(inst, pi)
    xN = np.zeros(len(N)) if x is None else np.asarray(x, dtype=float)[N]
    b_bar = inst.A[:, N] @ xN
    top = float(np.max(np.abs(c_new[N]))) if len(N) else 0.0
    lam = math.inf if top == 0 else inst.c_inf / (2 * top)
    return FixingPlan(J1, J2, N, b_bar, c_new, lam)


def depth_cap(n: int, u_one: float, delta_opt: float) -> int:
    if u_one <= delta_opt:
        return 0
    return max(0, math.ceil(math.log2(n * u_one / delta_opt)))


@dataclass
class OuterConfig:
    budget_multiplier: float = 1.0
    inner: InnerConfig | None = None


def _zero_matrix_solution(inst: LPInstance) -> np.ndarray:
    # With A_N = 0 the constraint is void and each coordinate sits at its cheaper bound.
    return np.where(inst.c < 0, inst.u, 0.0)


def solve_lp(inst: LPInstance, delta_feas: float, delta_opt: float, kappa_hat: float,
             config: OuterConfig | None = None, counter: StepCounter | None = None, trace=None):
    """Approximately feasible and optimal point for a feasible instance.

    Raises :class:`KappaTooSmall` whenever a subroutine reports a failure or
    the recursion exceeds ``ceil(log2(n ||u||_1 / delta_opt))`` levels.
    Returns ``(x, counter)``.
    """
    cfg = config or OuterConfig()
    counter = counter if counter is not None else StepCounter()
    cap = depth_cap(inst.n, inst.u_one, delta_opt)
    x = _solve(inst, delta_feas, delta_opt, kappa_hat, 0, cap, cfg, counter, trace)
    return x, counter


def _solve(inst, delta_feas, delta_opt, kappa_hat, depth, cap, cfg, counter, trace):
    counter.outer_calls += 1
    counter.max_depth = max(counter.max_depth, depth)
    if trace is not None:
        trace.emit("Outer", depth, steps=0)
    if depth > cap:
        raise KappaTooSmall(f"recursion depth {depth} exceeds {cap}")
    if inst.n == 0:
        return np.zeros(0)
    if inst.A.nnz == 0:
        return _zero_matrix_solution(inst)
    if inst.c_inf == 0 or delta_opt >= inst.u_one:
        return feasible(inst, delta_feas, kappa_hat, cfg.budget_multiplier, counter, trace, depth)
    params = PotentialParams.build(inst, delta_feas, kappa_hat)
    inner_cfg = cfg.inner or InnerConfig(budget_multiplier=cfg.budget_multiplier)
    pair = get_primal_dual_pair(inst, delta_feas, delta_opt, params, inner_cfg, trace, depth)
    counter.add(pair.gradient_steps, pair.restarts)
    if pair.status is not PairStatus.OK:
        raise KappaTooSmall(f"inner loop {pair.status.value} at depth {depth}: {pair.reason}")
    plan = classify_indices(inst, pair.pi, pair.x)
    if not plan.lam >= 2:
        raise KappaTooSmall(f"accuracy gain {plan.lam:.3f} < 2 at depth {depth}")
    counter.lambdas.append(plan.lam)
    N = plan.N
    share = len(N) / inst.n
    # A vanishing shifted cost makes any feasible completion optimal.
    next_opt = float(inst.u[N].sum()) if math.isinf(plan.lam) else plan.lam * delta_opt * share
    if len(N) == inst.n:
        sub = inst.replace(c=plan.c_new)
        return _solve(sub, delta_feas, next_opt, kappa_hat, depth + 1, cap, cfg, counter, trace)
    x = np.zeros(inst.n)
    x[plan.J1] = inst.u[plan.J1]
    if len(N):
        sub = inst.restrict(N, b=plan.b_bar, c=plan.c_new[N])
        x[N] = _solve(sub, delta_feas * share, next_opt, kappa_hat, depth + 1, cap, cfg, counter, trace)
    return x
