"""Finding approximately feasible points, and the two-phase feasibility scheme."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .fgm import Box, LeastSquaresObjective, RestartSchedule, blocks_for_target, rfgm
from .lp_core import KappaTooSmall, LPInstance
from .potential import spectral_norm


@dataclass
class StepCounter:
    """Running totals shared by every routine of one solve."""

    gradient_steps: int = 0
    restarts: int = 0
    outer_calls: int = 0
    max_depth: int = 0
    lambdas: list | None = None

    def __post_init__(self):
        if self.lambdas is None:
            self.lambdas = []

    def add(self, steps: int, blocks: int) -> None:
        self.gradient_steps += steps
        self.restarts += blocks


def feasibility_schedule(inst: LPInstance, delta: float, kappa_hat: float = 1.0):
    """Objective, schedule and target for ``min 0.5 ||Ax - b||^2`` over the box.

    Smoothness is ``||A||_2^2`` and quadratic growth ``1 / (m kappa)^2``; the
    target ``||A||_1^2 delta^2 / (2m)`` forces ``||Ax - b||_1 <= delta ||A||_1``.
    """
    L = max(spectral_norm(inst.A) ** 2, np.finfo(float).tiny)
    mu = min(1.0 / (inst.m * kappa_hat) ** 2, L)
    obj = LeastSquaresObjective(inst.A, inst.b, L)
    target = inst.A_norm1**2 * delta**2 / (2 * inst.m)
    f0 = 0.5 * float(inst.b @ inst.b)
    k = blocks_for_target(f0, target)
    return obj, RestartSchedule.from_constants(L, mu, max(k, 1)), target


def feasible(inst: LPInstance, delta: float, kappa_hat: float = 1.0, budget_multiplier: float = 1.0,
             counter: StepCounter | None = None, trace=None, depth: int = 0) -> np.ndarray:
    """A point ``x`` in ``[0, u]`` with ``||Ax - b||_1 <= delta ||A||_1``.

    Assumes the system is feasible; raises :class:`KappaTooSmall` when the
    restarted method misses the target within its iteration cap.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    x0 = np.zeros(inst.n)
    if inst.residual_l1(x0) <= delta * inst.A_norm1:
        return x0
    if inst.A.nnz == 0:
        raise KappaTooSmall("zero matrix with nonzero right-hand side")
    obj, schedule, target = feasibility_schedule(inst, delta, kappa_hat)
    cap = int(math.ceil(schedule.k * schedule.h_R * budget_multiplier))
    x, st = rfgm(obj, Box(x0, inst.u), x0, schedule, target_value=target, max_steps=cap)
    if counter is not None:
        counter.add(st.steps, st.blocks)
    if trace is not None:
        trace.emit("FGM", depth, f_value=st.f_final, steps=st.steps)
    if not inst.residual_l1(x) <= delta * inst.A_norm1:
        raise KappaTooSmall(f"feasibility target missed after {st.steps} steps")
    return x


class PhaseOneStatus(str, enum.Enum):
    FEASIBLE_WITH_RHS = "FeasibleWithRHS"
    INFEASIBLE = "Infeasible"


@dataclass
class PhaseOneResult:
    status: PhaseOneStatus
    x_bar: np.ndarray | None
    b_bar: np.ndarray | None
    slack_mass: float = 0.0


def slack_extension(inst: LPInstance) -> LPInstance:
    """``min <1, s+> + <1, s->`` s.t. ``Ax + s+ - s- = b`` with slacks bounded by ``||b||_inf``."""
    m = inst.m
    eye = sp.identity(m, format="csr")
    B = sp.hstack([inst.A, eye, -eye], format="csr")
    cap = float(np.max(np.abs(inst.b)))
    c = np.concatenate([np.zeros(inst.n), np.ones(2 * m)])
    u = np.concatenate([inst.u, np.full(2 * m, cap)])
    return LPInstance(B, inst.b, c, u, name=f"{inst.name}:phase-one")


def two_phase(inst: LPInstance, delta: float, kappa_hat: float = 1.0, config=None, counter=None,
              trace=None) -> PhaseOneResult:
    """Decide feasibility at tolerance ``delta`` and produce a feasible right-hand side.

    Solves the slack extension to ``delta/4`` accuracy with a validated
    certificate. Slack mass at most ``delta/4`` gives ``b_bar = A x_bar``
    with ``||b_bar - b||_1 <= (delta/2) ||A||_1``; anything larger means the
    phase-one optimum is positive, i.e. infeasible at tolerance ``delta``.
    """
    from .driver import attempt

    if not np.any(inst.b):
        x = np.zeros(inst.n)
        return PhaseOneResult(PhaseOneStatus.FEASIBLE_WITH_RHS, x, inst.A @ x)
    ext = slack_extension(inst)
    if trace is not None:
        trace.emit("TwoPhase", 0, steps=0)
    z, _cert = attempt(ext, delta / 4, kappa_hat, config, counter, trace, phase="TwoPhase")
    x = z[: inst.n]
    mass = float(np.sum(z[inst.n:]))
    if mass <= delta / 4:
        return PhaseOneResult(PhaseOneStatus.FEASIBLE_WITH_RHS, x, inst.A @ x, mass)
    return PhaseOneResult(PhaseOneStatus.INFEASIBLE, None, None, mass)
