"""Top-level solve: feasibility phase, optimization, certificate, kappa doubling.

A run starts from an estimate ``kappa_hat`` of the condition number. Any
subroutine failure that a too-small estimate can explain raises
:class:`KappaTooSmall`; the driver then doubles the estimate and starts the
attempt over, until the estimate passes ``kappa_hat_cap``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .dual_cert import dual_certificate
from .feasibility import PhaseOneStatus, StepCounter, two_phase
from .inner_loop import InnerConfig
from .lp_core import (
    KappaTooSmall,
    LPInstance,
    SolveReport,
    Verdict,
    certificate_violations,
    check_delta_feasible,
)
from .outer_loop import OuterConfig, solve_lp

log = logging.getLogger(__name__)


@dataclass
class DriverConfig:
    delta: float
    kappa_hat_init: float = 1.0
    kappa_hat_cap: float = 2.0**60
    budget_multiplier: float = 1.0
    inner: InnerConfig | None = None

    def __post_init__(self):
        if not (0 < self.delta < 1):
            raise ValueError("delta must lie in (0, 1)")
        if not self.kappa_hat_init >= 1:
            raise ValueError("kappa_hat_init must be at least 1")


@dataclass
class Tolerances:
    """Accuracies passed to the optimization routine for a target ``delta``."""

    delta_opt: float
    delta_feas: float

    @classmethod
    def for_instance(cls, inst: LPInstance, delta: float, kappa_hat: float) -> "Tolerances":
        n, m = inst.n, inst.m
        delta_opt = delta / (8 * n + 4)
        delta_feas = delta_opt / (8 * n * math.sqrt(m) * kappa_hat * inst.A_norm1)
        return cls(delta_opt, delta_feas)


def attempt(inst: LPInstance, delta: float, kappa_hat: float, config: DriverConfig | None = None,
            counter: StepCounter | None = None, trace=None, phase: str = "Solve"):
    """One pass at a fixed ``kappa_hat`` on a feasible instance.

    Returns ``(x, certificate)`` where ``x`` is ``delta_feas``-feasible and the
    certificate is a ``2 delta_opt``-certificate for it. Raises
    :class:`KappaTooSmall` on any failure.
    """
    counter = counter if counter is not None else StepCounter()
    mult = config.budget_multiplier if config is not None else 1.0
    inner = config.inner if config is not None else None
    tol = Tolerances.for_instance(inst, delta, kappa_hat)
    outer = OuterConfig(budget_multiplier=mult, inner=inner)
    x, _ = solve_lp(inst, tol.delta_feas, tol.delta_opt, kappa_hat, outer, counter, trace)
    if not check_delta_feasible(inst, x, tol.delta_feas):
        raise KappaTooSmall(f"{phase}: point misses the feasibility tolerance {tol.delta_feas:.3e}")
    cert = dual_certificate(inst, x, tol.delta_feas, tol.delta_opt, kappa_hat, mult, counter, trace)
    problems = certificate_violations(inst, x, cert, 2 * tol.delta_opt)
    if problems:
        raise KappaTooSmall(f"{phase}: " + "; ".join(problems))
    return x, cert


@dataclass
class _Attempt:
    kappa_hat: float
    outcome: str
    steps: int
    detail: str = ""
    lambdas: list = field(default_factory=list)
    max_depth: int = 0


def solve(inst: LPInstance, config: DriverConfig, trace=None) -> SolveReport:
    """Solve ``inst`` to accuracy ``config.delta`` with kappa doubling.

    The verdict is ``Solved`` with a point and certificate, ``Infeasible``
    when the feasibility phase finds positive slack, or ``KappaCapReached``
    when the estimate passes the cap without success.
    """
    inst.validate()
    total = StepCounter()
    attempts = []
    kappa_hat = float(config.kappa_hat_init)
    while kappa_hat <= config.kappa_hat_cap:
        counter = StepCounter()
        try:
            phase_one = two_phase(inst, config.delta, kappa_hat, config, counter, trace)
            if phase_one.status is PhaseOneStatus.INFEASIBLE:
                _merge(total, counter)
                attempts.append(_record(kappa_hat, "infeasible", counter, f"slack {phase_one.slack_mass:.3e}"))
                return _report(None, None, Verdict.INFEASIBLE, kappa_hat, total, attempts)
            sub = inst.replace(b=phase_one.b_bar)
            x, cert = attempt(sub, config.delta, kappa_hat, config, counter, trace)
            if not check_delta_feasible(inst, x, config.delta):
                raise KappaTooSmall("point misses delta-feasibility for the original right-hand side")
        except KappaTooSmall as exc:
            _merge(total, counter)
            attempts.append(_record(kappa_hat, "kappa too small", counter, str(exc)))
            log.debug("kappa_hat=%g failed: %s", kappa_hat, exc)
            kappa_hat *= 2
            continue
        _merge(total, counter)
        attempts.append(_record(kappa_hat, "solved", counter))
        report = _report(x, cert, Verdict.SOLVED, kappa_hat, total, attempts)
        report.rhs = sub.b
        return report
    return _report(None, None, Verdict.KAPPA_CAP_REACHED, kappa_hat / 2, total, attempts)


def _merge(total: StepCounter, part: StepCounter) -> None:
    total.add(part.gradient_steps, part.restarts)
    total.outer_calls += part.outer_calls
    total.max_depth = max(total.max_depth, part.max_depth)
    total.lambdas.extend(part.lambdas)


def _record(kappa_hat, outcome, counter: StepCounter, detail="") -> _Attempt:
    return _Attempt(kappa_hat, outcome, counter.gradient_steps, detail, list(counter.lambdas), counter.max_depth)


def _report(x, cert, verdict, kappa_hat, total: StepCounter, attempts) -> SolveReport:
    return SolveReport(
        x=None if x is None else np.asarray(x, dtype=float),
        certificate=cert,
        verdict=verdict,
        kappa_hat_final=kappa_hat,
        gradient_steps=total.gradient_steps,
        restarts=total.restarts,
        outer_calls=total.outer_calls,
        kappa_attempts=attempts,
        notes=[f"max recursion depth {total.max_depth}"],
    )
