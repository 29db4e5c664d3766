"""Restarted fast gradient method for smooth convex minimization over a box.

One block is ``h`` steps of constant-step accelerated projected gradient::

    y[t+1] = proj(x[t] - grad f(x[t]) / L)
    x[t+1] = y[t+1] + (t - 1) / (t + 2) * (y[t+1] - y[t])

and returns the best point seen, so the value never increases across blocks.
The restarted method runs blocks of length ``h_R = ceil(2e sqrt(L / mu))``,
which shrinks the optimality gap by ``e^2`` per block whenever ``mu`` is a
valid quadratic growth constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp

from . import _kernels


class NumericError(ArithmeticError):
    """A non-finite objective value or gradient was produced."""


class SmoothObjective:
    """A differentiable function with an ``L``-Lipschitz gradient.

    ``eval(x)`` returns ``(value, gradient)``.
    """

    def __init__(self, eval: Callable[[np.ndarray], tuple[float, np.ndarray]], lipschitz_L: float):
        if not lipschitz_L > 0:
            raise ValueError("lipschitz_L must be positive")
        self.eval = eval
        self.lipschitz_L = float(lipschitz_L)

    def value(self, x) -> float:
        return float(self.eval(x)[0])


class LeastSquaresObjective(SmoothObjective):
    """``0.5 * max(0, <h,x> - tau)^2 + 0.5 * weight * ||K x - d||^2``.

    The hinge term is present only when ``hinge`` is given. Minimization of
    this family runs through a compiled loop.
    """

    def __init__(self, K, d, lipschitz_L: float, weight: float = 1.0, hinge=None, tau: float = 0.0):
        self.K = sp.csr_matrix(K, dtype=float)
        self.KT = sp.csr_matrix(self.K.T)
        self.d = np.ascontiguousarray(d, dtype=float)
        self.weight = float(weight)
        self.use_hinge = hinge is not None
        n = self.K.shape[1]
        self.hinge = np.zeros(n) if hinge is None else np.ascontiguousarray(hinge, dtype=float)
        self.tau = float(tau)
        super().__init__(self._evaluate, lipschitz_L)

    def _evaluate(self, x):
        x = np.asarray(x, dtype=float)
        r = self.K @ x - self.d
        val = 0.5 * self.weight * float(r @ r)
        grad = self.weight * (self.KT @ r)
        if self.use_hinge:
            s = float(self.hinge @ x) - self.tau
            if s > 0:
                val += 0.5 * s * s
                grad = grad + s * self.hinge
        return val, grad

    def value(self, x) -> float:
        x = np.ascontiguousarray(x, dtype=float)
        K = self.K
        return float(_kernels.objective_value(K.indptr, K.indices, K.data, self.d, self.weight,
                                              self.hinge, self.use_hinge, self.tau, x))

    def with_tau(self, tau: float) -> "LeastSquaresObjective":
        clone = object.__new__(LeastSquaresObjective)
        clone.__dict__.update(self.__dict__)
        clone.tau = float(tau)
        clone.eval = clone._evaluate
        return clone


@dataclass(frozen=True)
class Box:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.ascontiguousarray(self.lower, dtype=float)
        hi = np.ascontiguousarray(self.upper, dtype=float)
        if lo.shape != hi.shape or np.any(lo > hi):
            raise ValueError("box needs matching shapes and lower <= upper")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    def contains(self, x) -> bool:
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))


def project_box(y, lower, upper) -> np.ndarray:
    """Componentwise clamp of ``y`` into ``[lower, upper]``; infinite edges pass through."""
    return np.minimum(np.maximum(np.asarray(y, dtype=float), lower), upper)


@dataclass(frozen=True)
class RestartSchedule:
    """Block length ``h_R`` and block count ``k`` for the restarted method."""

    mu: float
    h_R: int
    k: int

    def __post_init__(self):
        if self.h_R < 6 or self.k < 0:
            raise ValueError("need h_R >= 6 and k >= 0")

    @staticmethod
    def restart_period(L: float, mu: float) -> int:
        if not (mu > 0 and L >= mu):
            raise ValueError("need 0 < mu <= L")
        return int(math.ceil(2 * math.e * math.sqrt(L / mu)))

    @classmethod
    def from_constants(cls, L: float, mu: float, k: int) -> "RestartSchedule":
        return cls(mu=mu, h_R=cls.restart_period(L, mu), k=k)


def blocks_for_target(f0: float, target: float) -> int:
    """Blocks needed to go from ``f0`` to ``target`` assuming ``f* >= 0``."""
    if f0 <= target:
        return 0
    if target <= 0:
        raise ValueError("target must be positive when f0 exceeds it")
    return int(math.ceil(0.5 * math.log(f0 / target)))


@dataclass
class RFGMStats:
    steps: int = 0
    blocks: int = 0
    f_initial: float = math.nan
    f_final: float = math.nan
    reached_target: bool = False
    stalled: bool = False
    budget_exhausted: bool = False


def _generic_block(obj: SmoothObjective, lo, hi, x0, f0, h, target):
    L = obj.lipschitz_L
    x = np.array(x0, dtype=float)
    y_prev = x.copy()
    best, f_best = x.copy(), f0
    steps = 0
    for t in range(1, h + 1):
        _, g = obj.eval(x)
        if not np.all(np.isfinite(g)):
            raise NumericError("non-finite gradient")
        y = project_box(x - g / L, lo, hi)
        f_y, _ = obj.eval(y)
        steps += 1
        if not math.isfinite(f_y):
            raise NumericError("non-finite objective value")
        if f_y < f_best:
            best, f_best = y.copy(), f_y
        if f_y <= target:
            return best, f_best, steps, True
        x = y + ((t - 1.0) / (t + 2.0)) * (y - y_prev)
        y_prev = y
    return best, f_best, steps, False


def _block(obj, box: Box, x0, f0, h, target):
    if isinstance(obj, LeastSquaresObjective):
        K, T = obj.K, obj.KT
        best, f_best, steps, status = _kernels.fista_block(
            K.indptr, K.indices, K.data, T.indptr, T.indices, T.data, obj.d, obj.weight,
            obj.hinge, obj.use_hinge, obj.tau, box.lower, box.upper,
            np.ascontiguousarray(x0, dtype=float), float(f0), obj.lipschitz_L, int(h), float(target))
        if status < 0:
            raise NumericError("non-finite objective value")
        return best, float(f_best), int(steps), status == 1
    return _generic_block(obj, box.lower, box.upper, x0, f0, h, target)


def fgm_block(obj: SmoothObjective, box: Box, x0, h: int) -> np.ndarray:
    """``h`` accelerated projected gradient steps from ``x0``; returns the best point."""
    if h < 1:
        raise ValueError("h must be at least 1")
    x0 = np.asarray(x0, dtype=float)
    f0 = obj.value(x0)
    if not math.isfinite(f0):
        raise NumericError("non-finite objective value at the start point")
    return _block(obj, box, x0, f0, h, -math.inf)[0]


def rfgm(obj: SmoothObjective, box: Box, x0, schedule: RestartSchedule, target_value: float | None = None,
         max_steps: int | None = None, on_block: Callable | None = None,
         should_stop: Callable | None = None):
    """Restarted fast gradient method.

    Runs up to ``schedule.k`` blocks, each restarted from the best point of
    the previous one. Stops early once the value reaches ``target_value``,
    when a block makes no progress (a restart from the same point would
    repeat it exactly), when ``max_steps`` gradient steps are spent, or when
    ``should_stop(x, f)`` returns true after a block. Returns ``(x, RFGMStats)``.
    """
    x = np.array(x0, dtype=float)
    f = obj.value(x)
    if not math.isfinite(f):
        raise NumericError("non-finite objective value at the start point")
    target = -math.inf if target_value is None else float(target_value)
    stats = RFGMStats(f_initial=f, f_final=f)
    if f <= target:
        stats.reached_target = True
        return x, stats
    for _ in range(schedule.k):
        h = schedule.h_R
        if max_steps is not None:
            h = min(h, max_steps - stats.steps)
            if h <= 0:
                stats.budget_exhausted = True
                break
        x_new, f_new, steps, hit = _block(obj, box, x, f, h, target)
        stats.steps += steps
        stats.blocks += 1
        progressed = f_new < f
        x, f = x_new, f_new
        if on_block is not None:
            on_block(f, steps)
        if hit:
            stats.reached_target = True
            break
        if not progressed:
            stats.stalled = True
            break
        if should_stop is not None and should_stop(x, f):
            break
    stats.f_final = f
    return x, stats
