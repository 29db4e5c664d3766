"""Seeded instance generators.

Every generator builds ``b`` from a point inside the box, so the generated
instances are feasible by construction (except :func:`gen_infeasible`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lp_core import LPInstance


def _quarter_point(rng, u):
    # Multiples of 1/4 keep b exactly representable.
    return np.round(rng.random(u.size) * u * 4) / 4


def gen_netflow(nodes: int, arcs: int, seed: int) -> LPInstance:
    """Min-cost flow on a random connected directed graph.

    A random spanning tree guarantees connectivity, the remaining arcs join
    random node pairs. Capacities and costs are small integers.
    """
    if nodes < 2:
        raise ValueError("need at least two nodes")
    if arcs < nodes - 1:
        raise ValueError("need arcs >= nodes - 1 for a connected graph")
    rng = np.random.default_rng(seed)
    order = rng.permutation(nodes)
    edges = []
    for i in range(1, nodes):
        tail, head = order[i], order[rng.integers(0, i)]
        edges.append((tail, head) if rng.random() < 0.5 else (head, tail))
    while len(edges) < arcs:
        tail, head = rng.choice(nodes, 2, replace=False)
        edges.append((int(tail), int(head)))
    A = np.zeros((nodes, arcs))
    for j, (tail, head) in enumerate(edges):
        A[tail, j] = 1.0
        A[head, j] = -1.0
    u = rng.integers(1, 6, arcs).astype(float)
    c = rng.integers(-5, 6, arcs).astype(float)
    x0 = _quarter_point(rng, u)
    return LPInstance(A, A @ x0, c, u, name=f"netflow-{nodes}-{arcs}-{seed}")


def gen_random(m: int, n: int, seed: int, magnitude: int = 2) -> LPInstance:
    """Random integer matrix with entries in ``[-magnitude, magnitude]``, full row rank."""
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    rng = np.random.default_rng(seed)
    while True:
        A = rng.integers(-magnitude, magnitude + 1, (m, n)).astype(float)
        if np.linalg.matrix_rank(A) == m and np.all(np.any(A != 0, axis=0)):
            break
    u = rng.integers(1, 4, n).astype(float)
    c = rng.integers(-5, 6, n).astype(float)
    x0 = _quarter_point(rng, u)
    return LPInstance(A, A @ x0, c, u, name=f"random-{m}-{n}-{seed}")


def gen_infeasible(nodes: int, arcs: int, seed: int) -> LPInstance:
    """A flow instance whose supplies do not sum to zero."""
    inst = gen_netflow(nodes, arcs, seed)
    b = inst.b.copy()
    b[0] += 1.0
    return inst.replace(b=b, name=f"infeasible-{nodes}-{arcs}-{seed}")


@dataclass(frozen=True)
class HoffmanWitness:
    """An optimal solution, a suboptimal vertex and an optimal dual for :func:`gen_hoffman`."""

    x_opt: tuple
    x_other: tuple
    pi: tuple
    w_minus: tuple
    w_plus: tuple


def gen_hoffman(epsilon: float) -> tuple[LPInstance, HoffmanWitness]:
    """The simplex ``x1 + x2 + x3 = 1`` in the unit box with cost ``(-epsilon, 0, 1)``.

    The cost is within ``epsilon`` of the normal of the face ``x3 = 0``. The
    vertex ``e2`` on that face has optimality gap ``epsilon`` against the
    unique optimum ``e1`` but lies at distance ``sqrt 2`` from the optimal
    set of the combined primal-dual system. The matrix does not depend on
    ``epsilon``.
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    A = np.array([[1.0, 1.0, 1.0]])
    inst = LPInstance(A, [1.0], [-epsilon, 0.0, 1.0], [1.0, 1.0, 1.0], name=f"hoffman-{epsilon!r}")
    e = Fraction(epsilon)
    witness = HoffmanWitness(
        x_opt=(Fraction(1), Fraction(0), Fraction(0)),
        x_other=(Fraction(0), Fraction(1), Fraction(0)),
        pi=(-e,),
        w_minus=(Fraction(0), e, 1 + e),
        w_plus=(Fraction(0),) * 3,
    )
    return inst, witness


def primal_dual_gap(inst: LPInstance, x, pi, w_plus) -> Fraction:
    """``<c,x> - <b,pi> + <u,w_plus>`` in exact arithmetic."""
    c = [Fraction(v) for v in inst.c]
    b = [Fraction(v) for v in inst.b]
    u = [Fraction(v) for v in inst.u]
    return sum(ci * xi for ci, xi in zip(c, x)) - sum(bi * p for bi, p in zip(b, pi)) + sum(
        ui * w for ui, w in zip(u, w_plus))


def hoffman_ratio(inst: LPInstance, witness: HoffmanWitness) -> float:
    """Distance from the suboptimal primal-dual point to the optimal set, over its gap.

    The optimum is unique because the optimal dual has strictly positive
    reduced cost off its support, so the distance is ``||x_other - x_opt||``.
    """
    gap = primal_dual_gap(inst, witness.x_other, witness.pi, witness.w_plus)
    dist2 = sum((a - b) ** 2 for a, b in zip(witness.x_other, witness.x_opt))
    return math.sqrt(dist2) / float(gap)
