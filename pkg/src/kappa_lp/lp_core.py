"""Problem data model and the validity checks every other module relies on.

The problem is ``min <c, x>`` subject to ``A x = b`` and ``0 <= x <= u``.
``A`` is stored as a CSR matrix; every vector is a dense float array.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp


class InstanceError(ValueError):
    """Raised when instance data is malformed or violates a model invariant."""


class KappaTooSmall(RuntimeError):
    """Signals that a run failed in a way consistent with an underestimated kappa."""


class Verdict(str, enum.Enum):
    SOLVED = "Solved"
    INFEASIBLE = "Infeasible"
    KAPPA_CAP_REACHED = "KappaCapReached"


def one_norm(A) -> float:
    """Largest absolute column sum of ``A``."""
    A = sp.csc_matrix(A)
    if A.shape[0] == 0 or A.shape[1] == 0:
        raise InstanceError("matrix must be nonempty")
    sums = np.asarray(abs(A).sum(axis=0)).ravel()
    return float(sums.max())


def _vector(name: str, values, length: int) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    if arr.shape != (length,):
        raise InstanceError(f"{name} has length {arr.size}, expected {length}")
    if not np.all(np.isfinite(arr)):
        raise InstanceError(f"{name} has non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class LPInstance:
    """An instance of ``min <c,x> s.t. Ax = b, 0 <= x <= u``.

    Construction only checks shapes, finiteness and ``u >= 0``. Ingestion
    checks (nonzero ``A``, ``m <= n``, ``||A||_1 >= 1``) live in
    :meth:`validate` because column submatrices built during the solve
    legitimately break them.
    """

    A: sp.csr_matrix
    b: np.ndarray
    c: np.ndarray
    u: np.ndarray
    name: str = ""
    _norms: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        A = sp.csr_matrix(self.A, dtype=float)
        A.sum_duplicates()
        A.eliminate_zeros()
        if not np.all(np.isfinite(A.data)):
            raise InstanceError("A has non-finite entries")
        m, n = A.shape
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", _vector("b", self.b, m))
        object.__setattr__(self, "c", _vector("c", self.c, n))
        object.__setattr__(self, "u", _vector("u", self.u, n))
        if np.any(self.u < 0):
            raise InstanceError("u must be nonnegative")

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def A_norm1(self) -> float:
        if "A1" not in self._norms:
            self._norms["A1"] = one_norm(self.A) if self.A.nnz else 0.0
        return self._norms["A1"]

    @property
    def AT(self) -> sp.csr_matrix:
        """Cached CSR form of the transpose."""
        if "AT" not in self._norms:
            self._norms["AT"] = sp.csr_matrix(self.A.T)
        return self._norms["AT"]

    @property
    def c_inf(self) -> float:
        return float(np.max(np.abs(self.c))) if self.n else 0.0

    @property
    def c_one(self) -> float:
        return float(np.sum(np.abs(self.c)))

    @property
    def u_one(self) -> float:
        return float(np.sum(self.u))

    def residual(self, x) -> np.ndarray:
        return self.A @ np.asarray(x, dtype=float) - self.b

    def residual_l1(self, x) -> float:
        return float(np.sum(np.abs(self.residual(x))))

    def objective(self, x) -> float:
        return float(self.c @ np.asarray(x, dtype=float))

    def validate(self) -> None:
        """Ingestion-level invariants; raises :class:`InstanceError`."""
        if self.A.nnz == 0:
            raise InstanceError("A is identically zero (||A||_1 < 1)")
        if self.m > self.n:
            raise InstanceError(f"m = {self.m} exceeds n = {self.n}")
        if self.A_norm1 < 1:
            raise InstanceError(
                f"||A||_1 = {self.A_norm1!r} < 1; rescale A and b jointly (--normalize)"
            )

    def normalized(self) -> "LPInstance":
        """Scale ``A`` and ``b`` jointly so that ``||A||_1 = 1``."""
        s = self.A_norm1
        if s == 0:
            raise InstanceError("cannot normalize a zero matrix")
        return self.replace(A=self.A / s, b=self.b / s)

    def replace(self, **changes) -> "LPInstance":
        data = dict(A=self.A, b=self.b, c=self.c, u=self.u, name=self.name)
        data.update(changes)
        return LPInstance(**data)

    def restrict(self, cols, b=None, c=None) -> "LPInstance":
        """Column submatrix instance on ``cols`` with optional new ``b``/``c``."""
        cols = np.asarray(cols, dtype=int)
        return LPInstance(
            A=self.A[:, cols],
            b=self.b if b is None else b,
            c=self.c[cols] if c is None else c,
            u=self.u[cols],
            name=self.name,
        )


@dataclass(frozen=True)
class DualCertificate:
    pi: np.ndarray
    w_minus: np.ndarray
    w_plus: np.ndarray


@dataclass
class SolveReport:
    """Outcome of a solve. ``rhs`` is the right-hand side the certificate refers to."""

    x: np.ndarray | None
    certificate: DualCertificate | None
    verdict: Verdict
    kappa_hat_final: float
    gradient_steps: int = 0
    restarts: int = 0
    outer_calls: int = 0
    kappa_attempts: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    rhs: np.ndarray | None = None


def _check_dims(inst: LPInstance, x) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape != (inst.n,):
        raise InstanceError(f"x has length {x.size}, expected {inst.n}")
    return x


def in_box(inst: LPInstance, x) -> bool:
    x = _check_dims(inst, x)
    return bool(np.all(x >= 0) and np.all(x <= inst.u))


def check_delta_feasible(inst: LPInstance, x, delta: float) -> bool:
    """True iff ``x`` lies in the box and ``||Ax - b||_1 <= delta ||A||_1``."""
    if delta < 0:
        raise InstanceError("delta must be nonnegative")
    x = _check_dims(inst, x)
    if not in_box(inst, x):
        return False
    return inst.residual_l1(x) <= delta * inst.A_norm1


def eq_tolerance(inst: LPInstance) -> float:
    return 1e-9 * (1.0 + inst.c_inf)


def certificate_violations(inst: LPInstance, x, cert: DualCertificate, delta: float) -> list[str]:
    """List every failed certificate condition; empty means valid.

    The box-slack and residual conditions are checked in product form so a
    zero denominator makes the bound vacuous.
    """
    x = _check_dims(inst, x)
    pi = np.asarray(cert.pi, dtype=float)
    wm = np.asarray(cert.w_minus, dtype=float)
    wp = np.asarray(cert.w_plus, dtype=float)
    out = []
    if pi.shape != (inst.m,) or wm.shape != (inst.n,) or wp.shape != (inst.n,):
        return ["certificate dimensions do not match the instance"]
    if not (np.all(np.isfinite(pi)) and np.all(np.isfinite(wm)) and np.all(np.isfinite(wp))):
        return ["certificate has non-finite entries"]
    if not in_box(inst, x):
        out.append("x is outside the box [0, u]")
    for label, w in (("w_minus", wm), ("w_plus", wp)):
        bad = np.flatnonzero(w < 0)
        if bad.size:
            out.append(f"{label}[{bad[0]}] = {float(w[bad[0]])!r} is negative")
    eq = inst.AT @ pi + wm - wp - inst.c
    worst = float(np.max(np.abs(eq))) if inst.n else 0.0
    if worst > eq_tolerance(inst):
        out.append(f"A^T pi + w_minus - w_plus - c has max abs entry {worst:.3e}")
    bound = 2.0 * delta * inst.c_inf
    lower = wm * x
    upper = wp * (inst.u - x)
    if np.any(lower > bound):
        i = int(np.argmax(lower))
        out.append(f"w_minus[{i}] * x[{i}] = {lower[i]:.3e} exceeds {bound:.3e}")
    if np.any(upper > bound):
        i = int(np.argmax(upper))
        out.append(f"w_plus[{i}] * (u[{i}] - x[{i}]) = {upper[i]:.3e} exceeds {bound:.3e}")
    pi_inf = float(np.max(np.abs(pi))) if inst.m else 0.0
    prod = pi_inf * inst.residual_l1(x)
    if prod > bound:
        out.append(f"||pi||_inf * ||Ax - b||_1 = {prod:.3e} exceeds {bound:.3e}")
    return out


def check_certificate(inst: LPInstance, x, cert: DualCertificate, delta: float) -> bool:
    """True iff ``cert`` is a ``delta``-certificate for ``x``."""
    try:
        return not certificate_violations(inst, x, cert, delta)
    except InstanceError:
        return False
