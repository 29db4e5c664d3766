"""First-order linear programming with runtime depending only on the constraint matrix."""

from .driver import DriverConfig, solve
from .lp_core import (
    DualCertificate,
    InstanceError,
    KappaTooSmall,
    LPInstance,
    SolveReport,
    Verdict,
    check_certificate,
    check_delta_feasible,
)

__all__ = [
    "DriverConfig",
    "DualCertificate",
    "InstanceError",
    "KappaTooSmall",
    "LPInstance",
    "SolveReport",
    "Verdict",
    "check_certificate",
    "check_delta_feasible",
    "solve",
]
