"""Four solvers for ``u(t) = S(t) a``, all returning a :class:`Trajectory`."""

from .postwidder import PWTable, generation_bound_check, postwidder_coeffs, solve_postwidder
from .resolvent import solve_resolvent
from .subordination import TauRule, subordination_density, solve_subordination, tau_mean, tau_rule
from .trajectory import Trajectory
from .volterra import solve_volterra

__all__ = [
    "PWTable", "TauRule", "Trajectory", "generation_bound_check", "postwidder_coeffs",
    "solve_postwidder", "solve_resolvent", "solve_subordination", "solve_volterra",
    "subordination_density", "tau_mean", "tau_rule",
]
