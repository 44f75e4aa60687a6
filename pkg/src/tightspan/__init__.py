"""Makespan minimization on unrelated machines with feasibility-factor bounds.

``a_um`` rounds the budgeted assignment LP and rebalances to makespan at most
``min(T + L/eps, 2T)``; ``solve_restricted`` balances restricted instances to
makespan at most ``p_max + L/eps``.
"""
from .balance import a_um
from .core import INFEASIBLE, Assignment, Instance, average_load, feasibility_factor, load, makespan
from .kernels import BACKEND
from .oracle import optimal_makespan, schedule_exists
from .restricted import ratio_bound, solve_restricted

__all__ = [
    "INFEASIBLE", "Assignment", "Instance", "BACKEND", "a_um", "average_load",
    "feasibility_factor", "load", "makespan", "optimal_makespan", "ratio_bound",
    "schedule_exists", "solve_restricted",
]
__version__ = "0.1.0"
