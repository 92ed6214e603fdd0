"""Joint transmit-power and power-splitting optimization for full-duplex SWIPT links."""

from .model import Channel, PowerPair, SplitPair, SystemParams, sum_rate
from .joint_solver import JointSettings, Solution, brute_force_oracle, solve
from .power_solver import PowerSolverSettings, optimize_powers

__all__ = [
    "Channel", "PowerPair", "SplitPair", "SystemParams", "sum_rate",
    "JointSettings", "Solution", "brute_force_oracle", "solve",
    "PowerSolverSettings", "optimize_powers",
]
