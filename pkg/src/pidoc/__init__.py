"""Physics-informed neural control laboratory for the van der Pol oscillator."""

from .losses import LambdaMode, LossBreakdown
from .network import Jet2, LayerSpec, NetworkParams, forward, forward_jet, init_params
from .optimize import LbfgsOptions, OptimResult, Termination, minimize
from .signal import DesiredSignal, desired
from .vdp import Trajectory, VdpConfig, integrate, vdp_rhs

__version__ = "0.1.0"

__all__ = [
    "DesiredSignal",
    "Jet2",
    "LambdaMode",
    "LayerSpec",
    "LbfgsOptions",
    "LossBreakdown",
    "NetworkParams",
    "OptimResult",
    "Termination",
    "Trajectory",
    "VdpConfig",
    "desired",
    "forward",
    "forward_jet",
    "init_params",
    "integrate",
    "minimize",
    "vdp_rhs",
]
