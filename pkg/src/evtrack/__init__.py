"""Event-camera feature tracking along continuous-time SE(2) B-spline
trajectories, optimized by sliding-window contrast maximization."""

__version__ = "0.1.0"

from .kernels import BACKEND

__all__ = ["BACKEND", "__version__"]
