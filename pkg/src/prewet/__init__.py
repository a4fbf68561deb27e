"""Critical-prewetting interface workbench.

Samples the 2d Ising interface under a vanishing field h = lambda/N, extracts
and decomposes Peierls contours, runs exact DP for the effective area-tilted
directed walk, and compares both against the Airy-diffusion reference.
"""

from .model import (BoxGeometry, ModelParams, SpinConfig, critical_beta,
                    hamiltonian, spontaneous_magnetization)

__version__ = "0.1.0"

__all__ = [
    "BoxGeometry",
    "ModelParams",
    "SpinConfig",
    "critical_beta",
    "hamiltonian",
    "spontaneous_magnetization",
    "__version__",
]
