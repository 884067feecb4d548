"""Spectral continuation of periodic traveling waves of the bidirectional
Whitham profile equation ``K phi = phi (c - phi/2)(c - phi)``, up to the
cusped wave of greatest height."""

__version__ = "0.1.0"

from .continuation import Branch, BranchConfig, BranchPoint, run_branch  # noqa: E402
from .spectral import CollocationGrid, apply_K, build_grid  # noqa: E402

__all__ = [
    "__version__",
    "Branch",
    "BranchConfig",
    "BranchPoint",
    "run_branch",
    "CollocationGrid",
    "apply_K",
    "build_grid",
]
