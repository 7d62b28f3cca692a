"""Constraint-based causal discovery over flattened grid samples."""

from carc.discovery.citest import CITestResult, DiscreteData, chi_square_ci
from carc.discovery.graph import CausalGraph, EdgeStatus, shd
from carc.discovery.pc import Orientation, Skeleton, meek_closure, pc, pc_orient, pc_skeleton

__all__ = [
    "CITestResult",
    "CausalGraph",
    "DiscreteData",
    "EdgeStatus",
    "Orientation",
    "Skeleton",
    "chi_square_ci",
    "meek_closure",
    "pc",
    "pc_orient",
    "pc_skeleton",
    "shd",
]
