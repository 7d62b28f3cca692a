"""carc - causal reasoning testbed over ARC-style pixel grids."""

__version__ = "0.1.0"
