"""
CDF-penalty sparse recovery toolkit

Nonconvex separable penalties built from the cumulative distribution function
of a density on [0, inf), solved with iteratively reweighted l1 on top of an
ADMM weighted-lasso solver, together with recovery-condition checks and a
seeded phase-transition benchmark harness.
"""

__version__ = "1.0.0"
__author__ = "Sparse Recovery Team"
