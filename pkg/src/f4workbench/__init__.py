"""Exact-arithmetic workbench for the rank-one exceptional structure:
root data, the 52-dimensional model with its distinguished vectors, a
PBW engine with the polynomial-part projection, the congruence calculus
defining the image algebra, module-theoretic invariants, and the
combinatorial systems of the induction argument.

All computation is exact over Q(sqrt2).  See the README for the CLI and
the verification suites.
"""

__version__ = "0.1.0"
