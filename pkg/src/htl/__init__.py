"""htl: exact workbench for q-combinatorics, incidence algebras,
Kostka-Foulkes polynomials, straightening calculus on type modules,
finite-field subspace counting and p-adic lattice oracles."""

from htl.scalars import CaseTag, Scalar

__all__ = ["CaseTag", "Scalar"]
__version__ = "0.1.0"
