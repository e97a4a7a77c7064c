"""Exact-arithmetic verification toolkit for K3 surfaces with maximal
Mathieu-group symmetry: number-field towers, lattice classification,
finite matrix groups, Groebner-basis smoothness proofs, CM-point
identifications, and disjoint-conic configurations."""

__version__ = "0.1.0"
