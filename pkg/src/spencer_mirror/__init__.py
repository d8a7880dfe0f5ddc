"""Mirror-symmetry verification toolkit: graded extension operators on a
rank-3 Lie algebra, discretized complexes on a periodic curve mesh, spectral
mirror checks, and an exact characteristic-class calculator."""

__version__ = "0.1.0"
