"""Exact computer algebra for torus-equivariant etale endomorphisms of
pseudo-planes: number-field arithmetic, polynomial kernels, surface models,
certificates, closed-form constructors, deformation families, and a CLI.
"""

__version__ = "0.1.0"
