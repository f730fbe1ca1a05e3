"""Deformation theory of differential graded Lie algebras, exactly.

Maurer-Cartan solutions over Artinian coefficient algebras, gauge actions,
mapping cones of morphism pairs, obstruction classes, and the path-object
DGLA of a pair, all over exact rational arithmetic on finite-dimensional
models.  Everything is immutable and pure; callers may share objects across
threads freely.
"""

__version__ = "0.1.0"
