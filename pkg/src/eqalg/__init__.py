"""Exact computations with Burnside rings, transfer systems, and free
Mackey and incomplete Tambara functors over small finite groups."""

from .groups import FiniteGroup, Subgroup, build_group, is_solvable, quotient_group, subgroup_lattice

__all__ = ["FiniteGroup", "Subgroup", "build_group", "is_solvable", "quotient_group", "subgroup_lattice"]
__version__ = "0.1.0"
