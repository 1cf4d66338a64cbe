"""Exact computer algebra for vertex algebras built from possibly degenerate even lattices."""

from .errors import PreconditionError, VHLError, XDependence
from .lattice import Lattice, QuadraticSpace
from .latticeva import LatticeModule, ModuleSpec, algebra, module_new

__all__ = ["Lattice", "LatticeModule", "ModuleSpec", "PreconditionError", "QuadraticSpace", "VHLError",
           "XDependence", "algebra", "module_new"]
__version__ = "0.1.0"
