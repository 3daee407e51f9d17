# This file makes the mesh directory a Python package
from breakage_fvm.mesh.grid import Mesh, locate_cell, make_geometric, make_uniform

__all__ = ['Mesh', 'make_uniform', 'make_geometric', 'locate_cell']
