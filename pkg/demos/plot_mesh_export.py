"""
Cube meshes
===========

Build the five-tetrahedra-per-cell meshes and export one for inspection in
ParaView or similar.

"""

import numpy as np

from hsymcurl.mesh import generate_cube_mesh, write_vtk

for n in (2, 4, 6, 8, 10):
    m = generate_cube_mesh(n)
    vol = np.linalg.det(m.jacobians).sum() / 6
    print(f"n={n:2d}: {m.n_vertices:5d} vertices {m.n_edges:5d} edges {m.n_tets:5d} tets, volume {vol:.12f}")

write_vtk(generate_cube_mesh(4), "cube4.vtk")
print("wrote cube4.vtk")
