"""Multipoint stress mixed finite elements for 2D linear elasticity on quadrilaterals."""

from ._msmfe import (
    MsmfeError,
    QuadMesh,
    case_names,
    convergence_rate,
    convergence_study,
    generate_smooth,
    generate_uniform,
    h2par_coarse_mesh,
    mesh_quality,
    parse_levels,
    read_mesh,
    solve,
    write_vtk,
)

__all__ = [
    "MsmfeError",
    "QuadMesh",
    "case_names",
    "convergence_rate",
    "convergence_study",
    "generate_smooth",
    "generate_uniform",
    "h2par_coarse_mesh",
    "mesh_quality",
    "parse_levels",
    "read_mesh",
    "solve",
    "write_vtk",
]
