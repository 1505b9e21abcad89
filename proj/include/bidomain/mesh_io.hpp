#pragma once

#include "bidomain/mesh.hpp"

#include <iosfwd>
#include <span>

namespace bidomain {

// Legacy VTK ASCII unstructured grid: POINTS, CELLS, CELL_TYPES and the
// region tag as CELL_DATA. Coordinates are written with 17 significant
// digits so that reading the file back reproduces the mesh bit for bit.
void write_mesh_vtk(std::ostream& os, const Mesh& mesh);

// Reads the format above (triangles or tetrahedra plus a "region" cell
// scalar). Throws std::invalid_argument on malformed input.
Mesh read_mesh_vtk(std::istream& is);

// Grid plus POINT_DATA: u on every vertex, v on heart vertices (0 elsewhere)
// and a heart mask.
void write_snapshot_vtk(std::ostream& os, const Mesh& mesh, std::span<const double> u,
                        std::span<const double> v, double t);

} // namespace bidomain
