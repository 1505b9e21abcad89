#pragma once

#include "bidomain/conductivity.hpp"
#include "bidomain/mesh.hpp"
#include "bidomain/sparse.hpp"

#include <array>

namespace bidomain {

// FULL assembles over every element into an N x N matrix; HEART_ONLY
// assembles over HEART elements into an N_H x N_H matrix.
enum class Space { full, heart_only };

// P1 stiffness matrix of the tensor field, one tensor evaluation per element
// at its centroid. Throws AssemblyError on a degenerate element.
SparseMatrix assemble_stiffness(const Mesh& mesh, const TensorField& field, Space space);

// Row-sum lumped mass: vertex i receives |T|/(d+1) from every element T
// containing it. Returned as a diagonal sparse matrix.
SparseMatrix assemble_lumped_mass(const Mesh& mesh, Space space);

// Element stiffness |T| grad(phi_a)^T sigma grad(phi_b) for a simplex given
// by dim+1 points. Only the leading (dim+1)^2 block is meaningful.
std::array<std::array<double, 4>, 4> element_stiffness(int dim, std::span<const Point> pts,
                                                       const Tensor& sigma);

} // namespace bidomain
