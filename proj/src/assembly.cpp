#include "bidomain/assembly.hpp"

#include "bidomain/errors.hpp"

#include <string>

namespace bidomain {

std::array<std::array<double, 4>, 4> element_stiffness(int dim, std::span<const Point> pts,
                                                       const Tensor& sigma) {
  double const vol = simplex_signed_volume(dim, pts);
  if (!(vol > 0.0)) throw AssemblyError("degenerate element in stiffness assembly");

  // Columns of J are the edge vectors from vertex 0; the barycentric
  // gradients of vertices 1..d are the rows of J^-1.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3> jac(dim, dim);
  for (int a = 0; a < dim; ++a) {
    for (int k = 0; k < dim; ++k) jac(k, a) = pts[static_cast<std::size_t>(a + 1)][k] - pts[0][k];
  }
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 3> grad(dim + 1, dim);
  grad.bottomRows(dim) = jac.inverse();
  grad.row(0) = -grad.bottomRows(dim).colwise().sum();

  std::array<std::array<double, 4>, 4> k{};
  for (int a = 0; a <= dim; ++a) {
    for (int b = a; b <= dim; ++b) {
      double const v = vol * grad.row(a).dot(sigma * grad.row(b).transpose());
      k[a][b] = v;
      k[b][a] = v;
    }
  }
  // Rows of the exact element matrix sum to zero; put the rounding on the
  // diagonal so the assembled matrix annihilates constants more tightly.
  for (int a = 0; a <= dim; ++a) {
    double off = 0.0;
    for (int b = 0; b <= dim; ++b) {
      if (b != a) off += k[a][b];
    }
    k[a][a] = -off;
  }
  return k;
}

namespace {

std::size_t space_size(const Mesh& mesh, Space space) {
  return space == Space::full ? mesh.vertex_count() : mesh.heart_vertex_count();
}

bool in_space(const Mesh& mesh, std::size_t e, Space space) {
  return space == Space::full || mesh.regions()[e] == Region::heart;
}

} // namespace

SparseMatrix assemble_stiffness(const Mesh& mesh, const TensorField& field, Space space) {
  int const dim = mesh.dim();
  auto const nv = static_cast<std::size_t>(dim + 1);
  std::vector<Triplet> trips;
  trips.reserve(mesh.element_count() * nv * nv);
  std::array<Point, 4> pts{};
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    if (!in_space(mesh, e, space)) continue;
    auto ids = mesh.element(e);
    for (std::size_t a = 0; a < nv; ++a) pts[a] = mesh.vertices()[static_cast<std::size_t>(ids[a])];
    if (!(mesh.signed_volume(e) > 0.0)) {
      throw AssemblyError("element " + std::to_string(e) + " is degenerate");
    }
    auto const sigma = field(mesh.centroid(e), mesh.regions()[e]);
    auto const k = element_stiffness(dim, {pts.data(), nv}, sigma);
    for (std::size_t a = 0; a < nv; ++a) {
      for (std::size_t b = 0; b < nv; ++b) {
        trips.push_back({static_cast<std::size_t>(ids[a]), static_cast<std::size_t>(ids[b]), k[a][b]});
      }
    }
  }
  auto const n = space_size(mesh, space);
  return SparseMatrix::from_triplets(n, n, std::move(trips));
}

SparseMatrix assemble_lumped_mass(const Mesh& mesh, Space space) {
  auto const nv = static_cast<std::size_t>(mesh.dim() + 1);
  std::vector<double> d(space_size(mesh, space), 0.0);
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    if (!in_space(mesh, e, space)) continue;
    double const vol = mesh.signed_volume(e);
    if (!(vol > 0.0)) throw AssemblyError("element " + std::to_string(e) + " is degenerate");
    for (auto id : mesh.element(e)) d[static_cast<std::size_t>(id)] += vol / static_cast<double>(nv);
  }
  return SparseMatrix::diagonal(d);
}

} // namespace bidomain
