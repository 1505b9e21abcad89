#include "bidomain/mesh_io.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace bidomain {

namespace {

constexpr int vtk_triangle = 5;
constexpr int vtk_tetra = 10;

void write_grid(std::ostream& os, const Mesh& mesh, const std::string& title) {
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh.vertex_count() << " double\n" << std::setprecision(17);
  for (auto const& p : mesh.vertices()) os << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';

  auto const nv = static_cast<std::size_t>(mesh.dim() + 1);
  os << "CELLS " << mesh.element_count() << ' ' << mesh.element_count() * (nv + 1) << '\n';
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    os << nv;
    for (auto id : mesh.element(e)) os << ' ' << id;
    os << '\n';
  }
  os << "CELL_TYPES " << mesh.element_count() << '\n';
  int const type = mesh.dim() == 2 ? vtk_triangle : vtk_tetra;
  for (std::size_t e = 0; e < mesh.element_count(); ++e) os << type << '\n';
  os << "CELL_DATA " << mesh.element_count() << "\nSCALARS region int 1\nLOOKUP_TABLE default\n";
  for (auto r : mesh.regions()) os << static_cast<int>(r) << '\n';
}

[[noreturn]] void malformed(const std::string& what) {
  throw std::invalid_argument("malformed VTK mesh: " + what);
}

void expect(std::istream& is, const std::string& word) {
  std::string tok;
  if (!(is >> tok) || tok != word) malformed("expected '" + word + "'");
}

template <typename T>
T read_value(std::istream& is, const char* what) {
  T v{};
  if (!(is >> v)) malformed(std::string("could not read ") + what);
  return v;
}

} // namespace

void write_mesh_vtk(std::ostream& os, const Mesh& mesh) {
  write_grid(os, mesh,
             "bidomain mesh dim=" + std::to_string(mesh.dim()) +
                 " N=" + std::to_string(mesh.vertex_count()) +
                 " N_H=" + std::to_string(mesh.heart_vertex_count()));
}

Mesh read_mesh_vtk(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# vtk DataFile", 0) != 0) malformed("missing header");
  std::getline(is, line);  // title
  expect(is, "ASCII");
  expect(is, "DATASET");
  expect(is, "UNSTRUCTURED_GRID");
  expect(is, "POINTS");
  auto const n = read_value<std::size_t>(is, "point count");
  read_value<std::string>(is, "point type");
  std::vector<Point> verts(n);
  for (auto& p : verts) {
    for (auto& c : p) c = read_value<double>(is, "coordinate");
  }

  expect(is, "CELLS");
  auto const ne = read_value<std::size_t>(is, "cell count");
  read_value<std::size_t>(is, "cell list size");
  std::vector<Mesh::Simplex> elems(ne);
  std::size_t nv_first = 0;
  for (std::size_t e = 0; e < ne; ++e) {
    auto const nv = read_value<std::size_t>(is, "cell size");
    if (nv != 3 && nv != 4) malformed("only triangles and tetrahedra are supported");
    if (e == 0) nv_first = nv;
    if (nv != nv_first) malformed("mixed cell types");
    elems[e].fill(-1);
    for (std::size_t a = 0; a < nv; ++a) elems[e][a] = read_value<Index>(is, "vertex id");
  }

  expect(is, "CELL_TYPES");
  if (read_value<std::size_t>(is, "cell type count") != ne) malformed("cell type count");
  int const want = nv_first == 3 ? vtk_triangle : vtk_tetra;
  for (std::size_t e = 0; e < ne; ++e) {
    if (read_value<int>(is, "cell type") != want) malformed("cell type does not match cell size");
  }

  expect(is, "CELL_DATA");
  if (read_value<std::size_t>(is, "cell data count") != ne) malformed("cell data count");
  expect(is, "SCALARS");
  expect(is, "region");
  read_value<std::string>(is, "scalar type");
  // Optional component count before LOOKUP_TABLE.
  if (read_value<std::string>(is, "lookup table") != "LOOKUP_TABLE") expect(is, "LOOKUP_TABLE");
  read_value<std::string>(is, "lookup table name");
  std::vector<Region> regions(ne);
  for (auto& r : regions) r = region_from_int(read_value<int>(is, "region tag"));

  int const dim = nv_first == 3 ? 2 : 3;
  if (dim == 2) {
    for (auto& p : verts) p[2] = 0.0;
  }
  return Mesh::from_parts(dim, std::move(verts), std::move(elems), std::move(regions));
}

void write_snapshot_vtk(std::ostream& os, const Mesh& mesh, std::span<const double> u,
                        std::span<const double> v, double t) {
  if (u.size() != mesh.vertex_count() || v.size() != mesh.heart_vertex_count()) {
    throw std::invalid_argument("write_snapshot_vtk: field sizes do not match the mesh");
  }
  std::ostringstream title;
  title << "bidomain snapshot t=" << std::setprecision(10) << t << " ms";
  write_grid(os, mesh, title.str());
  os << "POINT_DATA " << mesh.vertex_count() << '\n';
  os << "SCALARS u double 1\nLOOKUP_TABLE default\n";
  for (double x : u) os << x << '\n';
  os << "SCALARS v double 1\nLOOKUP_TABLE default\n";
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
    os << (i < v.size() ? v[i] : 0.0) << '\n';
  }
  os << "SCALARS heart int 1\nLOOKUP_TABLE default\n";
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i) os << (i < v.size() ? 1 : 0) << '\n';
}

} // namespace bidomain
