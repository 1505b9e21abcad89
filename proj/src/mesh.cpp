#include "bidomain/mesh.hpp"

#include "bidomain/errors.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bidomain {

std::string_view region_name(Region r) {
  switch (r) {
    case Region::heart: return "HEART";
    case Region::torso_lung: return "TORSO_LUNG";
    case Region::torso_cavity: return "TORSO_CAVITY";
    case Region::torso_other: return "TORSO_OTHER";
  }
  return "UNKNOWN";
}

Region region_from_int(int tag) {
  if (tag < 0 || tag > 3) {
    throw std::invalid_argument("unknown region tag " + std::to_string(tag));
  }
  return static_cast<Region>(tag);
}

double simplex_signed_volume(int dim, std::span<const Point> p) {
  if (dim == 2) {
    double ax = p[1][0] - p[0][0], ay = p[1][1] - p[0][1];
    double bx = p[2][0] - p[0][0], by = p[2][1] - p[0][1];
    return 0.5 * (ax * by - ay * bx);
  }
  double a[3], b[3], c[3];
  for (int k = 0; k < 3; ++k) {
    a[k] = p[1][k] - p[0][k];
    b[k] = p[2][k] - p[0][k];
    c[k] = p[3][k] - p[0][k];
  }
  double det = a[0] * (b[1] * c[2] - b[2] * c[1]) -
               a[1] * (b[0] * c[2] - b[2] * c[0]) +
               a[2] * (b[0] * c[1] - b[1] * c[0]);
  return det / 6.0;
}

Mesh Mesh::from_parts(int dim, std::vector<Point> vertices,
                      std::vector<Simplex> elements,
                      std::vector<Region> regions) {
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("mesh dimension must be 2 or 3");
  }
  if (elements.size() != regions.size()) {
    throw std::invalid_argument("one region tag is required per element");
  }
  if (elements.empty()) throw std::invalid_argument("mesh has no elements");

  auto const n = vertices.size();
  auto const nv = static_cast<std::size_t>(dim + 1);

  std::vector<char> in_heart(n, 0);
  for (std::size_t e = 0; e < elements.size(); ++e) {
    auto& el = elements[e];
    for (std::size_t a = 0; a < nv; ++a) {
      if (el[a] < 0 || static_cast<std::size_t>(el[a]) >= n) {
        throw std::invalid_argument("element " + std::to_string(e) +
                                    " references a missing vertex");
      }
      for (std::size_t b = 0; b < a; ++b) {
        if (el[a] == el[b]) {
          throw std::invalid_argument("element " + std::to_string(e) +
                                      " repeats a vertex");
        }
      }
    }
    for (std::size_t a = nv; a < 4; ++a) el[a] = -1;
    if (regions[e] == Region::heart) {
      for (std::size_t a = 0; a < nv; ++a) in_heart[static_cast<std::size_t>(el[a])] = 1;
    }
  }

  // Stable heart-first permutation: new_of_old[old] = new.
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_partition(order.begin(), order.end(),
                        [&](Index i) { return in_heart[static_cast<std::size_t>(i)] != 0; });
  std::vector<Index> new_of_old(n);
  for (std::size_t k = 0; k < n; ++k) {
    new_of_old[static_cast<std::size_t>(order[k])] = static_cast<Index>(k);
  }

  Mesh m;
  m.dim_ = dim;
  m.heart_count_ = static_cast<std::size_t>(
      std::count(in_heart.begin(), in_heart.end(), char{1}));
  m.vertices_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    m.vertices_[k] = vertices[static_cast<std::size_t>(order[k])];
  }
  for (auto& el : elements) {
    for (std::size_t a = 0; a < nv; ++a) {
      el[a] = new_of_old[static_cast<std::size_t>(el[a])];
    }
  }
  m.elements_ = std::move(elements);
  m.regions_ = std::move(regions);

  for (std::size_t e = 0; e < m.element_count(); ++e) {
    if (!(m.signed_volume(e) > 0.0)) {
      throw AssemblyError("element " + std::to_string(e) +
                          " has non-positive signed volume");
    }
  }
  return m;
}

std::vector<Index> Mesh::heart_vertex_ids() const {
  std::vector<Index> ids(heart_count_);
  std::iota(ids.begin(), ids.end(), Index{0});
  return ids;
}

Point Mesh::centroid(std::size_t e) const {
  Point c{0.0, 0.0, 0.0};
  auto ids = element(e);
  for (auto id : ids) {
    auto const& p = vertices_[static_cast<std::size_t>(id)];
    for (int k = 0; k < 3; ++k) c[k] += p[k];
  }
  for (auto& x : c) x /= static_cast<double>(ids.size());
  return c;
}

double Mesh::signed_volume(std::size_t e) const {
  std::array<Point, 4> pts{};
  auto ids = element(e);
  for (std::size_t a = 0; a < ids.size(); ++a) {
    pts[a] = vertices_[static_cast<std::size_t>(ids[a])];
  }
  return simplex_signed_volume(dim_, {pts.data(), ids.size()});
}

namespace {

// Orients a simplex so that its signed volume is positive.
void orient(int dim, const std::vector<Point>& verts, Mesh::Simplex& s) {
  std::array<Point, 4> pts{};
  for (int a = 0; a <= dim; ++a) pts[a] = verts[static_cast<std::size_t>(s[a])];
  if (simplex_signed_volume(dim, {pts.data(), static_cast<std::size_t>(dim + 1)}) < 0.0) {
    std::swap(s[0], s[1]);
  }
}

struct Grid2d {
  int cells;
  std::vector<Point> vertices;
  std::vector<Mesh::Simplex> elements;
  std::vector<std::array<int, 2>> element_cell;
};

Grid2d triangulate_square(int cells) {
  Grid2d g{cells, {}, {}, {}};
  double const h = 1.0 / cells;
  auto id = [cells](int i, int j) { return static_cast<Index>(j * (cells + 1) + i); };
  for (int j = 0; j <= cells; ++j) {
    for (int i = 0; i <= cells; ++i) g.vertices.push_back({i * h, j * h, 0.0});
  }
  for (int j = 0; j < cells; ++j) {
    for (int i = 0; i < cells; ++i) {
      // Kuhn split along the (0,0)-(1,1) diagonal.
      g.elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), -1});
      g.elements.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1), -1});
      g.element_cell.push_back({i, j});
      g.element_cell.push_back({i, j});
    }
  }
  for (auto& s : g.elements) orient(2, g.vertices, s);
  return g;
}

} // namespace

Mesh build_cube_mesh(int cells) {
  if (cells < 2) {
    throw std::invalid_argument("build_cube_mesh: cells_per_side must be >= 2");
  }
  double const h = 1.0 / cells;
  int const np = cells + 1;
  auto id = [np](int i, int j, int k) { return static_cast<Index>((k * np + j) * np + i); };

  std::vector<Point> verts;
  verts.reserve(static_cast<std::size_t>(np) * np * np);
  for (int k = 0; k < np; ++k)
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < np; ++i) verts.push_back({i * h, j * h, k * h});

  // Each permutation of the axes gives one tetrahedron on the monotone path
  // from corner (0,0,0) to corner (1,1,1).
  constexpr std::array<std::array<int, 3>, 6> perms{{
      {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

  std::vector<Mesh::Simplex> elems;
  elems.reserve(static_cast<std::size_t>(6) * cells * cells * cells);
  for (int k = 0; k < cells; ++k)
    for (int j = 0; j < cells; ++j)
      for (int i = 0; i < cells; ++i)
        for (auto const& p : perms) {
          std::array<int, 3> c{i, j, k};
          Mesh::Simplex s{};
          s[0] = id(c[0], c[1], c[2]);
          for (int step = 0; step < 3; ++step) {
            ++c[p[step]];
            s[step + 1] = id(c[0], c[1], c[2]);
          }
          orient(3, verts, s);
          elems.push_back(s);
        }

  std::vector<Region> regions(elems.size(), Region::heart);
  return Mesh::from_parts(3, std::move(verts), std::move(elems), std::move(regions));
}

Mesh build_square_mesh(int cells) {
  if (cells < 2) {
    throw std::invalid_argument("build_square_mesh: cells_per_side must be >= 2");
  }
  auto g = triangulate_square(cells);
  std::vector<Region> regions(g.elements.size(), Region::heart);
  return Mesh::from_parts(2, std::move(g.vertices), std::move(g.elements),
                          std::move(regions));
}

Mesh build_heart_torso_2d(int cells) {
  if (cells <= 0 || cells % 4 != 0) {
    throw std::invalid_argument(
        "build_heart_torso_2d: cells_per_side must be a positive multiple of 4");
  }
  auto g = triangulate_square(cells);
  int const q = cells / 4;
  std::vector<Region> regions;
  regions.reserve(g.elements.size());
  for (auto const& [i, j] : g.element_cell) {
    bool const mid_band = j >= q && j < 3 * q;
    if (mid_band && i >= q && i < 3 * q) {
      regions.push_back(Region::heart);
    } else if (mid_band && i < q) {
      regions.push_back(Region::torso_lung);
    } else if (mid_band && i >= 3 * q) {
      regions.push_back(Region::torso_cavity);
    } else {
      regions.push_back(Region::torso_other);
    }
  }
  return Mesh::from_parts(2, std::move(g.vertices), std::move(g.elements),
                          std::move(regions));
}

RestrictionMap::RestrictionMap(std::size_t n, std::size_t n_heart)
    : n_(n), n_heart_(n_heart) {
  if (n_heart > n) {
    throw std::invalid_argument("restriction: heart size exceeds domain size");
  }
}

std::vector<double> restrict(const RestrictionMap& map, std::span<const double> u) {
  if (u.size() != map.n()) {
    throw std::invalid_argument("restrict: expected a vector of length N");
  }
  return {u.begin(), u.begin() + static_cast<std::ptrdiff_t>(map.n_heart())};
}

std::vector<double> transpose_restrict(const RestrictionMap& map,
                                       std::span<const double> v) {
  if (v.size() != map.n_heart()) {
    throw std::invalid_argument("transpose_restrict: expected a vector of length N_H");
  }
  std::vector<double> u(map.n(), 0.0);
  std::copy(v.begin(), v.end(), u.begin());
  return u;
}

} // namespace bidomain
