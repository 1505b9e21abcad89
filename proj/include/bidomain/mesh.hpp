#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace bidomain {

using Index = std::int32_t;

// Coordinates in cm. 2D meshes keep z = 0.
using Point = std::array<double, 3>;

enum class Region : std::uint8_t {
  heart = 0,
  torso_lung = 1,
  torso_cavity = 2,
  torso_other = 3,
};

std::string_view region_name(Region r);

// Checked conversion from an integer tag; throws std::invalid_argument.
Region region_from_int(int tag);

// Simplicial mesh of the thorax with the cardiac region as an exact submesh.
//
// Vertices are ordered heart-first: indices 0..N_H-1 are exactly the
// vertices of HEART elements, so restriction to the heart is a truncation
// of the coefficient vector. Instances are immutable once built.
class Mesh {
 public:
  using Simplex = std::array<Index, 4>;

  // Validates and normalizes raw mesh data: reorders vertices heart-first
  // (stable), remaps elements, and checks every element has positive signed
  // volume. Throws std::invalid_argument on malformed input and
  // AssemblyError on degenerate or inverted elements.
  static Mesh from_parts(int dim, std::vector<Point> vertices,
                         std::vector<Simplex> elements,
                         std::vector<Region> regions);

  int dim() const { return dim_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t heart_vertex_count() const { return heart_count_; }
  std::size_t element_count() const { return regions_.size(); }

  std::span<const Point> vertices() const { return vertices_; }
  std::span<const Simplex> elements() const { return elements_; }
  std::span<const Region> regions() const { return regions_; }

  // Vertex ids of element e; the span has dim+1 entries.
  std::span<const Index> element(std::size_t e) const {
    return {elements_[e].data(), static_cast<std::size_t>(dim_ + 1)};
  }

  std::vector<Index> heart_vertex_ids() const;

  Point centroid(std::size_t e) const;

  // Signed measure (area or volume) of element e.
  double signed_volume(std::size_t e) const;

  bool is_isolated_heart() const { return heart_count_ == vertices_.size(); }

 private:
  Mesh() = default;

  int dim_ = 0;
  std::vector<Point> vertices_;
  std::vector<Simplex> elements_;
  std::vector<Region> regions_;
  std::size_t heart_count_ = 0;
};

// Signed measure of a simplex given by dim+1 points.
double simplex_signed_volume(int dim, std::span<const Point> pts);

// [0,1]^3 split into cells^3 cubes, six Kuhn tetrahedra per cube, every
// element tagged HEART (isolated heart).
Mesh build_cube_mesh(int cells_per_side);

// Isolated-heart square [0,1]^2 with two triangles per cell. Used for small
// 2D test instances.
Mesh build_square_mesh(int cells_per_side);

// [0,1]^2 torso with the heart block [0.25,0.75]^2, a lung block to its left
// and a cavity block to its right. cells_per_side must be divisible by 4.
Mesh build_heart_torso_2d(int cells_per_side);

// Restriction from whole-domain coefficients to heart coefficients.
class RestrictionMap {
 public:
  RestrictionMap(std::size_t n, std::size_t n_heart);
  explicit RestrictionMap(const Mesh& mesh)
      : RestrictionMap(mesh.vertex_count(), mesh.heart_vertex_count()) {}

  std::size_t n() const { return n_; }
  std::size_t n_heart() const { return n_heart_; }

 private:
  std::size_t n_;
  std::size_t n_heart_;
};

std::vector<double> restrict(const RestrictionMap& map, std::span<const double> u);

// Coefficient padding with zeros. This is not the function prolongation by
// zero outside the heart: boundary basis functions keep their torso support.
std::vector<double> transpose_restrict(const RestrictionMap& map,
                                       std::span<const double> v);

} // namespace bidomain
