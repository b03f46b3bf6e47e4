#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

namespace anderson {

inline constexpr int kMaxDim = 3;

// Integer lattice point. Coordinates past dim() are kept at zero so that the
// default lexicographic comparison orders sites of equal dimension.
using Site = std::array<std::int64_t, kMaxDim>;
using Point = std::array<double, kMaxDim>;
using Rational = boost::rational<std::int64_t>;

std::int64_t sup_distance(const Site& a, const Site& b);
std::int64_t l1_distance(const Site& a, const Site& b);

// Finite subset of Z^d. Sites are stored in lexicographic order and the
// position of a site in that order is its index.
class Region {
 public:
  Region() = default;
  Region(int dim, std::vector<Site> sites);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return sites_.size(); }
  bool empty() const noexcept { return sites_.empty(); }
  const std::vector<Site>& sites() const noexcept { return sites_; }
  const Site& operator[](std::size_t i) const { return sites_[i]; }
  auto begin() const noexcept { return sites_.begin(); }
  auto end() const noexcept { return sites_.end(); }

  std::optional<std::size_t> index_of(const Site& site) const;
  bool contains(const Site& site) const { return index_of(site).has_value(); }
  bool is_subset_of(const Region& other) const;

  Region minus(const Region& other) const;
  Region united(const Region& other) const;
  Region intersected(const Region& other) const;

  // Sup-norm distance from `site` to the region; nullopt when empty.
  std::optional<std::int64_t> distance_to(const Site& site) const;
  std::int64_t diameter() const;
  // Connected under nearest-neighbour adjacency |u - v| = 1.
  bool is_connected() const;

  friend bool operator==(const Region&, const Region&) = default;

 private:
  int dim_ = 1;
  std::vector<Site> sites_;
};

struct LatticeBox {
  Point center{};
  double side = 0.0;
  Region region;

  int dim() const noexcept { return region.dim(); }
};

// {y in Z^d : |y - center|_inf <= side/2}
LatticeBox make_box(std::span<const double> center, double side);
LatticeBox make_box(const Point& center, int dim, double side);

struct BoundarySets {
  std::vector<std::pair<Site, Site>> edges;  // (u, v) with u inside, v outside
  Region exterior;
  Region interior;
};

BoundarySets boundary_sets(const Region& inner, const Region& ambient);

// {y in inner : dist(y, ambient \ inner) > floor(t)}
Region t_interior(const Region& inner, const Region& ambient, double t);

inline std::int64_t boundary_constant(int dim) { return (std::int64_t{1} << dim) * dim; }

struct Cover {
  LatticeBox parent;
  std::int64_t side = 0;
  std::int64_t cell_side = 0;
  Rational rho;
  std::int64_t k = 0;
  // Integer coordinates j of each center x0 + rho*ell*j, lexicographic.
  std::vector<Site> grid;
  std::vector<Point> centers;

  std::size_t size() const noexcept { return centers.size(); }
  int dim() const noexcept { return parent.dim(); }
  // rho * ell, exact as (L - ell) / (2k).
  Rational spacing() const { return rho * cell_side; }
  LatticeBox cell(std::size_t i) const;
  std::optional<std::size_t> index_of_grid(const Site& j) const;
  std::optional<std::size_t> index_of_center(std::span<const double> center) const;
  // Distance between centers i and j in units of rho*ell.
  std::int64_t grid_distance(std::size_t i, std::size_t j) const {
    return sup_distance(grid[i], grid[j]);
  }
};

// Largest admissible rho in [3/5, 4/5] among (L - ell)/(2 ell k), k in N.
std::optional<std::int64_t> cover_multiplier(std::int64_t side, std::int64_t cell_side);

Cover suitable_cover(std::int64_t side, std::int64_t cell_side, std::span<const double> center);

struct CoverCheck {
  bool covering = false;     // union of ell/10-interiors equals the parent region
  bool count_formula = false;
  bool count_bounds = false;
  std::size_t count = 0;
  double lower = 0.0;
  double upper = 0.0;

  bool ok() const { return covering && count_formula && count_bounds; }
};

CoverCheck check_cover(const Cover& cover);

struct BoxGraph {
  std::size_t vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges1;  // overlapping cells
  std::vector<std::pair<std::size_t, std::size_t>> edges2;  // disjoint cells with touching dilates
};

BoxGraph cover_graphs(const Cover& cover);

struct BufferedSubset {
  std::vector<std::size_t> component;       // bad centers of one G2-connected component
  std::vector<std::size_t> dilated;         // centers within rho*ell of the component
  std::vector<std::size_t> buffer_centers;  // G1 exterior boundary of `dilated`
  Region upsilon;
  Region core;
  Region checked;
  Region checked_prime;
  Region hat;
  Region hat_prime;
  std::int64_t diameter = 0;
  bool connected = false;
  // Every interior-boundary site of upsilon (relative to the parent box) lies
  // in the 2*ell_sharp-interior of some buffer cell.
  bool boundary_buffered = false;
};

std::vector<BufferedSubset> buffered_subsets(const Cover& cover,
                                             std::span<const std::size_t> bad_centers,
                                             double ell_sharp);

}  // namespace anderson
