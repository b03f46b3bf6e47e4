#include "anderson/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

#include "anderson/errors.hpp"

namespace anderson {

std::int64_t sup_distance(const Site& a, const Site& b) {
  std::int64_t d = 0;
  for (int i = 0; i < kMaxDim; ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

std::int64_t l1_distance(const Site& a, const Site& b) {
  std::int64_t d = 0;
  for (int i = 0; i < kMaxDim; ++i) d += std::abs(a[i] - b[i]);
  return d;
}

Region::Region(int dim, std::vector<Site> sites) : dim_(dim), sites_(std::move(sites)) {
  if (dim < 1 || dim > kMaxDim) {
    throw PreconditionError("region dimension must be in [1, 3], got " + std::to_string(dim));
  }
  for (const Site& s : sites_) {
    for (int i = dim; i < kMaxDim; ++i) {
      if (s[i] != 0) throw PreconditionError("site has nonzero coordinate beyond region dimension");
    }
  }
  std::sort(sites_.begin(), sites_.end());
  if (std::adjacent_find(sites_.begin(), sites_.end()) != sites_.end()) {
    throw PreconditionError("region contains duplicate sites");
  }
}

std::optional<std::size_t> Region::index_of(const Site& site) const {
  auto it = std::lower_bound(sites_.begin(), sites_.end(), site);
  if (it == sites_.end() || *it != site) return std::nullopt;
  return static_cast<std::size_t>(it - sites_.begin());
}

bool Region::is_subset_of(const Region& other) const {
  return dim_ == other.dim_ &&
         std::includes(other.sites_.begin(), other.sites_.end(), sites_.begin(), sites_.end());
}

Region Region::minus(const Region& other) const {
  std::vector<Site> out;
  std::set_difference(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                      std::back_inserter(out));
  return Region(dim_, std::move(out));
}

Region Region::united(const Region& other) const {
  std::vector<Site> out;
  std::set_union(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                 std::back_inserter(out));
  return Region(dim_, std::move(out));
}

Region Region::intersected(const Region& other) const {
  std::vector<Site> out;
  std::set_intersection(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                        std::back_inserter(out));
  return Region(dim_, std::move(out));
}

std::optional<std::int64_t> Region::distance_to(const Site& site) const {
  if (sites_.empty()) return std::nullopt;
  std::int64_t best = sup_distance(site, sites_.front());
  for (const Site& s : sites_) best = std::min(best, sup_distance(site, s));
  return best;
}

std::int64_t Region::diameter() const {
  if (sites_.empty()) return 0;
  std::int64_t diam = 0;
  for (int i = 0; i < dim_; ++i) {
    auto [lo, hi] = std::minmax_element(sites_.begin(), sites_.end(),
                                        [i](const Site& a, const Site& b) { return a[i] < b[i]; });
    diam = std::max(diam, (*hi)[i] - (*lo)[i]);
  }
  return diam;
}

bool Region::is_connected() const {
  if (sites_.size() <= 1) return true;
  std::vector<char> seen(sites_.size(), 0);
  std::deque<std::size_t> queue{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const Site u = sites_[queue.front()];
    queue.pop_front();
    for (int i = 0; i < dim_; ++i) {
      for (int step : {-1, 1}) {
        Site v = u;
        v[i] += step;
        if (auto j = index_of(v); j && !seen[*j]) {
          seen[*j] = 1;
          ++reached;
          queue.push_back(*j);
        }
      }
    }
  }
  return reached == sites_.size();
}

LatticeBox make_box(const Point& center, int dim, double side) {
  if (dim < 1 || dim > kMaxDim) throw PreconditionError("box dimension must be in [1, 3]");
  if (!(side > 0.0)) throw PreconditionError("box side must be positive");
  std::array<std::int64_t, kMaxDim> lo{}, hi{};
  for (int i = 0; i < dim; ++i) {
    lo[i] = static_cast<std::int64_t>(std::ceil(center[i] - side / 2.0));
    hi[i] = static_cast<std::int64_t>(std::floor(center[i] + side / 2.0));
    if (lo[i] > hi[i]) {
      throw EmptyBoxError("box of side " + std::to_string(side) + " contains no lattice site");
    }
  }
  std::vector<Site> sites;
  Site s{};
  for (int i = 0; i < dim; ++i) s[i] = lo[i];
  while (true) {
    sites.push_back(s);
    int i = dim - 1;
    while (i >= 0 && s[i] == hi[i]) {
      s[i] = lo[i];
      --i;
    }
    if (i < 0) break;
    ++s[i];
  }
  LatticeBox box;
  box.center = Point{};
  for (int i = 0; i < dim; ++i) box.center[i] = center[i];
  box.side = side;
  box.region = Region(dim, std::move(sites));
  return box;
}

LatticeBox make_box(std::span<const double> center, double side) {
  if (center.empty() || center.size() > kMaxDim) {
    throw PreconditionError("box center must have 1 to 3 coordinates");
  }
  Point c{};
  std::copy(center.begin(), center.end(), c.begin());
  return make_box(c, static_cast<int>(center.size()), side);
}

BoundarySets boundary_sets(const Region& inner, const Region& ambient) {
  if (!inner.is_subset_of(ambient)) throw PreconditionError("boundary_sets: inner region not contained in ambient");
  BoundarySets out;
  std::vector<Site> ext, in;
  for (const Site& u : inner) {
    for (int i = 0; i < inner.dim(); ++i) {
      for (int step : {-1, 1}) {
        Site v = u;
        v[i] += step;
        if (ambient.contains(v) && !inner.contains(v)) {
          out.edges.emplace_back(u, v);
          ext.push_back(v);
          in.push_back(u);
        }
      }
    }
  }
  std::sort(out.edges.begin(), out.edges.end());
  for (auto* v : {&ext, &in}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  out.exterior = Region(inner.dim(), std::move(ext));
  out.interior = Region(inner.dim(), std::move(in));
  return out;
}

Region t_interior(const Region& inner, const Region& ambient, double t) {
  if (!(t >= 1.0)) throw PreconditionError("t_interior requires t >= 1");
  if (!inner.is_subset_of(ambient)) throw PreconditionError("t_interior: inner region not contained in ambient");
  const auto radius = static_cast<std::int64_t>(std::floor(t));
  const int dim = inner.dim();
  const Region outside = ambient.minus(inner);

  std::int64_t cube = 1;
  for (int i = 0; i < dim; ++i) cube *= 2 * radius + 1;

  std::vector<Site> kept;
  if (static_cast<std::size_t>(cube) > outside.size()) {
    for (const Site& y : inner) {
      auto d = outside.distance_to(y);
      if (!d || *d > radius) kept.push_back(y);
    }
  } else {
    for (const Site& y : inner) {
      bool ok = true;
      Site o{};
      for (int i = 0; i < dim; ++i) o[i] = -radius;
      while (ok) {
        Site z = y;
        for (int i = 0; i < dim; ++i) z[i] += o[i];
        if (outside.contains(z)) ok = false;
        int i = dim - 1;
        while (i >= 0 && o[i] == radius) {
          o[i] = -radius;
          --i;
        }
        if (i < 0) break;
        ++o[i];
      }
      if (ok) kept.push_back(y);
    }
  }
  return Region(dim, std::move(kept));
}

std::optional<std::int64_t> cover_multiplier(std::int64_t side, std::int64_t cell_side) {
  if (cell_side < 1 || side <= cell_side) return std::nullopt;
  const std::int64_t gap = side - cell_side;
  // 3/5 <= gap / (2 ell k) <= 4/5  <=>  5 gap <= 8 ell k  and  6 ell k <= 5 gap
  const std::int64_t kmin = std::max<std::int64_t>(1, (5 * gap + 8 * cell_side - 1) / (8 * cell_side));
  const std::int64_t kmax = (5 * gap) / (6 * cell_side);
  if (kmin > kmax) return std::nullopt;
  return kmin;
}

LatticeBox Cover::cell(std::size_t i) const {
  return make_box(centers.at(i), dim(), static_cast<double>(cell_side));
}

std::optional<std::size_t> Cover::index_of_grid(const Site& j) const {
  auto it = std::lower_bound(grid.begin(), grid.end(), j);
  if (it == grid.end() || *it != j) return std::nullopt;
  return static_cast<std::size_t>(it - grid.begin());
}

std::optional<std::size_t> Cover::index_of_center(std::span<const double> center) const {
  for (std::size_t i = 0; i < centers.size(); ++i) {
    bool same = center.size() == static_cast<std::size_t>(dim());
    for (int c = 0; same && c < dim(); ++c) same = std::abs(centers[i][c] - center[c]) <= 1e-9;
    if (same) return i;
  }
  return std::nullopt;
}

Cover suitable_cover(std::int64_t side, std::int64_t cell_side, std::span<const double> center) {
  const auto k = cover_multiplier(side, cell_side);
  if (!k) {
    throw CoverInfeasibleError("no admissible rho in [3/5, 4/5] for L=" + std::to_string(side) +
                               ", ell=" + std::to_string(cell_side));
  }
  Cover cover;
  cover.parent = make_box(center, static_cast<double>(side));
  cover.side = side;
  cover.cell_side = cell_side;
  cover.k = *k;
  cover.rho = Rational(side - cell_side, 2 * cell_side * *k);

  const int dim = cover.parent.dim();
  const std::int64_t gap = side - cell_side;
  // |j| rho ell <= L/2  <=>  |j| gap <= k L
  const std::int64_t jmax = (*k * side) / gap;
  Site j{};
  for (int i = 0; i < dim; ++i) j[i] = -jmax;
  while (true) {
    cover.grid.push_back(j);
    Point c{};
    for (int i = 0; i < dim; ++i) {
      c[i] = center[i] + static_cast<double>(j[i] * gap) / static_cast<double>(2 * *k);
    }
    cover.centers.push_back(c);
    int i = dim - 1;
    while (i >= 0 && j[i] == jmax) {
      j[i] = -jmax;
      --i;
    }
    if (i < 0) break;
    ++j[i];
  }
  return cover;
}

CoverCheck check_cover(const Cover& cover) {
  CoverCheck out;
  const Region& whole = cover.parent.region;
  const double t = static_cast<double>(cover.cell_side) / 10.0;
  std::vector<Site> covered;
  for (std::size_t i = 0; i < cover.size(); ++i) {
    const Region inner = t_interior(cover.cell(i).region, whole, t);
    covered.insert(covered.end(), inner.begin(), inner.end());
  }
  std::sort(covered.begin(), covered.end());
  covered.erase(std::unique(covered.begin(), covered.end()), covered.end());
  out.covering = covered == whole.sites();

  const int dim = cover.dim();
  out.count = cover.size();
  const Rational per_axis = Rational(cover.side - cover.cell_side) / cover.spacing() + 1;
  std::int64_t expected = 1;
  for (int i = 0; i < dim; ++i) expected *= boost::rational_cast<std::int64_t>(per_axis);
  out.count_formula = per_axis.denominator() == 1 && static_cast<std::int64_t>(out.count) == expected;
  const double ratio = static_cast<double>(cover.side) / static_cast<double>(cover.cell_side);
  out.lower = std::pow(ratio, dim);
  out.upper = std::pow(2.0 * ratio, dim);
  out.count_bounds = out.lower <= static_cast<double>(out.count) && static_cast<double>(out.count) <= out.upper;
  return out;
}

BoxGraph cover_graphs(const Cover& cover) {
  BoxGraph g;
  g.vertices = cover.size();
  for (std::size_t a = 0; a < cover.size(); ++a) {
    for (std::size_t b = a + 1; b < cover.size(); ++b) {
      const auto dist = cover.grid_distance(a, b);
      if (dist == 1) g.edges1.emplace_back(a, b);
      if (dist == 2 || dist == 3) g.edges2.emplace_back(a, b);
    }
  }
  return g;
}

namespace {

std::int64_t grid_distance_to(const Cover& cover, std::size_t a, std::span<const std::size_t> set) {
  std::int64_t best = -1;
  for (std::size_t b : set) {
    const auto d = cover.grid_distance(a, b);
    if (best < 0 || d < best) best = d;
  }
  return best;
}

Region union_of_cells(const Cover& cover, std::span<const std::size_t> centers) {
  std::vector<Site> sites;
  for (std::size_t a : centers) {
    const LatticeBox cell = cover.cell(a);
    sites.insert(sites.end(), cell.region.begin(), cell.region.end());
  }
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  return Region(cover.dim(), std::move(sites));
}

}  // namespace

std::vector<BufferedSubset> buffered_subsets(const Cover& cover,
                                             std::span<const std::size_t> bad_centers,
                                             double ell_sharp) {
  if (!(2.0 * ell_sharp >= 1.0)) throw PreconditionError("buffered_subsets requires ell_sharp >= 1/2");
  std::vector<std::size_t> bad(bad_centers.begin(), bad_centers.end());
  std::sort(bad.begin(), bad.end());
  bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
  for (std::size_t a : bad) {
    if (a >= cover.size()) throw PreconditionError("bad center index not in the cover");
  }
  for (std::size_t i = 0; i < bad.size(); ++i) {
    for (std::size_t j = i + 1; j < bad.size(); ++j) {
      if (cover.grid_distance(bad[i], bad[j]) < 2) {
        throw PreconditionError("bad centers must label pairwise disjoint cells");
      }
    }
  }

  // G2-connected components of the bad centers.
  std::vector<std::size_t> parent(bad.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < bad.size(); ++i) {
    for (std::size_t j = i + 1; j < bad.size(); ++j) {
      const auto d = cover.grid_distance(bad[i], bad[j]);
      if (d == 2 || d == 3) parent[find(j)] = find(i);
    }
  }
  std::vector<std::vector<std::size_t>> components;
  std::vector<std::size_t> root_slot(bad.size(), bad.size());
  for (std::size_t i = 0; i < bad.size(); ++i) {
    const std::size_t r = find(i);
    if (root_slot[r] == bad.size()) {
      root_slot[r] = components.size();
      components.emplace_back();
    }
    components[root_slot[r]].push_back(bad[i]);
  }

  std::vector<BufferedSubset> out;
  for (auto& component : components) {
    BufferedSubset b;
    b.component = component;
    for (std::size_t a = 0; a < cover.size(); ++a) {
      if (grid_distance_to(cover, a, component) <= 1) b.dilated.push_back(a);
    }
    for (std::size_t a = 0; a < cover.size(); ++a) {
      if (grid_distance_to(cover, a, b.dilated) == 1) b.buffer_centers.push_back(a);
    }
    std::vector<std::size_t> all = b.dilated;
    all.insert(all.end(), b.buffer_centers.begin(), b.buffer_centers.end());
    b.upsilon = union_of_cells(cover, all);
    b.core = union_of_cells(cover, b.dilated);
    b.checked = union_of_cells(cover, b.buffer_centers);

    std::vector<Site> prime;
    for (std::size_t a : b.buffer_centers) {
      const Region inner = t_interior(cover.cell(a).region, b.upsilon, 2.0 * ell_sharp);
      prime.insert(prime.end(), inner.begin(), inner.end());
    }
    std::sort(prime.begin(), prime.end());
    prime.erase(std::unique(prime.begin(), prime.end()), prime.end());
    b.checked_prime = Region(cover.dim(), std::move(prime));
    b.hat = b.upsilon.minus(b.checked);
    b.hat_prime = b.upsilon.minus(b.checked_prime);
    b.diameter = b.upsilon.diameter();
    b.connected = b.upsilon.is_connected();
    b.boundary_buffered = boundary_sets(b.upsilon, cover.parent.region).interior.is_subset_of(b.checked_prime);
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace anderson
