#include "anderson/localization.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "anderson/assignment.hpp"

namespace anderson {

std::string_view to_string(LocalizationKind kind) {
  switch (kind) {
    case LocalizationKind::PL: return "PL";
    case LocalizationKind::ML: return "ML";
    case LocalizationKind::SEL: return "SEL";
    case LocalizationKind::LOC: return "LOC";
  }
  return "?";
}

LocalizationKind parse_localization_kind(std::string_view name) {
  std::string up(name);
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (up == "PL") return LocalizationKind::PL;
  if (up == "ML") return LocalizationKind::ML;
  if (up == "SEL") return LocalizationKind::SEL;
  if (up == "LOC") return LocalizationKind::LOC;
  throw ConfigError("unknown localization kind '" + std::string(name) + "' (expected PL, ML, SEL or LOC)");
}

std::int64_t box_l_prime(const LatticeBox& box) { return static_cast<std::int64_t>(std::floor(box.side / 20.0)); }

namespace {

template <typename Threshold>
std::optional<Site> scan(const Eigen::VectorXd& phi, const Site& x, const LatticeBox& box, std::int64_t from,
                         Threshold&& threshold) {
  const Region& r = box.region;
  if (static_cast<std::size_t>(phi.size()) != r.size()) throw PreconditionError("vector is not indexed by the box");
  if (!r.contains(x)) throw PreconditionError("label site is outside the box");
  for (std::size_t i = 0; i < r.size(); ++i) {
    const std::int64_t dist = sup_distance(r[i], x);
    if (dist < from) continue;
    if (!(std::abs(phi[static_cast<Eigen::Index>(i)]) <= threshold(dist))) return r[i];
  }
  return std::nullopt;
}

}  // namespace

std::optional<Site> find_poly_violation(const Eigen::VectorXd& phi, const Site& x, double theta,
                                        const LatticeBox& box) {
  const double bound = std::pow(box.side, -theta);
  return scan(phi, x, box, box_l_prime(box), [bound](std::int64_t) { return bound; });
}

std::optional<Site> find_subexp_violation(const Eigen::VectorXd& phi, const Site& x, double s,
                                          const LatticeBox& box) {
  const double bound = std::exp(-std::pow(box.side, s));
  return scan(phi, x, box, box_l_prime(box), [bound](std::int64_t) { return bound; });
}

std::optional<Site> find_exp_violation(const Eigen::VectorXd& phi, const Site& x, double m, const LatticeBox& box,
                                       double tau) {
  return scan(phi, x, box, floor_power(box.side, tau),
              [m](std::int64_t dist) { return std::exp(-m * static_cast<double>(dist)); });
}

bool is_poly_localized(const Eigen::VectorXd& phi, const Site& x, double theta, const LatticeBox& box) {
  return !find_poly_violation(phi, x, theta, box);
}

bool is_subexp_localized(const Eigen::VectorXd& phi, const Site& x, double s, const LatticeBox& box) {
  return !find_subexp_violation(phi, x, s, box);
}

bool is_exp_localized(const Eigen::VectorXd& phi, const Site& x, double m, const LatticeBox& box, double tau) {
  return !find_exp_violation(phi, x, m, box, tau);
}

namespace {

bool uses_forbidden(const Assignment& a, const Eigen::MatrixXd& weight) {
  for (std::size_t i = 0; i < a.column_of_row.size(); ++i) {
    if (weight(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a.column_of_row[i])) == 0.0) return true;
  }
  return false;
}

}  // namespace

LabeledEigensystem label_sites(const Eigensystem& es, const LatticeBox& box) {
  if (!(es.region == box.region)) throw PreconditionError("label_sites: eigensystem is not over the box");
  const auto n = static_cast<Eigen::Index>(es.size());
  const Eigen::MatrixXd weight = es.vectors.cwiseAbs();  // rows: sites, columns: eigenpairs

  // Cost -log|phi|; zero entries are forbidden and priced above any all-finite matching.
  Eigen::MatrixXd cost(n, n);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (weight(i, j) > 0.0) {
        cost(i, j) = -std::log(weight(i, j));
        lo = std::min(lo, cost(i, j));
        hi = std::max(hi, cost(i, j));
      }
    }
  }
  const double forbidden = std::isfinite(hi) ? hi + static_cast<double>(n) * (hi - lo + 1.0) : 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!(weight(i, j) > 0.0)) cost(i, j) = forbidden;
    }
  }

  LabeledEigensystem out;
  out.base = es;
  Assignment a = solve_assignment(cost);
  if (uses_forbidden(a, weight)) {
    out.degenerate = true;
    a = solve_assignment(-weight);
  }
  out.eigen_of_site = a.column_of_row;
  out.site_of_eigen = a.row_of_column;

  const std::int64_t lp = box_l_prime(box);
  const double log_side = std::log(box.side);
  out.certificates.reserve(es.size());
  for (std::size_t i = 0; i < es.size(); ++i) {
    DecayCertificate c;
    c.site = box.region[i];
    c.eigen_index = out.eigen_of_site[i];
    c.eigenvalue = es.eigenvalue(c.eigen_index);
    const auto col = es.vector(c.eigen_index);
    c.weight = std::abs(col[static_cast<Eigen::Index>(i)]);
    for (std::size_t y = 0; y < es.size(); ++y) {
      if (sup_distance(box.region[y], c.site) >= lp) c.tail = std::max(c.tail, std::abs(col[static_cast<Eigen::Index>(y)]));
    }
    c.poly_exponent = c.tail > 0.0 ? -std::log(c.tail) / log_side : std::numeric_limits<double>::infinity();
    out.certificates.push_back(c);
  }
  return out;
}

std::optional<std::pair<Site, Site>> find_eigensystem_violation(const LabeledEigensystem& les, const LatticeBox& box,
                                                                LocalizationKind kind, double rate, double tau) {
  for (std::size_t i = 0; i < box.region.size(); ++i) {
    const Eigen::VectorXd phi = les.vector_of_site(i);
    const Site& x = box.region[i];
    std::optional<Site> y;
    switch (kind) {
      case LocalizationKind::PL: y = find_poly_violation(phi, x, rate, box); break;
      case LocalizationKind::SEL: y = find_subexp_violation(phi, x, rate, box); break;
      case LocalizationKind::ML:
      case LocalizationKind::LOC: y = find_exp_violation(phi, x, rate, box, tau); break;
    }
    if (y) return std::make_pair(x, *y);
  }
  return std::nullopt;
}

LocalizationVerdict classify_box(const LatticeBox& box, const FiniteOperator& op, LocalizationKind kind,
                                 const BoxCriteria& criteria, double rate) {
  if (!(op.region == box.region)) throw PreconditionError("classify_box: operator is not over the box");
  return classify_box(box, eigensystem(op), kind, criteria, rate);
}

LocalizationVerdict classify_box(const LatticeBox& box, const Eigensystem& es, LocalizationKind kind,
                                 const BoxCriteria& criteria, double rate) {
  if (!(rate > 0.0)) throw PreconditionError("localization rate must be positive");
  LocalizationVerdict v;
  v.box = box;
  v.kind = kind;
  v.rate = rate;
  v.l_prime = box_l_prime(box);
  v.l_tau = floor_power(box.side, criteria.tau);
  v.min_gap = min_gap(es.eigenvalues);
  const double L = box.side;
  const bool poly = kind == LocalizationKind::PL || kind == LocalizationKind::ML;
  v.spacing_ok = poly ? poly_level_spacing(es, L, criteria.q) : exp_level_spacing(es, L, criteria.beta);

  const LabeledEigensystem les = label_sites(es, box);
  v.degenerate = les.degenerate;
  v.witness = find_eigensystem_violation(les, box, kind, rate, criteria.tau);
  v.eigensystem_ok = !v.witness;
  v.localizing = v.spacing_ok && v.eigensystem_ok;

  if (kind == LocalizationKind::ML && v.localizing && rate < 40.0) {
    const double s_tilde = 1.0 - std::log(40.0 / rate) / std::log(L);
    const bool applies = std::exp(-std::pow(L, criteria.beta)) <= std::pow(L, -criteria.q) && v.l_tau <= v.l_prime &&
                         rate * static_cast<double>(v.l_prime) >= std::pow(L, s_tilde) && s_tilde > 0.0;
    if (applies) {
      v.implication_rate = s_tilde;
      v.implication = exp_level_spacing(es, L, criteria.beta) &&
                      !find_eigensystem_violation(les, box, LocalizationKind::SEL, s_tilde, criteria.tau);
    }
  }
  return v;
}

}  // namespace anderson
