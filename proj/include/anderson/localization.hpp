#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "anderson/lattice.hpp"
#include "anderson/parameters.hpp"
#include "anderson/spectral.hpp"

namespace anderson {

// PL(theta~), ML(m*), SEL(s~), LOC(m)
enum class LocalizationKind { PL, ML, SEL, LOC };

std::string_view to_string(LocalizationKind kind);
LocalizationKind parse_localization_kind(std::string_view name);

// Each predicate tests |phi(y)| <= threshold(|y - x|_inf) over every far site y of
// the box; the find_* variants return the first violating y in site order.
// phi is indexed by box.region.
std::optional<Site> find_poly_violation(const Eigen::VectorXd& phi, const Site& x, double theta,
                                        const LatticeBox& box);
std::optional<Site> find_subexp_violation(const Eigen::VectorXd& phi, const Site& x, double s,
                                          const LatticeBox& box);
std::optional<Site> find_exp_violation(const Eigen::VectorXd& phi, const Site& x, double m, const LatticeBox& box,
                                       double tau);

// |phi(y)| <= L^-theta for |y - x| >= L'
bool is_poly_localized(const Eigen::VectorXd& phi, const Site& x, double theta, const LatticeBox& box);
// |phi(y)| <= exp(-L^s) for |y - x| >= L'
bool is_subexp_localized(const Eigen::VectorXd& phi, const Site& x, double s, const LatticeBox& box);
// |phi(y)| <= exp(-m |y - x|) for |y - x| >= L_tau
bool is_exp_localized(const Eigen::VectorXd& phi, const Site& x, double m, const LatticeBox& box, double tau);

std::int64_t box_l_prime(const LatticeBox& box);

struct DecayCertificate {
  Site site{};
  std::size_t eigen_index = 0;
  double eigenvalue = 0.0;
  double weight = 0.0;          // |phi_x(x)|
  double tail = 0.0;            // max |phi_x(y)| over |y - x| >= L'
  double poly_exponent = 0.0;   // largest theta~ with tail <= L^-theta~ (inf when tail = 0)
};

struct LabeledEigensystem {
  Eigensystem base;
  std::vector<std::size_t> eigen_of_site;  // site index -> eigenpair index
  std::vector<std::size_t> site_of_eigen;
  std::vector<DecayCertificate> certificates;
  bool degenerate = false;  // no bijection with all |phi_{lambda_x}(x)| > 0 existed

  Eigen::VectorXd vector_of_site(std::size_t site_index) const {
    return base.vectors.col(static_cast<Eigen::Index>(eigen_of_site[site_index]));
  }
  double eigenvalue_of_site(std::size_t site_index) const { return base.eigenvalue(eigen_of_site[site_index]); }
};

// Bijection sites -> eigenpairs maximizing sum_x log|phi_{lambda_x}(x)|.
LabeledEigensystem label_sites(const Eigensystem& es, const LatticeBox& box);

struct BoxCriteria {
  double q = 0.0;
  double beta = 0.0;
  double tau = 0.0;

  BoxCriteria() = default;
  BoxCriteria(double q_, double beta_, double tau_) : q(q_), beta(beta_), tau(tau_) {}
  explicit BoxCriteria(const ParameterSet& ps) : q(ps.q), beta(ps.beta), tau(ps.tau) {}
};

struct LocalizationVerdict {
  LatticeBox box;
  LocalizationKind kind = LocalizationKind::PL;
  double rate = 0.0;
  bool spacing_ok = false;
  bool eigensystem_ok = false;
  bool localizing = false;
  std::optional<std::pair<Site, Site>> witness;  // (x, y) of the first failing eigenfunction
  std::int64_t l_prime = 0;
  std::int64_t l_tau = 0;
  double min_gap = 0.0;
  bool degenerate = false;
  // For a certified ML box where the conditions of the ML => SEL implication hold:
  // whether the same eigensystem is SEL at implication_rate.
  std::optional<bool> implication;
  double implication_rate = 0.0;
};

// First (x, y) where the labeled eigensystem fails the kind's decay predicate.
std::optional<std::pair<Site, Site>> find_eigensystem_violation(const LabeledEigensystem& les, const LatticeBox& box,
                                                                LocalizationKind kind, double rate, double tau);

LocalizationVerdict classify_box(const LatticeBox& box, const FiniteOperator& op, LocalizationKind kind,
                                 const BoxCriteria& criteria, double rate);
LocalizationVerdict classify_box(const LatticeBox& box, const Eigensystem& es, LocalizationKind kind,
                                 const BoxCriteria& criteria, double rate);

}  // namespace anderson
