#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace anderson {

// Exponent system of the bootstrap analysis. Fields after `xi` are chosen by
// solve_parameters or set by hand; zeta_tilde and tau_tilde are derived.
struct ParameterSet {
  int d = 1;
  double alpha = 1.0;
  double K = 1.0;
  double theta = 0.0;
  double xi = 0.0;
  double q = 0.0;
  double p = 0.0;
  double gamma1 = 0.0;
  double zeta = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double tau = 0.0;
  double s = 0.0;
  double zeta_tilde = 0.0;
  double tau_tilde = 0.0;

  // Recomputes zeta_tilde = (zeta + beta)/2 and tau_tilde = (1 + tau)/2.
  void refresh_derived();
  friend bool operator==(const ParameterSet&, const ParameterSet&) = default;
};

// Strict inequalities must clear this margin to count as satisfied.
inline constexpr double kStrictMargin = 1e-12;

// lhs < rhs (strict) or lhs <= rhs.
struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool strict = true;
  bool pass = false;

  double margin() const { return rhs - lhs; }
};

InequalityCheck check_less(std::string name, double lhs, double rhs, bool strict = true);

std::vector<InequalityCheck> validate(const ParameterSet& ps);
bool all_pass(const std::vector<InequalityCheck>& checks);

// Deterministic point of the feasible region: q, p, gamma1 at interval
// midpoints; gamma = (1 + xi^(-1/3))/2; zeta, beta trisect (gamma^2 xi, 1/gamma);
// tau and s at midpoints of their remaining intervals. Throws
// InfeasibleParameters naming the first violated inequality.
ParameterSet solve_parameters(double theta, double xi, double alpha = 1.0, int d = 1, double K = 1.0);

// theta > (6/(2 alpha - 1) + 9/2) d
double theta_threshold(double alpha, int d);

struct ScaleThresholds {
  std::int64_t l_prime = 0;    // floor(L/20)
  std::int64_t l_tau = 0;      // floor(L^tau)
  std::int64_t l_tau_tilde = 0;
  bool below_200 = false;      // the analysis only speaks about L >= 200
};

ScaleThresholds scale_thresholds(double L, double tau);
ScaleThresholds scale_thresholds(double L, const ParameterSet& ps);

std::int64_t floor_power(double L, double exponent);

}  // namespace anderson
