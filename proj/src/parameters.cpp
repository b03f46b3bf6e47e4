#include "anderson/parameters.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "anderson/errors.hpp"

namespace anderson {

void ParameterSet::refresh_derived() {
  zeta_tilde = 0.5 * (zeta + beta);
  tau_tilde = 0.5 * (1.0 + tau);
}

InequalityCheck check_less(std::string name, double lhs, double rhs, bool strict) {
  InequalityCheck c{std::move(name), lhs, rhs, strict, false};
  const double m = rhs - lhs;
  c.pass = std::isfinite(m) && (strict ? m > kStrictMargin : m >= 0.0);
  return c;
}

double theta_threshold(double alpha, int d) { return (6.0 / (2.0 * alpha - 1.0) + 4.5) * d; }

std::vector<InequalityCheck> validate(const ParameterSet& ps) {
  const double d = ps.d;
  const double a2 = 2.0 * ps.alpha - 1.0;
  const double g = ps.gamma, g1 = ps.gamma1, b = ps.beta, t = ps.tau;
  std::vector<InequalityCheck> out;
  auto add = [&](std::string name, double lhs, double rhs, bool strict = true) {
    out.push_back(check_less(std::move(name), lhs, rhs, strict));
  };
  add("1/2 < α", 0.5, ps.alpha);
  add("α ≤ 1", ps.alpha, 1.0, false);
  add("0 < K", 0.0, ps.K);
  add("θ > (6/(2α−1)+9/2)d", theta_threshold(ps.alpha, ps.d), ps.theta);
  add("3d/(2α−1) < q", 3.0 * d / a2, ps.q);
  add("q < (θ−9d/2)/2", ps.q, 0.5 * (ps.theta - 4.5 * d));
  add("0 < p", 0.0, ps.p);
  add("p < (2α−1)q − 3d", ps.p, a2 * ps.q - 3.0 * d);
  add("1 < γ₁", 1.0, g1);
  add("γ₁ < 1 + p/(p+2d)", g1, 1.0 + ps.p / (ps.p + 2.0 * d));
  add("γ₁ < (2θ−4d)/(5d+4q)", g1, (2.0 * ps.theta - 4.0 * d) / (5.0 * d + 4.0 * ps.q));
  add("2d + γ₁(5d/2 + 2q) < θ", 2.0 * d + g1 * (2.5 * d + 2.0 * ps.q), ps.theta);
  add("9d/2 + 2q < 2d + γ₁(5d/2 + 2q)", 4.5 * d + 2.0 * ps.q, 2.0 * d + g1 * (2.5 * d + 2.0 * ps.q));
  add("0 < ξ", 0.0, ps.xi);
  add("ξ < ζ", ps.xi, ps.zeta);
  add("ζ < β", ps.zeta, b);
  add("β < 1/γ", b, 1.0 / g);
  add("1 < γ", 1.0, g);
  add("γ < √(ζ/ξ)", g, std::sqrt(ps.zeta / ps.xi));
  add("(1+γ₁)/(2γ₁) < τ", (1.0 + g1) / (2.0 * g1), t);
  add("(1+γβ)/2 < τ", 0.5 * (1.0 + g * b), t);
  add("((γ−1)β+1)/γ < τ", ((g - 1.0) * b + 1.0) / g, t);
  add("τ < 1", t, 1.0);
  add("1/γ₁ < 1 − τ + 1/γ₁", 1.0 / g1, 1.0 - t + 1.0 / g1);
  add("1 − τ + 1/γ₁ < τ", 1.0 - t + 1.0 / g1, t);
  add("ξ < ξγ²", ps.xi, ps.xi * g * g);
  add("ξγ² < ζ", ps.xi * g * g, ps.zeta);
  add("β < τ/γ", b, t / g);
  add("τ/γ < 1/γ", t / g, 1.0 / g);
  add("1/γ < τ", 1.0 / g, t);
  add("1 < (1−β)/(τ−β)", 1.0, (1.0 - b) / (t - b));
  add("(1−β)/(τ−β) < γ", (1.0 - b) / (t - b), g);
  add("γ < τ/β", g, t / b);
  add("β < γβ", b, g * b);
  add("γβ < s", g * b, ps.s);
  add("1 − 2γ(τ − (1+γβ)/2) < s", 1.0 - 2.0 * g * (t - 0.5 * (1.0 + g * b)), ps.s);
  add("s < 1", ps.s, 1.0);
  add("1 − τ + (1−s)/γ < τ − γβ", 1.0 - t + (1.0 - ps.s) / g, t - g * b);
  add("ζ < ζ̃", ps.zeta, ps.zeta_tilde);
  add("ζ̃ < β", ps.zeta_tilde, b);
  add("τ < τ̃", t, ps.tau_tilde);
  add("τ̃ < 1", ps.tau_tilde, 1.0);
  return out;
}

bool all_pass(const std::vector<InequalityCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const InequalityCheck& c) { return c.pass; });
}

namespace {

void require(const InequalityCheck& c) {
  if (c.pass) return;
  std::ostringstream os;
  os.precision(17);
  os << "lhs=" << c.lhs << ", rhs=" << c.rhs;
  throw InfeasibleParameters(c.name, os.str());
}

}  // namespace

ParameterSet solve_parameters(double theta, double xi, double alpha, int d, double K) {
  if (d < 1 || d > 3) throw PreconditionError("dimension must be 1, 2 or 3");
  require(check_less("1/2 < α", 0.5, alpha));
  require(check_less("α ≤ 1", alpha, 1.0, false));
  require(check_less("θ > (6/(2α−1)+9/2)d", theta_threshold(alpha, d), theta));
  require(check_less("0 < ξ", 0.0, xi));
  require(check_less("ξ < 1", xi, 1.0));

  ParameterSet ps;
  ps.d = d;
  ps.alpha = alpha;
  ps.K = K;
  ps.theta = theta;
  ps.xi = xi;
  const double dd = d;
  const double a2 = 2.0 * alpha - 1.0;

  const double q_lo = 3.0 * dd / a2, q_hi = 0.5 * (theta - 4.5 * dd);
  require(check_less("3d/(2α−1) < q < (θ−9d/2)/2", q_lo, q_hi));
  ps.q = 0.5 * (q_lo + q_hi);

  const double p_hi = a2 * ps.q - 3.0 * dd;
  require(check_less("0 < p < (2α−1)q − 3d", 0.0, p_hi));
  ps.p = 0.5 * p_hi;

  const double g1_hi = std::min(1.0 + ps.p / (ps.p + 2.0 * dd), (2.0 * theta - 4.0 * dd) / (5.0 * dd + 4.0 * ps.q));
  require(check_less("1 < γ₁ < min{1 + p/(p+2d), (2θ−4d)/(5d+4q)}", 1.0, g1_hi));
  ps.gamma1 = 0.5 * (1.0 + g1_hi);

  ps.gamma = 0.5 * (1.0 + std::pow(xi, -1.0 / 3.0));
  const double lo = ps.gamma * ps.gamma * xi, hi = 1.0 / ps.gamma;
  ps.zeta = lo + (hi - lo) / 3.0;
  ps.beta = lo + 2.0 * (hi - lo) / 3.0;
  require(check_less("γ < √(ζ/ξ)", ps.gamma, std::sqrt(ps.zeta / xi)));
  require(check_less("1 < γ", 1.0, ps.gamma));
  require(check_less("ξ < ζ", xi, ps.zeta));
  require(check_less("ζ < β", ps.zeta, ps.beta));
  require(check_less("β < 1/γ", ps.beta, 1.0 / ps.gamma));

  const double g = ps.gamma, b = ps.beta;
  const double tau_lo =
      std::max({(1.0 + ps.gamma1) / (2.0 * ps.gamma1), 0.5 * (1.0 + g * b), ((g - 1.0) * b + 1.0) / g});
  require(check_less("max{(1+γ₁)/(2γ₁), (1+γβ)/2, ((γ−1)β+1)/γ} < τ < 1", tau_lo, 1.0));
  ps.tau = 0.5 * (tau_lo + 1.0);

  const double s_lo = std::max(g * b, 1.0 - 2.0 * g * (ps.tau - 0.5 * (1.0 + g * b)));
  require(check_less("max{γβ, 1 − 2γ(τ − (1+γβ)/2)} < s < 1", s_lo, 1.0));
  ps.s = 0.5 * (s_lo + 1.0);
  ps.refresh_derived();

  for (const auto& c : validate(ps)) require(c);
  return ps;
}

std::int64_t floor_power(double L, double exponent) {
  if (!(L > 0.0)) throw PreconditionError("scale must be positive");
  return static_cast<std::int64_t>(std::floor(std::pow(L, exponent)));
}

ScaleThresholds scale_thresholds(double L, double tau) {
  if (!(L > 0.0)) throw PreconditionError("scale must be positive");
  ScaleThresholds t;
  t.l_prime = static_cast<std::int64_t>(std::floor(L / 20.0));
  t.l_tau = floor_power(L, tau);
  t.l_tau_tilde = floor_power(L, 0.5 * (1.0 + tau));
  t.below_200 = L < 200.0;
  return t;
}

ScaleThresholds scale_thresholds(double L, const ParameterSet& ps) { return scale_thresholds(L, ps.tau); }

}  // namespace anderson
