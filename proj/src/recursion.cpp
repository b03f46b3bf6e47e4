#include "anderson/recursion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "anderson/errors.hpp"

namespace anderson {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

RecursionRow make_row(std::int64_t k, double scale, double log_value, double log_target) {
  RecursionRow r;
  r.k = k;
  r.scale = scale;
  r.log_scale = std::log(scale);
  r.log_value = log_value;
  r.value = std::exp(log_value);
  r.log_target = log_target;
  r.target = std::exp(log_target);
  r.met = log_value <= log_target;
  return r;
}

}  // namespace

std::string_view to_string(RecursionKind kind) {
  switch (kind) {
    case RecursionKind::MSA1: return "MSA1";
    case RecursionKind::MSA2Mass: return "MSA2-mass";
    case RecursionKind::MSA3: return "MSA3";
  }
  return "?";
}

bool RecursionTrace::envelope_holds() const {
  return std::all_of(rows.begin(), rows.end(), [](const RecursionRow& r) { return r.envelope.value_or(true); });
}

double log_sum_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

RecursionTrace msa1_trace(double Y, int d, double p, double P0, double L0, std::int64_t kmax, bool run_to_kmax) {
  if (!(Y >= 400.0)) throw PreconditionError("msa1: scale factor Y must be >= 400");
  if (!(p > 0.0) || !(L0 > 0.0) || d < 1 || kmax < 0) throw PreconditionError("msa1: need p > 0, L0 > 0, d >= 1");
  const double log_c = 2.0 * d * std::log(2.0 * Y);  // log (2Y)^{2d}
  const double log_bound = -std::log(2.0) - log_c;
  if (!(P0 >= 0.0) || !(std::log(P0) < log_bound)) {
    throw PreconditionError("msa1: need 0 <= P0 < (2Y)^{-2d}/2 = " + fmt(std::exp(log_bound)) + ", got " + fmt(P0));
  }
  RecursionTrace t;
  t.kind = RecursionKind::MSA1;
  t.constants = {{"Y", Y}, {"d", static_cast<double>(d)}, {"p", p}, {"P0", P0}, {"L0", L0}};
  const double log_y = std::log(Y);
  const double log_half = -std::log(2.0);
  const double log_env0 = std::log(2.0) + log_c + std::log(P0);  // log 2(2Y)^{2d}P0 < 0
  double log_l = std::log(L0);
  double log_pk = std::log(P0);
  for (std::int64_t k = 0; k <= kmax; ++k) {
    if (k > 0) {
      log_l += log_y;
      log_pk = log_sum_exp(log_c + 2.0 * log_pk, log_half - p * log_l);
    }
    RecursionRow row = make_row(k, L0 * std::pow(Y, static_cast<double>(k)), log_pk, -p * log_l);
    if (k >= 1 && !t.K0 && !row.met) {
      row.envelope = std::log(2.0) + log_c + log_pk < std::ldexp(log_env0, static_cast<int>(k));
    }
    if (row.met && !t.K0) t.K0 = k;
    t.rows.push_back(row);
    if (t.K0 && !run_to_kmax) break;
  }
  t.capped = !t.K0;
  return t;
}

RecursionTrace msa2_mass(double m0, double gamma1, double q, double tau, double kappa, double L0, std::int64_t kmax,
                         double C) {
  if (!(0.0 < kappa && kappa < tau && tau < 1.0)) throw PreconditionError("msa2: need 0 < kappa < tau < 1");
  if (!(gamma1 > 1.0) || !(L0 > 1.0) || kmax < 0 || !(C >= 0.0)) {
    throw PreconditionError("msa2: need gamma1 > 1, L0 > 1, C >= 0");
  }
  if (!(m0 >= std::pow(L0, -kappa))) {
    throw PreconditionError("msa2: need m0 >= L0^-kappa = " + fmt(std::pow(L0, -kappa)) + ", got " + fmt(m0));
  }
  const double rho = std::min({0.5 * (1.0 - tau), gamma1 * tau - 1.0, tau - kappa});
  if (!(rho > 0.0)) throw PreconditionError("msa2: exponent rho = " + fmt(rho) + " must be positive");
  RecursionTrace t;
  t.kind = RecursionKind::MSA2Mass;
  t.constants = {{"m0", m0}, {"gamma1", gamma1}, {"q", q}, {"tau", tau}, {"kappa", kappa}, {"L0", L0}, {"C", C},
                 {"rho", rho}};
  const double half = 0.5 * m0;
  auto row_of = [&](std::int64_t k, double log_l, double m) {
    RecursionRow r;
    r.k = k;
    r.log_scale = log_l;
    r.scale = std::exp(log_l);
    r.value = m;
    r.log_value = m > 0.0 ? std::log(m) : std::numeric_limits<double>::quiet_NaN();
    r.target = half;
    r.log_target = std::log(half);
    r.met = m >= half;
    return r;
  };
  double log_l = std::log(L0);
  double m = m0;
  t.rows.push_back(row_of(0, log_l, m));
  for (std::int64_t k = 1; k <= kmax; ++k) {
    m *= 1.0 - C * gamma1 * q * std::exp(-rho * log_l);
    log_l *= gamma1;
    t.rows.push_back(row_of(k, log_l, m));
  }
  t.half_mass = std::all_of(t.rows.begin(), t.rows.end(), [](const RecursionRow& r) { return r.met; });
  return t;
}

RecursionTrace msa3_trace_log(double Y, double s, int d, double zeta, double log_P0, double L0, std::int64_t kmax,
                              bool run_to_kmax) {
  if (!(0.0 < s && s < 1.0)) throw PreconditionError("msa3: need 0 < s < 1");
  if (!(0.0 < zeta && zeta < s)) throw PreconditionError("msa3: need 0 < zeta < s");
  if (!(Y >= std::pow(400.0, 1.0 / (1.0 - s)))) {
    throw PreconditionError("msa3: need Y >= 400^(1/(1-s)) = " + fmt(std::pow(400.0, 1.0 / (1.0 - s))));
  }
  if (!(L0 > 0.0) || d < 1 || kmax < 0) throw PreconditionError("msa3: need L0 > 0, d >= 1");
  const double N = std::floor(std::pow(Y, s));
  const double log_c = (N + 1.0) * d * std::log(2.0 * Y);  // log (2Y)^{(N+1)d}
  const double log_a = (std::log(2.0) + log_c) / N;        // log (2(2Y)^{(N+1)d})^{1/N}
  if (!(log_P0 < -log_a)) {
    throw PreconditionError("msa3: need P0 < (2(2Y)^{(N+1)d})^{-1/N}, i.e. log P0 < " + fmt(-log_a) + ", got " +
                            fmt(log_P0));
  }
  RecursionTrace t;
  t.kind = RecursionKind::MSA3;
  t.constants = {{"Y", Y}, {"s", s}, {"d", static_cast<double>(d)}, {"zeta", zeta}, {"log_P0", log_P0},
                 {"L0", L0},  {"N", N}};
  const double log_y = std::log(Y);
  const double log_half = -std::log(2.0);
  const double log_env0 = log_a + log_P0;
  double log_l = std::log(L0);
  double log_pk = log_P0;
  for (std::int64_t k = 0; k <= kmax; ++k) {
    if (k > 0) {
      log_l += log_y;
      log_pk = log_sum_exp(log_c + (N + 1.0) * log_pk, log_half - std::exp(zeta * log_l));
    }
    RecursionRow row = make_row(k, L0 * std::pow(Y, static_cast<double>(k)), log_pk, -std::exp(zeta * log_l));
    if (k >= 1 && !t.K0 && !row.met) {
      row.envelope = log_a + log_pk < std::pow(N + 1.0, static_cast<double>(k)) * log_env0;
    }
    if (row.met && !t.K0) t.K0 = k;
    t.rows.push_back(row);
    if (t.K0 && !run_to_kmax) break;
  }
  t.capped = !t.K0;
  return t;
}

RecursionTrace msa3_trace(double Y, double s, int d, double zeta, double P0, double L0, std::int64_t kmax,
                          bool run_to_kmax) {
  if (!(P0 >= 0.0)) throw PreconditionError("msa3: P0 must be non-negative");
  return msa3_trace_log(Y, s, d, zeta, std::log(P0), L0, kmax, run_to_kmax);
}

double level_spacing_constant(double alpha, double K, double eps0, double mu_diam, int d) {
  if (!(alpha > 0.5 && alpha <= 1.0)) throw PreconditionError("alpha must lie in (1/2, 1]");
  const double kt = alpha == 1.0 ? K : 8.0 * K;
  return std::pow(2.0, 2.0 * alpha - 1.0) * kt * kt * (mu_diam + 2.0 * d * eps0 + 1.0);
}

double level_spacing_bound(double L, std::int64_t n_sites, double alpha, double K, double eps0, double mu_diam, int d,
                           SpacingMode mode, double exponent) {
  if (n_sites < 0 || !(L > 0.0)) throw PreconditionError("level_spacing_bound: need L > 0, n >= 0");
  const double y = level_spacing_constant(alpha, K, eps0, mu_diam, d);
  const double decay = mode == SpacingMode::Poly ? std::pow(L, -(2.0 * alpha - 1.0) * exponent)
                                                 : std::exp(-(2.0 * alpha - 1.0) * std::pow(L, exponent));
  const double n = static_cast<double>(n_sites);
  return std::clamp(1.0 - y * decay * n * n, 0.0, 1.0);
}

InitBound init_bound(double L, int d, double q, double alpha, double K, double epsilon) {
  if (!(epsilon > 0.0)) throw PreconditionError("init_bound: need epsilon > 0");
  if (!(q > 2.0 * d / alpha)) throw PreconditionError("init_bound: need q > 2d/alpha");
  if (!(L > 1.0)) throw PreconditionError("init_bound: need L > 1");
  InitBound b;
  const double lq = std::pow(L, -q);
  b.theta_eL = std::floor(L / 20.0) / std::log(L) * std::log1p(lq / (2.0 * d * epsilon));
  b.raw = 1.0 - 0.5 * K * std::pow(L + 1.0, 2.0 * d) * std::pow(8.0 * d * epsilon + 2.0 * lq, alpha);
  b.prob_lower = std::clamp(b.raw, 0.0, 1.0);
  return b;
}

double mix_rate_lower(double L, int d, double q, double tau, double gamma1) {
  return 0.125 * (2.5 * d + q) * std::pow(L, -(1.0 - tau + 1.0 / gamma1)) * std::log(L);
}

double loc_rate_lower(double L, double tau, double s, double gamma) {
  return 0.125 * std::pow(L, -(1.0 - tau + (1.0 - s) / gamma));
}

}  // namespace anderson
