#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace anderson {

enum class RecursionKind { MSA1, MSA2Mass, MSA3 };

std::string_view to_string(RecursionKind kind);

// One step of a bound iteration. Probabilities are carried in natural-log
// space; `value` and `target` are their exponentials (0 on underflow).
struct RecursionRow {
  std::int64_t k = 0;
  double scale = 0.0;
  double log_scale = 0.0;
  double value = 0.0;
  double log_value = 0.0;
  double target = 0.0;
  double log_target = 0.0;
  bool met = false;
  // Doubly-exponential envelope, evaluated for 1 <= k < K0.
  std::optional<bool> envelope;
};

struct RecursionTrace {
  RecursionKind kind = RecursionKind::MSA1;
  std::vector<RecursionRow> rows;
  std::optional<std::int64_t> K0;
  bool capped = false;
  // MSA2: inf_k m_k >= m_0 / 2 over the computed rows.
  std::optional<bool> half_mass;
  std::vector<std::pair<std::string, double>> constants;

  bool envelope_holds() const;
};

// log(exp(a) + exp(b)), exact for -inf arguments.
double log_sum_exp(double a, double b);

// P_{k+1} = (2Y)^{2d} P_k^2 + L_{k+1}^{-p} / 2 with L_{k+1} = Y L_k, until
// P_k <= L_k^{-p} (or through kmax when run_to_kmax).
RecursionTrace msa1_trace(double Y, int d, double p, double P0, double L0, std::int64_t kmax,
                          bool run_to_kmax = false);

// m_k = m_{k-1} (1 - C gamma1 q L_{k-1}^{-rho}) with L_k = L0^(gamma1^k) and
// rho = min{(1 - tau)/2, gamma1 tau - 1, tau - kappa}.
RecursionTrace msa2_mass(double m0, double gamma1, double q, double tau, double kappa, double L0, std::int64_t kmax,
                         double C = 1.0);

// P_{k+1} = (2Y)^{(N+1)d} P_k^{N+1} + exp(-L_{k+1}^zeta) / 2 with N = floor(Y^s).
RecursionTrace msa3_trace(double Y, double s, int d, double zeta, double P0, double L0, std::int64_t kmax,
                          bool run_to_kmax = false);

// Same recursion with the initial probability given as log P0.
RecursionTrace msa3_trace_log(double Y, double s, int d, double zeta, double log_P0, double L0, std::int64_t kmax,
                              bool run_to_kmax = false);

enum class SpacingMode { Poly, Exp };

// Y_eps0 = 2^(2 alpha - 1) K~^2 (diam supp mu + 2 d eps0 + 1), K~ = K if alpha = 1 else 8K
double level_spacing_constant(double alpha, double K, double eps0, double mu_diam, int d);

// 1 - Y_eps0 L^{-(2 alpha - 1) q} n^2 or 1 - Y_eps0 exp(-(2 alpha - 1) L^beta) n^2, clamped to [0, 1].
double level_spacing_bound(double L, std::int64_t n_sites, double alpha, double K, double eps0, double mu_diam, int d,
                           SpacingMode mode, double exponent);

struct InitBound {
  double theta_eL = 0.0;
  double prob_lower = 0.0;
  double raw = 0.0;  // before clamping
};

// theta_{eps,L} = floor(L/20)/log L * log(1 + L^-q / (2 d eps)),
// prob >= 1 - K (L+1)^{2d} (8 d eps + 2 L^-q)^alpha / 2.
InitBound init_bound(double L, int d, double q, double alpha, double K, double epsilon);

// Rate formulas with their explicit prefactors; evaluators only.
double mix_rate_lower(double L, int d, double q, double tau, double gamma1);
double loc_rate_lower(double L, double tau, double s, double gamma);

}  // namespace anderson
