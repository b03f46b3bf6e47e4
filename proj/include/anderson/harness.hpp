#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anderson/disorder.hpp"
#include "anderson/localization.hpp"
#include "anderson/parameters.hpp"
#include "anderson/recursion.hpp"

namespace anderson {

// Event tested on each box: a localizing class, or level spacing alone.
enum class Predicate { PL, ML, SEL, LOC, PolySpacing, ExpSpacing };

std::string_view to_string(Predicate p);
Predicate parse_predicate(std::string_view name);

struct ExperimentConfig {
  int d = 1;
  double L = 100.0;
  double epsilon = 0.0;
  Distribution distribution = Distribution::uniform();
  std::uint64_t seed = 0;
  std::int64_t n = 1;
  Predicate predicate = Predicate::PL;
  double rate = 1.0;  // theta~, m*, s~ or m; unused for spacing predicates
  BoxCriteria criteria{3.0, 0.5, 0.9};
  std::optional<ParameterSet> parameters;
  // Box centers probed per realization; the reported frequency is for the
  // first, min_frequency is the minimum over all of them.
  std::vector<Point> offsets{Point{}};
  // Potential replaced by an eta-separated permutation (eta > 0).
  std::optional<double> separated_eta;
  std::optional<double> theoretical_bound;
  unsigned threads = 0;  // 0: hardware concurrency
  std::string out_dir;

  // Throws ConfigError on an invalid configuration.
  void validate() const;
};

struct RealizationOutcome {
  std::int64_t index = 0;
  std::uint64_t seed = 0;
  bool failed = false;  // eigensolver failure; excluded from the frequency
  std::string error;
  std::vector<bool> verdicts;  // per offset
  double min_gap = 0.0;        // first offset
  std::optional<std::pair<Site, Site>> witness;
};

struct ExperimentRecord {
  ExperimentConfig config;
  std::vector<RealizationOutcome> outcomes;
  std::int64_t successes = 0;
  std::int64_t evaluated = 0;
  std::int64_t excluded = 0;
  double frequency = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  std::vector<double> offset_frequencies;
  double min_frequency = 0.0;
  std::optional<double> theoretical_bound;
  double wall_seconds = 0.0;
};

// Equality of everything but wall clock.
bool same_results(const ExperimentRecord& a, const ExperimentRecord& b);

struct BinomialInterval {
  double low = 0.0;
  double high = 1.0;
};

// Exact (Clopper-Pearson) two-sided interval.
BinomialInterval clopper_pearson(std::int64_t successes, std::int64_t n, double confidence = 0.95);

// Runs fn(i) for i in [0, n) on a pool of worker threads.
void parallel_for(std::int64_t n, unsigned threads, const std::function<void(std::int64_t)>& fn);

// Pairwise eta-separated potential: eta times a seeded permutation of 0..n-1.
Eigen::VectorXd separated_potential(std::size_t n, double eta, std::uint64_t seed);

RealizationOutcome run_realization(const ExperimentConfig& config, std::int64_t index);
ExperimentRecord run_trials(const ExperimentConfig& config);

struct InitStepReport {
  double epsilon = 0.0;
  double theta = 0.0;
  InitBound bound;
  double threshold = 0.0;  // prob_lower - 3 sigma
  ExperimentRecord record;
  bool pass = false;
};

struct InitStepOptions {
  bool separated = false;
  unsigned threads = 0;
  std::vector<Point> offsets{Point{}};
};

// eps = L^-q / (4d), theta~ = theta_{eps,L}; PL frequency against the bound.
InitStepReport verify_init_step(int d, double L, double q, std::int64_t n, std::uint64_t seed,
                                const InitStepOptions& options = {});

struct SeparationViolation {
  Site x{};
  Site y{};
  std::string inequality;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct SeparationAudit {
  std::size_t gap_checks = 0;
  std::size_t decay_checks = 0;
  double min_gap_margin = 0.0;   // min over x != y of |lambda_x - lambda_y| - (eta - 4 d eps)
  double max_decay_ratio = 0.0;  // max of |psi_y(x)| / bound
  bool degenerate_labeling = false;
  std::vector<SeparationViolation> violations;

  bool ok() const { return violations.empty(); }
};

// |lambda_x - lambda_y| >= eta - 4 d eps and |psi_y(x)| <= (2 d eps / (eta - 2 d eps))^{|x - y|_1}
SeparationAudit audit_separated_potential(const Region& region, const Eigen::VectorXd& potential, double epsilon,
                                          double eta);

struct ResidualFailure {
  std::int64_t realization = 0;
  Site site{};
  double distance = 0.0;
  double residual = 0.0;
  double bound = 0.0;
};

struct ResidualAudit {
  std::int64_t realizations = 0;
  std::size_t checked = 0;       // localized eigenpairs labeled by interior sites
  std::size_t passed = 0;
  double bound = 0.0;            // eps sqrt(s_d) ell^{(d-1)/2} ell^{-theta~}
  double max_residual = 0.0;
  double max_distance_excess = 0.0;  // max of dist - residual
  bool injective = true;
  bool injection_distances = true;
  std::vector<ResidualFailure> failures;

  bool ok() const { return failures.empty(); }
};

// Inner box of side ell and ambient box of side theta_side, both centered at the origin.
ResidualAudit audit_localized_residual(int d, double ell, double theta_side, double epsilon, double theta_tilde,
                                       std::int64_t n, std::uint64_t seed, double q = 3.0, unsigned threads = 0);

}  // namespace anderson
