#include "anderson/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include <boost/math/distributions/beta.hpp>

#include "anderson/operator.hpp"

namespace anderson {

std::string_view to_string(Predicate p) {
  switch (p) {
    case Predicate::PL: return "PL";
    case Predicate::ML: return "ML";
    case Predicate::SEL: return "SEL";
    case Predicate::LOC: return "LOC";
    case Predicate::PolySpacing: return "poly-spacing";
    case Predicate::ExpSpacing: return "exp-spacing";
  }
  return "?";
}

Predicate parse_predicate(std::string_view name) {
  if (name == "poly-spacing") return Predicate::PolySpacing;
  if (name == "exp-spacing") return Predicate::ExpSpacing;
  switch (parse_localization_kind(name)) {
    case LocalizationKind::PL: return Predicate::PL;
    case LocalizationKind::ML: return Predicate::ML;
    case LocalizationKind::SEL: return Predicate::SEL;
    case LocalizationKind::LOC: return Predicate::LOC;
  }
  return Predicate::PL;
}

void ExperimentConfig::validate() const {
  if (d < 1 || d > kMaxDim) throw ConfigError("dim must be 1, 2 or 3");
  if (!(L > 0.0)) throw ConfigError("side must be positive");
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be non-negative");
  if (n < 1) throw ConfigError("number of realizations must be at least 1");
  if (offsets.empty()) throw ConfigError("at least one box center offset is required");
  if (!(criteria.q > 0.0) || !(criteria.beta > 0.0 && criteria.beta < 1.0) ||
      !(criteria.tau > 0.0 && criteria.tau < 1.0)) {
    throw ConfigError("criteria need q > 0 and beta, tau in (0, 1)");
  }
  const bool spacing = predicate == Predicate::PolySpacing || predicate == Predicate::ExpSpacing;
  if (!spacing && !(rate > 0.0)) throw ConfigError("localization rate must be positive");
  if (separated_eta && !(*separated_eta > 0.0)) throw ConfigError("separation eta must be positive");
  try {
    distribution.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (parameters) {
    for (const auto& c : anderson::validate(*parameters)) {
      if (!c.pass) throw ConfigError("parameter set fails " + c.name);
    }
  }
}

bool same_results(const ExperimentRecord& a, const ExperimentRecord& b) {
  if (a.outcomes.size() != b.outcomes.size()) return false;
  for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
    const auto& x = a.outcomes[i];
    const auto& y = b.outcomes[i];
    if (x.index != y.index || x.seed != y.seed || x.failed != y.failed || x.verdicts != y.verdicts ||
        x.min_gap != y.min_gap || x.witness != y.witness) {
      return false;
    }
  }
  return a.successes == b.successes && a.evaluated == b.evaluated && a.excluded == b.excluded &&
         a.frequency == b.frequency && a.ci_low == b.ci_low && a.ci_high == b.ci_high &&
         a.offset_frequencies == b.offset_frequencies && a.min_frequency == b.min_frequency &&
         a.theoretical_bound == b.theoretical_bound;
}

BinomialInterval clopper_pearson(std::int64_t successes, std::int64_t n, double confidence) {
  if (n < 1 || successes < 0 || successes > n) throw PreconditionError("binomial interval: need 0 <= k <= n, n >= 1");
  const double a = 0.5 * (1.0 - confidence);
  const double k = static_cast<double>(successes), m = static_cast<double>(n);
  BinomialInterval ci;
  ci.low = successes == 0 ? 0.0 : boost::math::quantile(boost::math::beta_distribution<>(k, m - k + 1.0), a);
  ci.high = successes == n ? 1.0 : boost::math::quantile(boost::math::beta_distribution<>(k + 1.0, m - k), 1.0 - a);
  return ci;
}

void parallel_for(std::int64_t n, unsigned threads, const std::function<void(std::int64_t)>& fn) {
  if (n <= 0) return;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::int64_t>(threads, n));
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> has_error{false};
  auto worker = [&] {
    for (std::int64_t i = next++; i < n && !has_error; i = next++) {
      try {
        fn(i);
      } catch (...) {
        if (!has_error.exchange(true)) error = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

Eigen::VectorXd separated_potential(std::size_t n, double eta, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  // Fisher-Yates driven by the counter-based stream so the result is platform independent.
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(mix_seed(seed, i) % i);
    std::swap(perm[i - 1], perm[j]);
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) v[static_cast<Eigen::Index>(i)] = eta * static_cast<double>(perm[i]);
  return v;
}

namespace {

struct BoxOutcome {
  bool verdict = false;
  double min_gap = 0.0;
  std::optional<std::pair<Site, Site>> witness;
};

BoxOutcome evaluate_box(const ExperimentConfig& c, const Point& center, std::uint64_t seed) {
  const LatticeBox box = make_box(center, c.d, c.L);
  const Eigen::VectorXd potential = c.separated_eta ? separated_potential(box.region.size(), *c.separated_eta, seed)
                                                    : sample_disorder(box.region, c.distribution, seed).values;
  const FiniteOperator op = build_hamiltonian(box.region, potential, c.epsilon);
  BoxOutcome out;
  if (c.predicate == Predicate::PolySpacing || c.predicate == Predicate::ExpSpacing) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op.matrix, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw SolverFailure("eigenvalue solve did not converge");
    Eigensystem es{box.region, solver.eigenvalues(), {}};
    out.min_gap = min_gap(es.eigenvalues);
    out.verdict = c.predicate == Predicate::PolySpacing ? poly_level_spacing(es, c.L, c.criteria.q)
                                                        : exp_level_spacing(es, c.L, c.criteria.beta);
    return out;
  }
  const LocalizationKind kind = c.predicate == Predicate::PL    ? LocalizationKind::PL
                                : c.predicate == Predicate::ML  ? LocalizationKind::ML
                                : c.predicate == Predicate::SEL ? LocalizationKind::SEL
                                                                : LocalizationKind::LOC;
  const LocalizationVerdict v = classify_box(box, op, kind, c.criteria, c.rate);
  out.verdict = v.localizing;
  out.min_gap = v.min_gap;
  out.witness = v.witness;
  return out;
}

}  // namespace

RealizationOutcome run_realization(const ExperimentConfig& config, std::int64_t index) {
  RealizationOutcome r;
  r.index = index;
  r.seed = mix_seed(config.seed, static_cast<std::uint64_t>(index));
  try {
    for (std::size_t k = 0; k < config.offsets.size(); ++k) {
      const BoxOutcome b = evaluate_box(config, config.offsets[k], r.seed);
      r.verdicts.push_back(b.verdict);
      if (k == 0) {
        r.min_gap = b.min_gap;
        r.witness = b.witness;
      }
    }
  } catch (const SolverFailure& e) {
    r.failed = true;
    r.error = e.what();
    r.verdicts.clear();
  }
  return r;
}

ExperimentRecord run_trials(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  ExperimentRecord rec;
  rec.config = config;
  rec.outcomes.resize(static_cast<std::size_t>(config.n));
  parallel_for(config.n, config.threads,
               [&](std::int64_t i) { rec.outcomes[static_cast<std::size_t>(i)] = run_realization(config, i); });

  std::vector<std::int64_t> per_offset(config.offsets.size(), 0);
  for (const auto& o : rec.outcomes) {
    if (o.failed) {
      ++rec.excluded;
      continue;
    }
    ++rec.evaluated;
    for (std::size_t k = 0; k < o.verdicts.size(); ++k) per_offset[k] += o.verdicts[k] ? 1 : 0;
  }
  rec.successes = per_offset[0];
  if (rec.evaluated > 0) {
    const double m = static_cast<double>(rec.evaluated);
    rec.frequency = static_cast<double>(rec.successes) / m;
    const auto ci = clopper_pearson(rec.successes, rec.evaluated);
    rec.ci_low = ci.low;
    rec.ci_high = ci.high;
    for (auto s : per_offset) rec.offset_frequencies.push_back(static_cast<double>(s) / m);
    rec.min_frequency = *std::min_element(rec.offset_frequencies.begin(), rec.offset_frequencies.end());
  }
  rec.theoretical_bound = config.theoretical_bound;
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

InitStepReport verify_init_step(int d, double L, double q, std::int64_t n, std::uint64_t seed,
                                const InitStepOptions& options) {
  if (n < 1) throw ConfigError("init step needs at least one realization");
  InitStepReport rep;
  rep.epsilon = std::pow(L, -q) / (4.0 * d);
  rep.bound = init_bound(L, d, q, 1.0, 1.0, rep.epsilon);
  rep.theta = rep.bound.theta_eL;
  const double p = rep.bound.prob_lower;
  rep.threshold = p - 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));

  ExperimentConfig c;
  c.d = d;
  c.L = L;
  c.epsilon = rep.epsilon;
  c.seed = seed;
  c.n = n;
  c.predicate = Predicate::PL;
  c.rate = rep.theta;
  c.criteria = BoxCriteria{q, 0.5, 0.9};
  c.offsets = options.offsets;
  c.threads = options.threads;
  c.theoretical_bound = p;
  if (options.separated) c.separated_eta = 4.0 * d * rep.epsilon + std::pow(L, -q);
  rep.record = run_trials(c);
  rep.pass = rep.record.excluded == 0 && rep.record.min_frequency >= rep.threshold;
  return rep;
}

SeparationAudit audit_separated_potential(const Region& region, const Eigen::VectorXd& potential, double epsilon,
                                          double eta) {
  const int d = region.dim();
  if (!(eta > 0.0) || !(epsilon >= 0.0) || !(epsilon < eta / (4.0 * d))) {
    throw PreconditionError("separation audit: need 0 <= eps < eta/(4d)");
  }
  if (static_cast<std::size_t>(potential.size()) != region.size()) {
    throw PreconditionError("separation audit: potential size does not match region");
  }
  // differences of rounded values such as x/21 may fall a few ulps short of eta
  const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, potential.cwiseAbs().maxCoeff());
  for (std::size_t i = 0; i < region.size(); ++i) {
    for (std::size_t j = i + 1; j < region.size(); ++j) {
      if (!(std::abs(potential[static_cast<Eigen::Index>(i)] - potential[static_cast<Eigen::Index>(j)]) >=
            eta - slack)) {
        throw PreconditionError("separation audit: potential is not eta-separated");
      }
    }
  }
  const FiniteOperator op = build_hamiltonian(region, potential, epsilon);
  LatticeBox box{Point{}, 1.0, region};
  const LabeledEigensystem les = label_sites(eigensystem(op), box);

  SeparationAudit a;
  a.degenerate_labeling = les.degenerate;
  a.min_gap_margin = std::numeric_limits<double>::infinity();
  const double tol = spectral_tolerance(op);
  const double gap_bound = eta - 4.0 * d * epsilon;
  const double ratio = 2.0 * d * epsilon / (eta - 2.0 * d * epsilon);
  const std::size_t n = region.size();
  for (std::size_t y = 0; y < n; ++y) {
    const double ly = les.eigenvalue_of_site(y);
    const Eigen::VectorXd psi = les.vector_of_site(y);
    for (std::size_t x = 0; x < n; ++x) {
      if (x != y) {
        const double gap = std::abs(les.eigenvalue_of_site(x) - ly);
        ++a.gap_checks;
        a.min_gap_margin = std::min(a.min_gap_margin, gap - gap_bound);
        if (!(gap >= gap_bound - tol - slack)) a.violations.push_back({region[x], region[y], "|λx−λy| ≥ η−4dε", gap, gap_bound});
      }
      const double value = std::abs(psi[static_cast<Eigen::Index>(x)]);
      const double bound = std::pow(ratio, static_cast<double>(l1_distance(region[x], region[y])));
      ++a.decay_checks;
      if (bound > 0.0) a.max_decay_ratio = std::max(a.max_decay_ratio, value / bound);
      if (!(value <= bound + tol)) a.violations.push_back({region[x], region[y], "|ψy(x)| ≤ (2dε/(η−2dε))^|x−y|₁", value, bound});
    }
  }
  return a;
}

ResidualAudit audit_localized_residual(int d, double ell, double theta_side, double epsilon, double theta_tilde,
                                       std::int64_t n, std::uint64_t seed, double q, unsigned threads) {
  if (n < 1) throw ConfigError("audit needs at least one realization");
  if (!(ell <= theta_side)) throw PreconditionError("inner box must not exceed the ambient box");
  const LatticeBox outer = make_box(Point{}, d, theta_side);
  const LatticeBox inner = make_box(Point{}, d, ell);
  const double l_prime = std::floor(ell / 20.0);
  const Region interior = l_prime >= 1.0 ? t_interior(inner.region, outer.region, l_prime) : inner.region;

  ResidualAudit audit;
  audit.realizations = n;
  audit.bound = epsilon * std::sqrt(static_cast<double>(boundary_constant(d))) * std::pow(ell, 0.5 * (d - 1)) *
                std::pow(ell, -theta_tilde);

  struct Local {
    std::size_t checked = 0, passed = 0;
    double max_residual = 0.0, max_excess = -std::numeric_limits<double>::infinity();
    bool injective = true, distances = true;
    std::vector<ResidualFailure> failures;
  };
  std::vector<Local> locals(static_cast<std::size_t>(n));
  parallel_for(n, threads, [&](std::int64_t r) {
    Local& loc = locals[static_cast<std::size_t>(r)];
    const std::uint64_t s = mix_seed(seed, static_cast<std::uint64_t>(r));
    const FiniteOperator big = build_hamiltonian(sample_disorder(outer.region, Distribution::uniform(), s), epsilon);
    const FiniteOperator small = restrict(big, inner.region);
    const Eigensystem big_es = eigensystem(big);
    const LabeledEigensystem les = label_sites(eigensystem(small), inner);
    const std::span<const double> spectrum(big_es.eigenvalues.data(), big_es.size());
    const double tol = spectral_tolerance(big);
    for (const Site& x : interior) {
      const std::size_t xi = *inner.region.index_of(x);
      const Eigen::VectorXd phi = les.vector_of_site(xi);
      if (!is_poly_localized(phi, x, theta_tilde, inner)) continue;
      const double lambda = les.eigenvalue_of_site(xi);
      const auto rep = spectral_residual(big, spectrum, extend_by_zero(phi, inner.region, outer.region), lambda);
      ++loc.checked;
      loc.max_residual = std::max(loc.max_residual, rep.residual);
      loc.max_excess = std::max(loc.max_excess, rep.dist_to_spectrum - rep.residual);
      if (rep.dist_to_spectrum <= rep.residual + tol && rep.residual <= audit.bound + tol) {
        ++loc.passed;
      } else {
        loc.failures.push_back({r, x, rep.dist_to_spectrum, rep.residual, audit.bound});
      }
    }
    const InjectionAudit inj = nearest_eigenvalue_injection(les.base, les.eigen_of_site, interior, big, big_es,
                                                            std::pow(theta_side, -q));
    loc.injective = inj.injective;
    loc.distances = inj.distances_ok;
  });
  audit.max_distance_excess = -std::numeric_limits<double>::infinity();
  for (auto& loc : locals) {
    audit.checked += loc.checked;
    audit.passed += loc.passed;
    audit.max_residual = std::max(audit.max_residual, loc.max_residual);
    audit.max_distance_excess = std::max(audit.max_distance_excess, loc.max_excess);
    audit.injective = audit.injective && loc.injective;
    audit.injection_distances = audit.injection_distances && loc.distances;
    audit.failures.insert(audit.failures.end(), loc.failures.begin(), loc.failures.end());
  }
  return audit;
}

}  // namespace anderson
