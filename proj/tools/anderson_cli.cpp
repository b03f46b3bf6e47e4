// andersonlab: command-line front end for the Anderson-model laboratory.
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "anderson/harness.hpp"
#include "anderson/io.hpp"
#include "anderson/lattice.hpp"
#include "anderson/localization.hpp"
#include "anderson/operator.hpp"
#include "anderson/parameters.hpp"
#include "anderson/recursion.hpp"
#include "anderson/spectral.hpp"

using namespace anderson;

namespace {

constexpr int kPass = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

struct Common {
  int dim = 1;
  double side = 100.0;
  double epsilon = 0.0;
  double q = 3.0;
  std::optional<double> theta;
  std::optional<double> xi;
  std::uint64_t seed = 1;
  std::int64_t n = 100;
  std::string out;
  std::string format = "json";
  unsigned threads = 0;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--dim", c.dim, "lattice dimension d (1-3)")->check(CLI::Range(1, 3));
  app->add_option("--side", c.side, "box side L");
  app->add_option("--epsilon", c.epsilon, "hopping strength");
  app->add_option("--q", c.q, "level-spacing exponent q");
  app->add_option("--theta", c.theta, "theta for the parameter system");
  app->add_option("--xi", c.xi, "xi in (0,1) for the parameter system");
  app->add_option("--seed", c.seed, "random seed");
  app->add_option("--n", c.n, "number of realizations");
  app->add_option("--out", c.out, "output file (directory for run)");
  app->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--threads", c.threads, "worker threads (0 = all cores)");
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    write_text_file(c.out, text);
  }
}

void emit(const Common& c, const Json& j) { emit(c, j.dump(2) + "\n"); }

std::optional<ParameterSet> parameters_from(const Common& c, double alpha) {
  if (!c.theta && !c.xi) return std::nullopt;
  if (!c.theta || !c.xi) throw ConfigError("--theta and --xi must be given together");
  return solve_parameters(*c.theta, *c.xi, alpha, c.dim);
}

Point center_point(const std::vector<double>& center, int dim) {
  if (!center.empty() && static_cast<int>(center.size()) != dim) {
    throw ConfigError("--center needs exactly --dim coordinates");
  }
  Point p{};
  for (std::size_t i = 0; i < center.size(); ++i) p[i] = center[i];
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anderson-model eigensystem multiscale laboratory"};
  app.require_subcommand(1);
  Common c;

  // params
  double alpha = 1.0;
  auto* params = app.add_subcommand("params", "solve and validate the parameter system");
  add_common(params, c);
  params->add_option("--alpha", alpha, "Hoelder exponent alpha in (1/2,1]");
  std::string params_file;
  params->add_option("--validate", params_file, "validate a parameter set stored as JSON instead of solving");

  // cover
  std::int64_t ell = 20;
  std::vector<double> center;
  std::vector<std::size_t> bad;
  double ell_sharp = 0.0;
  auto* cover = app.add_subcommand("cover", "suitable cover geometry, graphs and buffered subsets");
  add_common(cover, c);
  cover->add_option("--ell", ell, "cell side");
  cover->add_option("--center", center, "box center")->expected(1, 3);
  cover->add_option("--bad", bad, "indices of bad cover centers")->expected(0, -1);
  cover->add_option("--ell-sharp", ell_sharp, "buffer interior depth (default floor(ell/20))");

  // spectrum
  std::string operator_out;
  auto* spectrum = app.add_subcommand("spectrum", "eigensystem of one realization");
  add_common(spectrum, c);
  spectrum->add_option("--center", center, "box center")->expected(1, 3);
  spectrum->add_option("--operator-out", operator_out, "also write the matrix in plain-text form");

  // check
  std::string kind_name = "PL";
  double rate = 1.0, beta = 0.5, tau = 0.9;
  auto* check = app.add_subcommand("check", "classify one box");
  add_common(check, c);
  check->add_option("--center", center, "box center")->expected(1, 3);
  check->add_option("--kind", kind_name, "PL, ML, SEL or LOC");
  check->add_option("--rate", rate, "theta~, m*, s~ or m");
  check->add_option("--beta", beta, "exponential level-spacing exponent");
  check->add_option("--tau", tau, "decay onset exponent for ML/LOC");

  // init
  bool separated = false;
  auto* init = app.add_subcommand("init", "initial-step Monte Carlo against the explicit bound");
  add_common(init, c);
  init->add_flag("--separated", separated, "use an eta-separated permutation potential");

  // msa
  std::string msa_kind = "msa1";
  double Y = 400.0, p = 0.1875, P0 = 0.0, L0 = 200.0, s = 0.9, zeta = 0.5, m0 = 0.1, gamma1 = 1.04, kappa = 0.5,
         C = 1.0;
  std::optional<double> log_P0;
  std::int64_t kmax = 64;
  bool to_kmax = false, gnuplot = false;
  auto* msa = app.add_subcommand("msa", "probability and mass recursions");
  add_common(msa, c);
  msa->add_option("--kind", msa_kind, "msa1, msa2 or msa3")->check(CLI::IsMember({"msa1", "msa2", "msa3"}));
  msa->add_option("--Y", Y, "scale ratio");
  msa->add_option("--p", p, "probability exponent p");
  msa->add_option("--P0", P0, "initial probability");
  msa->add_option("--log-P0", log_P0, "initial probability as a natural log (msa3)");
  msa->add_option("--L0", L0, "initial scale");
  msa->add_option("--kmax", kmax, "iteration cap");
  msa->add_option("--s", s, "s (msa3)");
  msa->add_option("--zeta", zeta, "zeta (msa3)");
  msa->add_option("--m0", m0, "initial mass (msa2)");
  msa->add_option("--gamma1", gamma1, "gamma1 (msa2)");
  msa->add_option("--tau", tau, "tau (msa2)");
  msa->add_option("--kappa", kappa, "kappa (msa2)");
  msa->add_option("--C", C, "erosion constant (msa2)");
  msa->add_flag("--to-kmax", to_kmax, "keep iterating after K0");
  msa->add_flag("--gnuplot", gnuplot, "two-column plot data instead of json/csv");

  // audit
  std::string audit_kind = "separated";
  double eta = 1.0, theta_tilde = 2.0;
  auto* audit = app.add_subcommand("audit", "perturbative and residual-chain audits");
  add_common(audit, c);
  audit->add_option("--kind", audit_kind, "separated or residual")->check(CLI::IsMember({"separated", "residual"}));
  audit->add_option("--eta", eta, "separation of the potential (separated)");
  audit->add_option("--ell", ell, "inner box side (residual)");
  audit->add_option("--theta-tilde", theta_tilde, "localization exponent (residual)");

  // run
  std::string config_path, predicate_name = "PL";
  auto* run = app.add_subcommand("run", "seeded Monte Carlo experiment");
  add_common(run, c);
  run->add_option("--config", config_path, "JSON configuration; flags given explicitly override it");
  run->add_option("--predicate", predicate_name, "PL, ML, SEL, LOC, poly-spacing or exp-spacing");
  run->add_option("--rate", rate, "localization rate");
  run->add_option("--beta", beta, "exponential level-spacing exponent");
  run->add_option("--tau", tau, "decay onset exponent for ML/LOC");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (params->parsed()) {
      ParameterSet ps;
      if (!params_file.empty()) {
        ps = parameters_from_json(read_json_file(params_file));
      } else {
        if (!c.theta || !c.xi) throw ConfigError("params needs --theta and --xi (or --validate FILE)");
        try {
          ps = solve_parameters(*c.theta, *c.xi, alpha, c.dim);
        } catch (const InfeasibleParameters& e) {
          std::cerr << e.what() << '\n';
          emit(c, Json{{"feasible", false}, {"violated", e.inequality()}});
          return kCheckFailed;
        }
      }
      const auto checks = validate(ps);
      if (c.format == "csv") {
        emit(c, validate_csv(checks));
      } else {
        emit(c, Json{{"feasible", all_pass(checks)},
                     {"parameters", to_json(ps)},
                     {"thresholds", to_json(scale_thresholds(c.side, ps))},
                     {"checks", to_json(checks)}});
      }
      return all_pass(checks) ? kPass : kCheckFailed;
    }

    if (cover->parsed()) {
      const Point ctr = center_point(center, c.dim);
      const Cover cv = suitable_cover(static_cast<std::int64_t>(c.side), ell, std::span(ctr.data(), c.dim));
      const CoverCheck cc = check_cover(cv);
      const BoxGraph g = cover_graphs(cv);
      Json j = to_json(cv);
      j["check"] = Json{{"covering", cc.covering}, {"count_formula", cc.count_formula},
                        {"count_bounds", cc.count_bounds}, {"lower", cc.lower}, {"upper", cc.upper}};
      j["graphs"] = to_json(g);
      bool ok = cc.ok();
      if (!bad.empty()) {
        const double sharp = ell_sharp > 0.0 ? ell_sharp : std::floor(static_cast<double>(ell) / 20.0);
        Json subsets = Json::array();
        for (const auto& b : buffered_subsets(cv, bad, sharp)) {
          subsets.push_back(to_json(b));
          ok = ok && b.connected && b.diameter <= 5 * ell * static_cast<std::int64_t>(b.component.size());
        }
        j["buffered_subsets"] = subsets;
      }
      emit(c, j);
      return ok ? kPass : kCheckFailed;
    }

    if (spectrum->parsed()) {
      const LatticeBox box = make_box(center_point(center, c.dim), c.dim, c.side);
      const FiniteOperator op = build_hamiltonian(sample_disorder(box.region, Distribution::uniform(), c.seed), c.epsilon);
      if (!operator_out.empty()) {
        std::ostringstream os;
        write_operator_text(os, op);
        write_text_file(operator_out, os.str());
      }
      const Eigensystem es = eigensystem(op);
      if (c.format == "csv") {
        emit(c, eigensystem_csv(es));
      } else {
        const auto qual = measure_quality(op, es);
        std::vector<double> ev(es.eigenvalues.data(), es.eigenvalues.data() + es.size());
        emit(c, Json{{"box", to_json(box)},
                     {"epsilon", c.epsilon},
                     {"seed", c.seed},
                     {"eigenvalues", ev},
                     {"min_gap", number(min_gap(es.eigenvalues))},
                     {"poly_level_spacing", poly_level_spacing(es, c.side, c.q)},
                     {"quality", Json{{"residual", qual.residual},
                                      {"orthogonality", qual.orthogonality},
                                      {"completeness", qual.completeness},
                                      {"reconstruction", qual.reconstruction}}}});
      }
      return kPass;
    }

    if (check->parsed()) {
      const LatticeBox box = make_box(center_point(center, c.dim), c.dim, c.side);
      const FiniteOperator op = build_hamiltonian(sample_disorder(box.region, Distribution::uniform(), c.seed), c.epsilon);
      BoxCriteria crit{c.q, beta, tau};
      if (auto ps = parameters_from(c, 1.0)) crit = BoxCriteria(*ps);
      const LocalizationVerdict v = classify_box(box, op, parse_localization_kind(kind_name), crit, rate);
      emit(c, to_json(v));
      return v.localizing ? kPass : kCheckFailed;
    }

    if (init->parsed()) {
      InitStepOptions opt;
      opt.separated = separated;
      opt.threads = c.threads;
      const InitStepReport rep = verify_init_step(c.dim, c.side, c.q, c.n, c.seed, opt);
      if (c.format == "csv") {
        emit(c, record_csv(rep.record));
      } else {
        emit(c, to_json(rep));
      }
      return rep.pass ? kPass : kCheckFailed;
    }

    if (msa->parsed()) {
      RecursionTrace t;
      bool ok = false;
      if (msa_kind == "msa1") {
        t = msa1_trace(Y, c.dim, p, P0, L0, kmax, to_kmax);
        ok = t.K0.has_value() && t.envelope_holds();
      } else if (msa_kind == "msa2") {
        t = msa2_mass(m0, gamma1, c.q, tau, kappa, L0, kmax, C);
        ok = t.half_mass.value_or(false);
      } else {
        t = log_P0 ? msa3_trace_log(Y, s, c.dim, zeta, *log_P0, L0, kmax, to_kmax)
                   : msa3_trace(Y, s, c.dim, zeta, P0, L0, kmax, to_kmax);
        ok = t.K0.has_value() && t.envelope_holds();
      }
      if (gnuplot) {
        emit(c, trace_gnuplot(t));
      } else if (c.format == "csv") {
        emit(c, trace_csv(t));
      } else {
        emit(c, to_json(t));
      }
      return ok ? kPass : kCheckFailed;
    }

    if (audit->parsed()) {
      if (audit_kind == "separated") {
        const LatticeBox box = make_box(Point{}, c.dim, c.side);
        const Eigen::VectorXd v = separated_potential(box.region.size(), eta, c.seed);
        const SeparationAudit a = audit_separated_potential(box.region, v, c.epsilon, eta);
        emit(c, to_json(a));
        return a.ok() ? kPass : kCheckFailed;
      }
      const ResidualAudit a = audit_localized_residual(c.dim, static_cast<double>(ell), c.side, c.epsilon, theta_tilde,
                                                       c.n, c.seed, c.q, c.threads);
      emit(c, to_json(a));
      return a.ok() ? kPass : kCheckFailed;
    }

    if (run->parsed()) {
      ExperimentConfig cfg;
      if (!config_path.empty()) cfg = config_from_json(read_json_file(config_path));
      auto given = [&](const char* name) { return run->count(name) > 0; };
      if (given("--dim")) cfg.d = c.dim;
      if (given("--side")) cfg.L = c.side;
      if (given("--epsilon")) cfg.epsilon = c.epsilon;
      if (given("--seed")) cfg.seed = c.seed;
      if (given("--n") || config_path.empty()) cfg.n = c.n;
      if (given("--threads")) cfg.threads = c.threads;
      if (given("--predicate")) cfg.predicate = parse_predicate(predicate_name);
      if (given("--rate")) cfg.rate = rate;
      if (given("--q")) cfg.criteria.q = c.q;
      if (given("--beta")) cfg.criteria.beta = beta;
      if (given("--tau")) cfg.criteria.tau = tau;
      if (auto ps = parameters_from(c, 1.0)) {
        cfg.parameters = ps;
        cfg.criteria = BoxCriteria(*ps);
      }
      if (given("--out")) cfg.out_dir = c.out;
      for (auto& o : cfg.offsets) {
        for (int k = cfg.d; k < kMaxDim; ++k) o[static_cast<std::size_t>(k)] = 0.0;
      }
      const ExperimentRecord rec = run_trials(cfg);
      if (!cfg.out_dir.empty()) save_record(rec, cfg.out_dir);
      Json summary{{"n", rec.config.n},
                   {"successes", rec.successes},
                   {"excluded", rec.excluded},
                   {"frequency", rec.frequency},
                   {"ci95", Json::array({rec.ci_low, rec.ci_high})},
                   {"min_frequency", rec.min_frequency},
                   {"theoretical_bound", rec.theoretical_bound ? Json(*rec.theoretical_bound) : Json(nullptr)},
                   {"wall_seconds", rec.wall_seconds}};
      bool ok = rec.excluded == 0;
      if (rec.theoretical_bound) {
        const double b = *rec.theoretical_bound;
        const double margin = 3.0 * std::sqrt(b * (1.0 - b) / static_cast<double>(rec.evaluated));
        ok = ok && rec.min_frequency >= b - margin;
        summary["pass_threshold"] = b - margin;
      }
      summary["pass"] = ok;
      if (c.format == "csv") {
        std::cout << record_csv(rec);
      } else {
        std::cout << summary.dump(2) << '\n';
      }
      return ok ? kPass : kCheckFailed;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const UnsupportedDistribution& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const InfeasibleParameters& e) {
    std::cerr << e.what() << '\n';
    return kCheckFailed;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kUsage;
}
