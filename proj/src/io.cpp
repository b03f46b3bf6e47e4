#include "anderson/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

namespace anderson {

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ConfigError("expected a number, got " + j.dump());
}

Json site_to_json(const Site& s, int dim) {
  Json a = Json::array();
  for (int c = 0; c < dim; ++c) a.push_back(s[static_cast<std::size_t>(c)]);
  return a;
}

Site site_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || j.size() > static_cast<std::size_t>(kMaxDim)) {
    throw ConfigError("a site is an array of 1 to 3 integers");
  }
  Site s{};
  for (std::size_t c = 0; c < j.size(); ++c) s[c] = j[c].get<std::int64_t>();
  return s;
}

namespace {

Json point_to_json(const Point& p, int dim) {
  Json a = Json::array();
  for (int c = 0; c < dim; ++c) a.push_back(p[static_cast<std::size_t>(c)]);
  return a;
}

Point point_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || j.size() > static_cast<std::size_t>(kMaxDim)) {
    throw ConfigError("a point is an array of 1 to 3 numbers");
  }
  Point p{};
  for (std::size_t c = 0; c < j.size(); ++c) p[c] = j[c].get<double>();
  return p;
}

Json rational_to_json(const Rational& r) { return Json{{"num", r.numerator()}, {"den", r.denominator()}}; }

Json witness_to_json(const std::optional<std::pair<Site, Site>>& w, int dim) {
  if (!w) return nullptr;
  return Json{{"x", site_to_json(w->first, dim)}, {"y", site_to_json(w->second, dim)}};
}

std::optional<std::pair<Site, Site>> witness_from_json(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return std::make_pair(site_from_json(j.at("x")), site_from_json(j.at("y")));
}

Json optional_number(const std::optional<double>& x) { return x ? number(*x) : Json(nullptr); }

std::optional<double> optional_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return number_from(j);
}

std::string csv_number(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::string site_label(const Site& s, int dim) {
  std::string out;
  for (int c = 0; c < dim; ++c) {
    if (c) out += ' ';
    out += std::to_string(s[static_cast<std::size_t>(c)]);
  }
  return out;
}

void reject_unknown(const Json& j, std::initializer_list<const char*> keys, const std::string& what) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + what);
  }
}

}  // namespace

Json to_json(const Region& r) {
  Json sites = Json::array();
  for (const Site& s : r) sites.push_back(site_to_json(s, r.dim()));
  return Json{{"dim", r.dim()}, {"sites", sites}};
}

Region region_from_json(const Json& j) {
  std::vector<Site> sites;
  for (const auto& s : j.at("sites")) sites.push_back(site_from_json(s));
  return Region(j.at("dim").get<int>(), std::move(sites));
}

Json to_json(const LatticeBox& box) {
  return Json{{"center", point_to_json(box.center, box.dim())}, {"side", box.side}, {"size", box.region.size()}};
}

Json to_json(const Cover& cover) {
  Json centers = Json::array();
  for (const Point& c : cover.centers) centers.push_back(point_to_json(c, cover.dim()));
  return Json{{"parent", to_json(cover.parent)},
              {"side", cover.side},
              {"cell_side", cover.cell_side},
              {"rho", rational_to_json(cover.rho)},
              {"k", cover.k},
              {"spacing", rational_to_json(cover.spacing())},
              {"count", cover.size()},
              {"centers", centers}};
}

Json to_json(const BoxGraph& g) {
  auto edges = [](const auto& list) {
    Json a = Json::array();
    for (const auto& [u, v] : list) a.push_back(Json::array({u, v}));
    return a;
  };
  return Json{{"vertices", g.vertices}, {"edges1", edges(g.edges1)}, {"edges2", edges(g.edges2)}};
}

Json to_json(const BufferedSubset& b) {
  return Json{{"component", b.component},
              {"dilated", b.dilated},
              {"buffer_centers", b.buffer_centers},
              {"upsilon_size", b.upsilon.size()},
              {"core_size", b.core.size()},
              {"checked_size", b.checked.size()},
              {"checked_prime_size", b.checked_prime.size()},
              {"hat_size", b.hat.size()},
              {"hat_prime_size", b.hat_prime.size()},
              {"diameter", b.diameter},
              {"connected", b.connected},
              {"boundary_buffered", b.boundary_buffered}};
}

Json to_json(const Distribution& d) {
  return Json{{"kind", std::string(to_string(d.kind))},
              {"lower", d.lower},
              {"upper", d.upper},
              {"alpha", d.alpha},
              {"K", d.K}};
}

Distribution distribution_from_json(const Json& j) {
  reject_unknown(j, {"kind", "lower", "upper", "alpha", "K"}, "distribution");
  const DistributionKind kind = parse_distribution_kind(j.value("kind", std::string("uniform")));
  const double lo = j.value("lower", 0.0), hi = j.value("upper", 1.0);
  Distribution d = kind == DistributionKind::Uniform ? Distribution::uniform(lo, hi)
                                                     : Distribution::holder(j.value("alpha", 1.0), lo, hi);
  if (j.contains("K")) d.K = j.at("K").get<double>();
  return d;
}

Json to_json(const ParameterSet& ps) {
  return Json{{"d", ps.d},         {"alpha", ps.alpha}, {"K", ps.K},          {"theta", ps.theta},
              {"xi", ps.xi},       {"q", ps.q},         {"p", ps.p},          {"gamma1", ps.gamma1},
              {"zeta", ps.zeta},   {"beta", ps.beta},   {"gamma", ps.gamma},  {"tau", ps.tau},
              {"s", ps.s},         {"zeta_tilde", ps.zeta_tilde},             {"tau_tilde", ps.tau_tilde}};
}

ParameterSet parameters_from_json(const Json& j) {
  reject_unknown(j, {"d", "alpha", "K", "theta", "xi", "q", "p", "gamma1", "zeta", "beta", "gamma", "tau", "s",
                     "zeta_tilde", "tau_tilde"},
                 "parameters");
  ParameterSet ps;
  ps.d = j.value("d", 1);
  ps.alpha = j.value("alpha", 1.0);
  ps.K = j.value("K", 1.0);
  ps.theta = j.at("theta").get<double>();
  ps.xi = j.at("xi").get<double>();
  ps.q = j.at("q").get<double>();
  ps.p = j.at("p").get<double>();
  ps.gamma1 = j.at("gamma1").get<double>();
  ps.zeta = j.at("zeta").get<double>();
  ps.beta = j.at("beta").get<double>();
  ps.gamma = j.at("gamma").get<double>();
  ps.tau = j.at("tau").get<double>();
  ps.s = j.at("s").get<double>();
  ps.refresh_derived();
  return ps;
}

Json to_json(const std::vector<InequalityCheck>& checks) {
  Json a = Json::array();
  for (const auto& c : checks) {
    a.push_back(Json{{"name", c.name},
                     {"lhs", number(c.lhs)},
                     {"rhs", number(c.rhs)},
                     {"strict", c.strict},
                     {"margin", number(c.margin())},
                     {"pass", c.pass}});
  }
  return a;
}

Json to_json(const ScaleThresholds& t) {
  return Json{{"Lprime", t.l_prime}, {"Ltau", t.l_tau}, {"Ltau_tilde", t.l_tau_tilde}, {"below_200", t.below_200}};
}

Json to_json(const LocalizationVerdict& v) {
  Json j{{"box", to_json(v.box)},
         {"kind", std::string(to_string(v.kind))},
         {"rate", v.rate},
         {"localizing", v.localizing},
         {"spacing_ok", v.spacing_ok},
         {"eigensystem_ok", v.eigensystem_ok},
         {"witness", witness_to_json(v.witness, v.box.dim())},
         {"thresholds", Json{{"Lprime", v.l_prime}, {"Ltau", v.l_tau}}},
         {"min_gap", number(v.min_gap)},
         {"degenerate_labeling", v.degenerate}};
  if (v.implication) j["sel_implication"] = Json{{"rate", v.implication_rate}, {"holds", *v.implication}};
  return j;
}

Json to_json(const RecursionTrace& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json row{{"k", r.k},
             {"scale", number(r.scale)},
             {"log_scale", number(r.log_scale)},
             {"value", number(r.value)},
             {"log_value", number(r.log_value)},
             {"target", number(r.target)},
             {"log_target", number(r.log_target)},
             {"met", r.met}};
    if (r.envelope) row["envelope"] = *r.envelope;
    rows.push_back(row);
  }
  Json constants = Json::object();
  for (const auto& [k, v] : t.constants) constants[k] = number(v);
  Json j{{"kind", std::string(to_string(t.kind))},
         {"constants", constants},
         {"K0", t.K0 ? Json(*t.K0) : Json(nullptr)},
         {"capped", t.capped},
         {"envelope_holds", t.envelope_holds()}};
  if (t.half_mass) j["half_mass"] = *t.half_mass;
  j["rows"] = rows;
  return j;
}

Json to_json(const InitBound& b) {
  return Json{{"theta_eL", number(b.theta_eL)}, {"prob_lower", number(b.prob_lower)}, {"raw", number(b.raw)}};
}

Json to_json(const ExperimentConfig& c) {
  Json offsets = Json::array();
  for (const Point& p : c.offsets) offsets.push_back(point_to_json(p, c.d));
  Json j{{"dim", c.d},
         {"side", c.L},
         {"epsilon", c.epsilon},
         {"distribution", to_json(c.distribution)},
         {"seed", c.seed},
         {"n", c.n},
         {"predicate", std::string(to_string(c.predicate))},
         {"rate", number(c.rate)},
         {"criteria", Json{{"q", c.criteria.q}, {"beta", c.criteria.beta}, {"tau", c.criteria.tau}}},
         {"offsets", offsets},
         {"separated_eta", optional_number(c.separated_eta)},
         {"theoretical_bound", optional_number(c.theoretical_bound)},
         {"threads", c.threads},
         {"out_dir", c.out_dir}};
  j["parameters"] = c.parameters ? to_json(*c.parameters) : Json(nullptr);
  return j;
}

ExperimentConfig config_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
    reject_unknown(j, {"dim", "side", "epsilon", "distribution", "seed", "n", "predicate", "rate", "criteria",
                       "offsets", "separated_eta", "theoretical_bound", "threads", "out_dir", "parameters"},
                   "configuration");
    ExperimentConfig c;
    c.d = j.value("dim", c.d);
    c.L = j.value("side", c.L);
    c.epsilon = j.value("epsilon", c.epsilon);
    if (j.contains("distribution")) c.distribution = distribution_from_json(j.at("distribution"));
    c.seed = j.value("seed", c.seed);
    c.n = j.value("n", c.n);
    if (j.contains("predicate")) c.predicate = parse_predicate(j.at("predicate").get<std::string>());
    if (j.contains("rate")) c.rate = number_from(j.at("rate"));
    if (j.contains("parameters") && !j.at("parameters").is_null()) {
      c.parameters = parameters_from_json(j.at("parameters"));
      c.criteria = BoxCriteria(*c.parameters);
    }
    if (j.contains("criteria")) {
      const Json& cr = j.at("criteria");
      reject_unknown(cr, {"q", "beta", "tau"}, "criteria");
      c.criteria.q = cr.value("q", c.criteria.q);
      c.criteria.beta = cr.value("beta", c.criteria.beta);
      c.criteria.tau = cr.value("tau", c.criteria.tau);
    }
    if (j.contains("offsets")) {
      c.offsets.clear();
      for (const auto& p : j.at("offsets")) c.offsets.push_back(point_from_json(p));
    }
    if (j.contains("separated_eta")) c.separated_eta = optional_from(j.at("separated_eta"));
    if (j.contains("theoretical_bound")) c.theoretical_bound = optional_from(j.at("theoretical_bound"));
    c.threads = j.value("threads", c.threads);
    c.out_dir = j.value("out_dir", c.out_dir);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  } catch (const UnsupportedDistribution& e) {
    throw ConfigError(e.what());
  }
}

Json to_json(const ExperimentRecord& r) {
  Json outcomes = Json::array();
  for (const auto& o : r.outcomes) {
    Json verdicts = Json::array();
    for (bool v : o.verdicts) verdicts.push_back(v);
    outcomes.push_back(Json{{"index", o.index},
                            {"seed", o.seed},
                            {"failed", o.failed},
                            {"error", o.error},
                            {"verdicts", verdicts},
                            {"min_gap", number(o.min_gap)},
                            {"witness", witness_to_json(o.witness, r.config.d)}});
  }
  return Json{{"config", to_json(r.config)},
              {"successes", r.successes},
              {"evaluated", r.evaluated},
              {"excluded", r.excluded},
              {"frequency", r.frequency},
              {"ci95", Json::array({r.ci_low, r.ci_high})},
              {"offset_frequencies", r.offset_frequencies},
              {"min_frequency", r.min_frequency},
              {"theoretical_bound", optional_number(r.theoretical_bound)},
              {"wall_seconds", r.wall_seconds},
              {"outcomes", outcomes}};
}

ExperimentRecord record_from_json(const Json& j) {
  try {
    ExperimentRecord r;
    r.config = config_from_json(j.at("config"));
    r.successes = j.at("successes").get<std::int64_t>();
    r.evaluated = j.at("evaluated").get<std::int64_t>();
    r.excluded = j.at("excluded").get<std::int64_t>();
    r.frequency = j.at("frequency").get<double>();
    r.ci_low = j.at("ci95").at(0).get<double>();
    r.ci_high = j.at("ci95").at(1).get<double>();
    r.offset_frequencies = j.at("offset_frequencies").get<std::vector<double>>();
    r.min_frequency = j.at("min_frequency").get<double>();
    r.theoretical_bound = optional_from(j.at("theoretical_bound"));
    r.wall_seconds = j.at("wall_seconds").get<double>();
    for (const auto& o : j.at("outcomes")) {
      RealizationOutcome out;
      out.index = o.at("index").get<std::int64_t>();
      out.seed = o.at("seed").get<std::uint64_t>();
      out.failed = o.at("failed").get<bool>();
      out.error = o.at("error").get<std::string>();
      for (const auto& v : o.at("verdicts")) out.verdicts.push_back(v.get<bool>());
      out.min_gap = number_from(o.at("min_gap"));
      out.witness = witness_from_json(o.at("witness"));
      r.outcomes.push_back(std::move(out));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed record: ") + e.what());
  }
}

Json to_json(const InitStepReport& r) {
  return Json{{"epsilon", r.epsilon},
              {"theta_eL", r.theta},
              {"prob_lower", r.bound.prob_lower},
              {"threshold", r.threshold},
              {"frequency", r.record.frequency},
              {"min_frequency", r.record.min_frequency},
              {"ci95", Json::array({r.record.ci_low, r.record.ci_high})},
              {"n", r.record.config.n},
              {"excluded", r.record.excluded},
              {"separated", r.record.config.separated_eta.has_value()},
              {"pass", r.pass}};
}

Json to_json(const SeparationAudit& a) {
  Json v = Json::array();
  for (const auto& x : a.violations) {
    v.push_back(Json{{"x", site_to_json(x.x, kMaxDim)},
                     {"y", site_to_json(x.y, kMaxDim)},
                     {"inequality", x.inequality},
                     {"lhs", number(x.lhs)},
                     {"rhs", number(x.rhs)}});
  }
  return Json{{"gap_checks", a.gap_checks},
              {"decay_checks", a.decay_checks},
              {"min_gap_margin", number(a.min_gap_margin)},
              {"max_decay_ratio", number(a.max_decay_ratio)},
              {"degenerate_labeling", a.degenerate_labeling},
              {"violations", v},
              {"pass", a.ok()}};
}

Json to_json(const ResidualAudit& a) {
  Json f = Json::array();
  for (const auto& x : a.failures) {
    f.push_back(Json{{"realization", x.realization},
                     {"site", site_to_json(x.site, kMaxDim)},
                     {"distance", number(x.distance)},
                     {"residual", number(x.residual)},
                     {"bound", number(x.bound)}});
  }
  return Json{{"realizations", a.realizations},
              {"checked", a.checked},
              {"passed", a.passed},
              {"bound", number(a.bound)},
              {"max_residual", number(a.max_residual)},
              {"max_distance_minus_residual", number(a.max_distance_excess)},
              {"injective", a.injective},
              {"injection_distances_ok", a.injection_distances},
              {"failures", f},
              {"pass", a.ok()}};
}

std::string eigensystem_csv(const Eigensystem& es) {
  std::ostringstream os;
  os << "lambda";
  for (const Site& s : es.region) os << ",\"" << site_label(s, es.region.dim()) << '"';
  os << '\n';
  for (std::size_t j = 0; j < es.size(); ++j) {
    os << csv_number(es.eigenvalue(j));
    const auto v = es.vector(j);
    for (Eigen::Index i = 0; i < v.size(); ++i) os << ',' << csv_number(v[i]);
    os << '\n';
  }
  return os.str();
}

std::string labeled_csv(const LabeledEigensystem& les) {
  std::ostringstream os;
  os << "site,eigen_index,lambda,weight,tail,poly_exponent\n";
  const int dim = les.base.region.dim();
  for (const auto& c : les.certificates) {
    os << '"' << site_label(c.site, dim) << "\"," << c.eigen_index << ',' << csv_number(c.eigenvalue) << ','
       << csv_number(c.weight) << ',' << csv_number(c.tail) << ',' << csv_number(c.poly_exponent) << '\n';
  }
  return os.str();
}

std::string validate_csv(const std::vector<InequalityCheck>& checks) {
  std::ostringstream os;
  os << "inequality,lhs,rhs,strict,margin,pass\n";
  for (const auto& c : checks) {
    os << '"' << c.name << "\"," << csv_number(c.lhs) << ',' << csv_number(c.rhs) << ',' << (c.strict ? 1 : 0) << ','
       << csv_number(c.margin()) << ',' << (c.pass ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string trace_csv(const RecursionTrace& t) {
  std::ostringstream os;
  const bool mass = t.kind == RecursionKind::MSA2Mass;
  os << (mass ? "k,L_k,m_k,target,met\n" : "k,L_k,log_value,log_target,met,envelope\n");
  for (const auto& r : t.rows) {
    os << r.k << ',' << csv_number(r.scale) << ',';
    if (mass) {
      os << csv_number(r.value) << ',' << csv_number(r.target) << ',' << (r.met ? 1 : 0) << '\n';
    } else {
      os << csv_number(r.log_value) << ',' << csv_number(r.log_target) << ',' << (r.met ? 1 : 0) << ','
         << (r.envelope ? (*r.envelope ? "1" : "0") : "") << '\n';
    }
  }
  return os.str();
}

std::string trace_gnuplot(const RecursionTrace& t) {
  std::ostringstream os;
  os << "# k " << (t.kind == RecursionKind::MSA2Mass ? "m_k" : "log_value") << '\n';
  for (const auto& r : t.rows) {
    os << r.k << ' ' << csv_number(t.kind == RecursionKind::MSA2Mass ? r.value : r.log_value) << '\n';
  }
  return os.str();
}

std::string record_csv(const ExperimentRecord& r) {
  std::ostringstream os;
  os << "index,seed,failed,verdict,offset_verdicts,min_gap,witness_x,witness_y\n";
  const int dim = r.config.d;
  for (const auto& o : r.outcomes) {
    std::string bits;
    for (bool v : o.verdicts) bits += v ? '1' : '0';
    os << o.index << ',' << o.seed << ',' << (o.failed ? 1 : 0) << ','
       << (!o.failed && !o.verdicts.empty() && o.verdicts[0] ? 1 : 0) << ',' << bits << ',' << csv_number(o.min_gap)
       << ',';
    if (o.witness) {
      os << '"' << site_label(o.witness->first, dim) << "\",\"" << site_label(o.witness->second, dim) << '"';
    } else {
      os << ',';
    }
    os << '\n';
  }
  return os.str();
}

void write_operator_text(std::ostream& os, const FiniteOperator& op) {
  const int dim = op.region.dim();
  os << "# n " << op.size() << " dim " << dim << " epsilon " << csv_number(op.epsilon) << '\n';
  os << "# sites\n";
  for (const Site& s : op.region) os << site_label(s, dim) << '\n';
  os << "# matrix\n";
  for (Eigen::Index i = 0; i < op.matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < op.matrix.cols(); ++j) os << (j ? " " : "") << csv_number(op.matrix(i, j));
    os << '\n';
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error while reading " + path.string());
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("error while writing " + path.string());
}

Json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void save_record(const ExperimentRecord& r, const std::filesystem::path& dir) {
  write_text_file(dir / "record.json", to_json(r).dump(2) + "\n");
  write_text_file(dir / "record.csv", record_csv(r));
}

ExperimentRecord load_record(const std::filesystem::path& json_path) { return record_from_json(read_json_file(json_path)); }

}  // namespace anderson
