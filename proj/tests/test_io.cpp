#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>

#include "anderson/io.hpp"

using namespace anderson;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  std::random_device rd;
  const fs::path p = fs::temp_directory_path() / ("anderson_io_" + name + "_" + std::to_string(rd()));
  fs::remove_all(p);
  return p;
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

ExperimentRecord small_record() {
  ExperimentConfig c;
  c.L = 20.0;
  c.epsilon = 1e-3;
  c.seed = 12;
  c.n = 9;
  c.rate = 1.0;
  c.offsets = {Point{}, Point{2.0}};
  c.threads = 2;
  c.parameters = solve_parameters(12.0, 0.3);
  c.theoretical_bound = 0.5;
  return run_trials(c);
}

}  // namespace

TEST_CASE("non-finite numbers") {
  CHECK(number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(number(std::nan("")) == "nan");
  CHECK(number_from(Json("inf")) == std::numeric_limits<double>::infinity());
  CHECK(std::isnan(number_from(Json("nan"))));
  CHECK(number_from(Json(0.25)) == 0.25);
  CHECK_THROWS_AS(number_from(Json("1.5")), ConfigError);
}

TEST_CASE("region and parameter round trips") {
  const double c[] = {0.5, -1.0};
  const auto box = make_box(c, 5.0);
  CHECK(region_from_json(to_json(box.region)) == box.region);
  const auto ps = solve_parameters(26.0, 0.2, 0.9, 2);
  CHECK(parameters_from_json(to_json(ps)) == ps);
  const auto dist = Distribution::holder(0.8, 0.0, 2.0);
  CHECK(to_json(distribution_from_json(to_json(dist))) == to_json(dist));
}

TEST_CASE("record persistence") {
  const auto rec = small_record();
  const auto dir = scratch("record") / "nested" / "dir";
  save_record(rec, dir);
  REQUIRE(fs::exists(dir / "record.json"));
  REQUIRE(fs::exists(dir / "record.csv"));
  const auto first = read_text_file(dir / "record.json");
  const auto loaded = load_record(dir / "record.json");
  CHECK(same_results(loaded, rec));
  CHECK(loaded.wall_seconds == rec.wall_seconds);
  const auto again = dir / "again";
  save_record(loaded, again);
  CHECK(read_text_file(again / "record.json") == first);
  CHECK(read_text_file(again / "record.csv") == read_text_file(dir / "record.csv"));
  const auto csv = read_text_file(dir / "record.csv");
  CHECK(line_count(csv) == 1 + static_cast<std::size_t>(rec.config.n));
  CHECK(csv.rfind("index,seed,failed,verdict,offset_verdicts,min_gap,witness_x,witness_y\n", 0) == 0);
  fs::remove_all(dir.parent_path().parent_path());
}

TEST_CASE("config parsing") {
  const auto j = Json::parse(R"({"dim": 2, "side": 12, "epsilon": 0.01, "seed": 4, "n": 3, "predicate": "poly-spacing"})");
  const auto c = config_from_json(j);
  CHECK(c.d == 2);
  CHECK(c.L == 12.0);
  CHECK(c.predicate == Predicate::PolySpacing);
  CHECK(config_from_json(to_json(c)).seed == 4);
  CHECK(to_json(config_from_json(to_json(c))) == to_json(c));
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"d": 2})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"predicate": "nope"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"n": "three"})")), ConfigError);
}

TEST_CASE("csv tables") {
  const auto box = make_box(Point{}, 1, 6.0);
  const auto es = eigensystem(build_hamiltonian(sample_disorder(box.region, Distribution::uniform(), 1), 0.1));
  CHECK(line_count(eigensystem_csv(es)) == 1 + es.size());
  CHECK(line_count(labeled_csv(label_sites(es, box))) == 1 + es.size());
  const auto checks = validate(solve_parameters(12.0, 0.3));
  CHECK(line_count(validate_csv(checks)) == 1 + checks.size());
  const auto t = msa3_trace_log(800.0, 0.1, 1, 0.05, -15.5, 1e24, 64);
  CHECK(line_count(trace_csv(t)) == 1 + t.rows.size());
  CHECK(line_count(trace_gnuplot(t)) == 1 + t.rows.size());
  std::ostringstream os;
  write_operator_text(os, build_hamiltonian(box.region, Eigen::VectorXd::Zero(7).eval(), 1.0));
  CHECK(line_count(os.str()) >= 7);
}

TEST_CASE("file errors carry the path") {
  try {
    read_text_file("/nonexistent/anderson/missing.json");
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/anderson/missing.json") != std::string::npos);
  }
  const auto p = scratch("bad");
  write_text_file(p / "bad.json", "{ not json");
  CHECK_THROWS_AS(read_json_file(p / "bad.json"), ConfigError);
  fs::remove_all(p);
}
