#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>

#include "anderson/harness.hpp"

using namespace anderson;

TEST_CASE("predicate names") {
  for (auto p : {Predicate::PL, Predicate::ML, Predicate::SEL, Predicate::LOC, Predicate::PolySpacing,
                 Predicate::ExpSpacing}) {
    CHECK(parse_predicate(to_string(p)) == p);
  }
  CHECK_THROWS_AS(parse_predicate("gap"), ConfigError);
}

TEST_CASE("clopper-pearson interval") {
  const auto one = clopper_pearson(1, 1);
  CHECK(one.low == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(one.high == 1.0);
  const auto zero = clopper_pearson(0, 1);
  CHECK(zero.low == 0.0);
  CHECK(zero.high == doctest::Approx(0.975).epsilon(1e-12));
  const auto mid = clopper_pearson(50, 100);
  CHECK(mid.low == doctest::Approx(0.39832).epsilon(1e-4));
  CHECK(mid.high == doctest::Approx(0.60168).epsilon(1e-4));
  const auto all = clopper_pearson(500, 500);
  CHECK(all.low == doctest::Approx(std::pow(0.025, 1.0 / 500.0)).epsilon(1e-12));
}

TEST_CASE("parallel_for visits each index once") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(1000, 7, [&](std::int64_t i) { ++hits[static_cast<std::size_t>(i)]; });
  for (auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::int64_t i) { if (i == 5) throw ConfigError("x"); }), ConfigError);
}

TEST_CASE("separated potential") {
  const auto v = separated_potential(50, 0.1, 3);
  std::vector<double> s(v.data(), v.data() + v.size());
  std::sort(s.begin(), s.end());
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == 0.1 * static_cast<double>(i));
  CHECK(separated_potential(50, 0.1, 3) == v);
  CHECK(separated_potential(50, 0.1, 4) != v);
}

TEST_CASE("config validation") {
  ExperimentConfig c;
  c.n = 0;
  CHECK_THROWS_AS(run_trials(c), ConfigError);
  c.n = 1;
  c.d = 4;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.d = 1;
  c.rate = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.predicate = Predicate::PolySpacing;
  CHECK_NOTHROW(c.validate());
  c.offsets.clear();
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_THROWS_AS(verify_init_step(1, 100.0, 3.0, 0, 1), ConfigError);
}

TEST_CASE("zero hopping frequency equals the brute-force gap frequency") {
  ExperimentConfig c;
  c.L = 40.0;
  c.epsilon = 0.0;
  c.seed = 99;
  c.n = 100;
  c.rate = 2.0;
  c.criteria = BoxCriteria{2.0, 0.5, 0.9};
  c.threads = 4;
  const auto rec = run_trials(c);
  const auto box = make_box(Point{}, 1, c.L);
  std::int64_t expected = 0;
  for (std::int64_t i = 0; i < c.n; ++i) {
    auto w = sample_disorder(box.region, c.distribution, mix_seed(c.seed, static_cast<std::uint64_t>(i))).values;
    std::sort(w.begin(), w.end());
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 1; j < w.size(); ++j) gap = std::min(gap, w[j] - w[j - 1]);
    if (gap > 0.0 && gap >= std::pow(c.L, -c.criteria.q)) ++expected;
    CHECK(rec.outcomes[static_cast<std::size_t>(i)].verdicts[0] == (gap >= std::pow(c.L, -c.criteria.q)));
  }
  CHECK(rec.successes == expected);
  CHECK(rec.frequency == static_cast<double>(expected) / 100.0);
  CHECK(expected > 0);
  CHECK(expected < 100);
  CHECK(rec.ci_low <= rec.frequency);
  CHECK(rec.frequency <= rec.ci_high);
}

TEST_CASE("records are independent of the thread count") {
  ExperimentConfig c;
  c.L = 30.0;
  c.epsilon = 1e-3;
  c.seed = 5;
  c.n = 40;
  c.rate = 1.0;
  c.offsets = {Point{}, Point{3.0}};
  c.threads = 1;
  const auto a = run_trials(c);
  c.threads = 8;
  const auto b = run_trials(c);
  CHECK(same_results(a, b));
  CHECK(a.offset_frequencies.size() == 2);
  CHECK(a.min_frequency == std::min(a.offset_frequencies[0], a.offset_frequencies[1]));
  c.seed = 6;
  CHECK_FALSE(same_results(a, run_trials(c)));
}

TEST_CASE("single realization interval") {
  ExperimentConfig c;
  c.L = 20.0;
  c.n = 1;
  c.epsilon = 0.0;
  c.predicate = Predicate::PolySpacing;
  c.criteria = BoxCriteria{1.0, 0.5, 0.9};
  const auto rec = run_trials(c);
  CHECK(rec.evaluated == 1);
  if (rec.successes == 1) {
    CHECK(rec.ci_high == 1.0);
    CHECK(rec.ci_low == doctest::Approx(0.025));
  } else {
    CHECK(rec.ci_low == 0.0);
  }
}

TEST_CASE("separated potentials give deterministic localization") {
  const auto rep = verify_init_step(1, 100.0, 3.0, 30, 7, InitStepOptions{true, 0, {Point{}}});
  CHECK(rep.record.frequency == 1.0);
  CHECK(rep.pass);
  CHECK(rep.epsilon == 0.25e-6);
  CHECK(rep.bound.prob_lower == doctest::Approx(0.979598).epsilon(1e-13));
}

TEST_CASE("separation audit") {
  SUBCASE("two sites") {
    const double c[] = {0.5};
    const auto box = make_box(c, 1.0);
    const auto a = audit_separated_potential(box.region, Eigen::Vector2d(0.0, 1.0), 0.1, 1.0);
    CHECK(a.ok());
    CHECK(a.gap_checks == 2);
    CHECK(a.decay_checks == 4);
    CHECK(a.min_gap_margin == doctest::Approx(1.0198039027185570 - 0.6).epsilon(1e-12));
  }
  SUBCASE("zero hopping") {
    const auto box = make_box(Point{}, 1, 10.0);
    const auto a = audit_separated_potential(box.region, separated_potential(11, 0.1, 1), 0.0, 0.1);
    CHECK(a.ok());
    CHECK(a.max_decay_ratio <= 1.0);
  }
  SUBCASE("21-site chain") {
    const double c[] = {10.0};
    const auto box = make_box(c, 20.0);
    REQUIRE(box.region.size() == 21);
    Eigen::VectorXd v(21);
    for (int x = 0; x < 21; ++x) v[x] = x / 21.0;
    const double eta = 1.0 / 21.0;
    const auto a = audit_separated_potential(box.region, v, eta / 8.0, eta);
    CHECK(a.ok());
    CHECK(a.gap_checks == 420);
    CHECK(a.decay_checks == 441);
    CHECK_FALSE(a.degenerate_labeling);
  }
  SUBCASE("2-d box") {
    const double c[] = {0.0, 0.0};
    const auto box = make_box(c, 4.0);
    const double eta = 0.04;
    const auto a = audit_separated_potential(box.region, separated_potential(box.region.size(), eta, 9), eta / 16.0, eta);
    CHECK(a.ok());
  }
  SUBCASE("hopping above the separation is rejected") {
    const auto box = make_box(Point{}, 1, 4.0);
    CHECK_THROWS_AS(audit_separated_potential(box.region, separated_potential(5, 0.1, 1), 0.1, 0.1), PreconditionError);
  }
}

TEST_CASE("localized residual audit") {
  SUBCASE("zero hopping") {
    const auto a = audit_localized_residual(1, 20.0, 60.0, 0.0, 2.0, 3, 1, 3.0, 2);
    CHECK(a.ok());
    CHECK(a.max_residual == 0.0);
  }
  SUBCASE("weak hopping") {
    const auto a = audit_localized_residual(1, 40.0, 120.0, 1e-6, 2.0, 20, 11, 3.0, 0);
    CHECK(a.ok());
    CHECK(a.checked > 0);
    CHECK(a.passed == a.checked);
    CHECK(a.injective);
    CHECK(a.injection_distances);
  }
}
