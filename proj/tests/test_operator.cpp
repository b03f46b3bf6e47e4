#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "anderson/disorder.hpp"
#include "anderson/operator.hpp"

using namespace anderson;

namespace {

Region chain(std::int64_t from, std::int64_t to) {
  std::vector<Site> s;
  for (auto x = from; x <= to; ++x) s.push_back(Site{x, 0, 0});
  return Region(1, s);
}

Region random_subset(const Region& r, std::mt19937_64& rng) {
  std::vector<Site> s;
  for (const Site& x : r) {
    if (rng() % 2) s.push_back(x);
  }
  return Region(r.dim(), s);
}

}  // namespace

TEST_CASE("disorder sampling") {
  const double c[] = {0.0};
  const auto box = make_box(c, 10.0);
  const auto f = sample_disorder(box.region, Distribution::uniform(), 42);
  CHECK(f.values.size() == 11);
  CHECK((f.values.array() >= 0.0).all());
  CHECK((f.values.array() <= 1.0).all());
  CHECK(f.values.mean() >= 0.2);
  CHECK(f.values.mean() <= 0.8);

  const auto g = sample_disorder(box.region, Distribution::uniform(), 42);
  CHECK(f.values == g.values);
  CHECK_FALSE(f.values == sample_disorder(box.region, Distribution::uniform(), 43).values);

  // values depend on (seed, site) only, not on the surrounding region
  const auto sub = sample_disorder(chain(2, 4), Distribution::uniform(), 42);
  for (const Site& s : sub.region) CHECK(sub.at(s) == f.at(s));

  const auto u = Distribution::uniform();
  CHECK(u.K == 1.0);
  CHECK(u.alpha == 1.0);
  CHECK(u.concentration(0.3) == doctest::Approx(0.3));
  CHECK_THROWS_AS(parse_distribution_kind("cauchy"), UnsupportedDistribution);
  CHECK_THROWS_AS(Distribution::holder(0.5), PreconditionError);
}

TEST_CASE("holder test law concentration") {
  const auto h = Distribution::holder(0.75);
  CHECK(h.concentration(0.01) == doctest::Approx(std::pow(0.01, 0.75)));
  // empirical mass of [0, t] matches t^alpha, the worst interval
  const double c[] = {0.0};
  const auto f = sample_disorder(make_box(c, 20000.0).region, h, 5);
  const double t = 0.05;
  const double frac = (f.values.array() <= t).cast<double>().mean();
  CHECK(frac == doctest::Approx(std::pow(t, 0.75)).epsilon(0.05));
  CHECK((f.values.array() >= 0.0).all());
  CHECK((f.values.array() <= 1.0).all());
}

TEST_CASE("hamiltonian structure") {
  Eigen::VectorXd v(2);
  v << 0.0, 1.0;
  const auto op = build_hamiltonian(chain(0, 1), v, 0.1);
  Eigen::MatrixXd expect(2, 2);
  expect << 0.0, -0.1, -0.1, 1.0;
  CHECK(op.matrix == expect);

  const auto diag = build_hamiltonian(chain(0, 4), Eigen::VectorXd::LinSpaced(5, 0.0, 1.0).eval(), 0.0);
  CHECK(diag.matrix == Eigen::MatrixXd(diag.potential.asDiagonal()));

  const double c2[] = {0.0, 0.0};
  const auto box = make_box(c2, 2.0);
  REQUIRE(box.region.size() == 9);
  const auto h = build_hamiltonian(sample_disorder(box.region, Distribution::uniform(), 1), 0.25);
  const auto center = *box.region.index_of(Site{0, 0, 0});
  int hops = 0;
  for (Eigen::Index j = 0; j < 9; ++j) hops += h.matrix(static_cast<Eigen::Index>(center), j) == -0.25;
  CHECK(hops == 4);
  CHECK(h.matrix == h.matrix.transpose());
  CHECK_THROWS_AS(build_hamiltonian(chain(0, 1), v, -1.0), PreconditionError);
  CHECK_THROWS_AS(build_hamiltonian(chain(0, 1), v, 0.1, 1), PreconditionError);
}

TEST_CASE("hopping entries follow adjacency exactly") {
  std::mt19937_64 rng(9);
  for (int d = 1; d <= 3; ++d) {
    Point c{};
    const auto box = make_box(c, d, d == 3 ? 3.0 : 6.0);
    const Region r = random_subset(box.region, rng);
    const double eps = 0.37;
    const auto op = build_hamiltonian(sample_disorder(r, Distribution::uniform(), 3), eps);
    for (std::size_t i = 0; i < r.size(); ++i) {
      for (std::size_t j = 0; j < r.size(); ++j) {
        const double e = op.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (i == j) {
          CHECK(e == op.potential[static_cast<Eigen::Index>(i)]);
        } else {
          CHECK(e == (l1_distance(r[i], r[j]) == 1 ? -eps : 0.0));
        }
      }
    }
    const double bound = 2.0 * d * eps + op.potential.cwiseAbs().maxCoeff();
    CHECK(row_sum_norm(op) <= bound);
  }
}

TEST_CASE("restriction") {
  const auto op = build_hamiltonian(sample_disorder(chain(0, 2), Distribution::uniform(), 8), 0.3);
  CHECK(restrict(op, op.region).matrix == op.matrix);
  CHECK(restrict(op, chain(0, 1)).matrix == op.matrix.topLeftCorner(2, 2));
  const auto big = build_hamiltonian(sample_disorder(chain(0, 20), Distribution::uniform(), 8), 0.3);
  CHECK(restrict(restrict(big, chain(3, 15)), chain(5, 9)).matrix == restrict(big, chain(5, 9)).matrix);
  CHECK_THROWS_AS(restrict(op, chain(0, 5)), PreconditionError);
}

TEST_CASE("boundary coupling") {
  const auto g = boundary_coupling(chain(0, 1), chain(0, 2), 1.0);
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(3, 3);
  expect(1, 2) = expect(2, 1) = -1.0;
  CHECK(g.matrix == expect);
  CHECK(boundary_coupling(chain(0, 4), chain(0, 4), 0.5).matrix.isZero(0.0));
  const double c[] = {0.0};
  const auto gg = boundary_pairs(make_box(c, 4.0).region, make_box(c, 8.0).region);
  CHECK((gg.array() == -1.0).count() == 4);
  CHECK(gg == gg.transpose());
}

TEST_CASE("direct sum plus boundary coupling is exact") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ueps(0.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + trial % 2;
    Point c{};
    const auto theta = random_subset(make_box(c, d, d == 1 ? 30.0 : 8.0).region, rng);
    const auto phi = random_subset(theta, rng);
    const double eps = trial % 5 == 0 ? 0.0 : ueps(rng);
    const auto op = build_hamiltonian(sample_disorder(theta, Distribution::uniform(), rng()), eps);
    CHECK(decomposition_defect(op, phi) == 0.0);
  }
}
