#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "anderson/errors.hpp"
#include "anderson/parameters.hpp"

using namespace anderson;

namespace {

std::string infeasible_name(double theta, double xi, double alpha = 1.0, int d = 1) {
  try {
    solve_parameters(theta, xi, alpha, d);
  } catch (const InfeasibleParameters& e) {
    return e.inequality();
  }
  return {};
}

const InequalityCheck& find(const std::vector<InequalityCheck>& cs, const std::string& name) {
  auto it = std::find_if(cs.begin(), cs.end(), [&](const InequalityCheck& c) { return c.name == name; });
  REQUIRE(it != cs.end());
  return *it;
}

}  // namespace

TEST_CASE("golden parameter set") {
  const auto ps = solve_parameters(12.0, 0.3);
  // values from a 50-digit evaluation of the same selection rule
  CHECK(ps.q == 3.375);
  CHECK(ps.p == 0.1875);
  CHECK(ps.gamma1 == doctest::Approx(1.0405405405405405).epsilon(1e-15));
  CHECK(ps.gamma == doctest::Approx(1.2469007910928608).epsilon(1e-15));
  CHECK(ps.zeta == doctest::Approx(0.57828179114326864).epsilon(1e-15));
  CHECK(ps.beta == doctest::Approx(0.69013510743813667).epsilon(1e-15));
  CHECK(ps.tau == doctest::Approx(0.99025974025974026).epsilon(1e-15));
  CHECK(ps.s == doctest::Approx(0.93026500571278454).epsilon(1e-15));
  CHECK(ps.tau_tilde == doctest::Approx(0.99512987012987013).epsilon(1e-15));
  CHECK(ps.zeta_tilde == doctest::Approx(0.5 * (ps.zeta + ps.beta)).epsilon(1e-15));
  const auto checks = validate(ps);
  CHECK(checks.size() >= 40);
  CHECK(all_pass(checks));
  CHECK(solve_parameters(12.0, 0.3) == ps);
}

TEST_CASE("feasible region sweep") {
  for (int d = 1; d <= 3; ++d) {
    for (double alpha : {0.6, 0.8, 1.0}) {
      const double t0 = theta_threshold(alpha, d);
      for (double dt : {0.01, 0.5, 3.0, 20.0}) {
        for (double xi : {1e-3, 0.1, 0.3, 0.7, 0.95}) {
          const auto ps = solve_parameters(t0 + dt, xi, alpha, d);
          const auto checks = validate(ps);
          for (const auto& c : checks) CHECK_MESSAGE(c.pass, c.name, " d=", d, " alpha=", alpha, " xi=", xi);
        }
      }
    }
  }
}

TEST_CASE("infeasible inputs name the inequality") {
  CHECK(theta_threshold(1.0, 1) == 10.5);
  CHECK(infeasible_name(10.0, 0.3) == "θ > (6/(2α−1)+9/2)d");
  CHECK(infeasible_name(10.5, 0.3) == "θ > (6/(2α−1)+9/2)d");
  CHECK(infeasible_name(12.0, 1.0 - 1e-11) == "γ < √(ζ/ξ)");
  CHECK(infeasible_name(12.0, 0.0) == "0 < ξ");
  CHECK(infeasible_name(12.0, 1.0) == "ξ < 1");
  CHECK(infeasible_name(12.0, 0.3, 0.5) == "1/2 < α");
  CHECK_THROWS_AS(solve_parameters(12.0, 0.3, 1.0, 4), PreconditionError);
}

TEST_CASE("hand-set values are reported") {
  auto ps = solve_parameters(12.0, 0.3);
  ps.gamma1 = 1.04;
  ps.tau = 0.5;
  ps.refresh_derived();
  const auto checks = validate(ps);
  CHECK_FALSE(all_pass(checks));
  const auto& c = find(checks, "(1+γ₁)/(2γ₁) < τ");
  CHECK_FALSE(c.pass);
  CHECK(c.lhs == doctest::Approx(0.98076923076923).epsilon(1e-12));
  CHECK(c.rhs == 0.5);
  const auto& pq = find(validate(solve_parameters(12.0, 0.3)), "p < (2α−1)q − 3d");
  CHECK(pq.pass);
  CHECK(pq.margin() == doctest::Approx(0.1875));
}

TEST_CASE("strict margin") {
  CHECK_FALSE(check_less("x", 1.0, 1.0).pass);
  CHECK(check_less("x", 1.0, 1.0, false).pass);
  CHECK_FALSE(check_less("x", 1.0, 1.0 + 1e-13).pass);
  CHECK(check_less("x", 1.0, 1.0 + 1e-11).pass);
  CHECK_FALSE(check_less("x", 0.0, std::nan("")).pass);
}

TEST_CASE("scale thresholds") {
  const auto ps = solve_parameters(12.0, 0.3);
  const auto t200 = scale_thresholds(200.0, ps);
  CHECK(t200.l_prime == 10);
  CHECK(t200.l_tau_tilde == 194);
  CHECK_FALSE(t200.below_200);
  const auto t100 = scale_thresholds(100.0, 0.99);
  CHECK(t100.l_tau == 95);
  CHECK(t100.l_prime == 5);
  CHECK(t100.below_200);
  CHECK(floor_power(1000.0, 1.0 / 3.0) == 9);  // 1000^(1/3) rounds just below 10
  CHECK_THROWS_AS(scale_thresholds(0.0, 0.5), PreconditionError);
}
