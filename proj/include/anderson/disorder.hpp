#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "anderson/lattice.hpp"

namespace anderson {

enum class DistributionKind { Uniform, Holder };

// Single-site law of the potential. `Holder` draws lower + (upper - lower) U^(1/alpha),
// whose concentration function is ((t / (upper - lower))^alpha capped at 1.
struct Distribution {
  DistributionKind kind = DistributionKind::Uniform;
  double lower = 0.0;
  double upper = 1.0;
  double alpha = 1.0;
  double K = 1.0;

  static Distribution uniform(double lower = 0.0, double upper = 1.0);
  static Distribution holder(double alpha, double lower = 0.0, double upper = 1.0);

  double diameter() const { return upper - lower; }
  // Maps u in [0, 1) to a draw.
  double quantile(double u) const;
  // S_mu(t) = sup_a mu([a, a + t])
  double concentration(double t) const;
  void validate() const;
};

std::string_view to_string(DistributionKind kind);
DistributionKind parse_distribution_kind(std::string_view name);

// Counter-based stream: every value is a pure function of (seed, counter).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t counter);
double site_uniform(std::uint64_t seed, const Site& site);

struct DisorderField {
  Region region;
  Eigen::VectorXd values;
  Distribution distribution;
  std::uint64_t seed = 0;

  double at(const Site& site) const;
};

DisorderField sample_disorder(const Region& region, const Distribution& distribution, std::uint64_t seed);

}  // namespace anderson
