#include "anderson/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "anderson/errors.hpp"

namespace anderson {

Distribution Distribution::uniform(double lower, double upper) {
  Distribution d{DistributionKind::Uniform, lower, upper, 1.0, 1.0 / (upper - lower)};
  d.validate();
  return d;
}

Distribution Distribution::holder(double alpha, double lower, double upper) {
  Distribution d{DistributionKind::Holder, lower, upper, alpha, std::pow(upper - lower, -alpha)};
  d.validate();
  return d;
}

void Distribution::validate() const {
  if (!(upper > lower) || !std::isfinite(lower) || !std::isfinite(upper)) {
    throw PreconditionError("distribution support must be a bounded nondegenerate interval");
  }
  if (!(alpha > 0.5 && alpha <= 1.0)) throw PreconditionError("Hölder exponent alpha must lie in (1/2, 1]");
  if (kind == DistributionKind::Uniform && alpha != 1.0) {
    throw PreconditionError("uniform distribution has alpha = 1");
  }
}

double Distribution::quantile(double u) const {
  switch (kind) {
    case DistributionKind::Uniform:
      return lower + diameter() * u;
    case DistributionKind::Holder:
      return lower + diameter() * std::pow(u, 1.0 / alpha);
  }
  throw UnsupportedDistribution("unknown distribution kind");
}

double Distribution::concentration(double t) const {
  if (t <= 0.0) return 0.0;
  return std::min(1.0, std::pow(t / diameter(), alpha));
}

std::string_view to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::Uniform:
      return "uniform";
    case DistributionKind::Holder:
      return "holder";
  }
  return "unknown";
}

DistributionKind parse_distribution_kind(std::string_view name) {
  if (name == "uniform") return DistributionKind::Uniform;
  if (name == "holder") return DistributionKind::Holder;
  throw UnsupportedDistribution("unsupported distribution kind '" + std::string(name) + "'");
}

namespace {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t counter) {
  return mix64(mix64(seed) ^ (counter * 0xd1b54a32d192ed03ULL));
}

double site_uniform(std::uint64_t seed, const Site& site) {
  std::uint64_t h = mix64(seed ^ 0x5851f42d4c957f2dULL);
  for (std::int64_t c : site) h = mix64(h ^ static_cast<std::uint64_t>(c));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double DisorderField::at(const Site& site) const {
  auto i = region.index_of(site);
  if (!i) throw PreconditionError("site outside the disorder field's region");
  return values[static_cast<Eigen::Index>(*i)];
}

DisorderField sample_disorder(const Region& region, const Distribution& distribution, std::uint64_t seed) {
  distribution.validate();
  DisorderField field{region, Eigen::VectorXd(static_cast<Eigen::Index>(region.size())), distribution, seed};
  for (std::size_t i = 0; i < region.size(); ++i) {
    field.values[static_cast<Eigen::Index>(i)] = distribution.quantile(site_uniform(seed, region[i]));
  }
  return field;
}

}  // namespace anderson
