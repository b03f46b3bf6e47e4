#include "anderson/spectral.hpp"

#include <algorithm>
#include <limits>

namespace anderson {

double spectral_tolerance(const FiniteOperator& op) {
  const double n = static_cast<double>(std::max<std::size_t>(op.size(), 1));
  return 8.0 * n * std::numeric_limits<double>::epsilon() * std::max(1.0, row_sum_norm(op));
}

ResidualReport spectral_residual(const FiniteOperator& ambient, std::span<const double> spectrum,
                                 const Eigen::VectorXd& phi, double lambda) {
  if (static_cast<std::size_t>(phi.size()) != ambient.size()) {
    throw PreconditionError("spectral_residual: vector is not indexed by the ambient region");
  }
  if (std::abs(phi.norm() - 1.0) > 1e-10) throw PreconditionError("spectral_residual: vector is not normalized");
  ResidualReport r;
  r.residual = (ambient.matrix * phi - lambda * phi).norm();
  r.dist_to_spectrum = std::numeric_limits<double>::infinity();
  for (double mu : spectrum) r.dist_to_spectrum = std::min(r.dist_to_spectrum, std::abs(mu - lambda));
  return r;
}

ResidualReport spectral_residual(const FiniteOperator& ambient, const Eigen::VectorXd& phi, double lambda) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(ambient.matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw SolverFailure("spectral_residual: eigenvalue solve did not converge");
  const Eigen::VectorXd& ev = solver.eigenvalues();
  return spectral_residual(ambient, std::span<const double>(ev.data(), static_cast<std::size_t>(ev.size())), phi,
                           lambda);
}

Eigen::VectorXd extend_by_zero(const Eigen::VectorXd& phi, const Region& from, const Region& to) {
  if (!from.is_subset_of(to)) throw PreconditionError("extend_by_zero: source region not contained in target");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(to.size()));
  for (std::size_t i = 0; i < from.size(); ++i) {
    out[static_cast<Eigen::Index>(*to.index_of(from[i]))] = phi[static_cast<Eigen::Index>(i)];
  }
  return out;
}

InjectionAudit nearest_eigenvalue_injection(const Eigensystem& inner, std::span<const std::size_t> eigen_of_site,
                                            const Region& interior_sites, const FiniteOperator& ambient_op,
                                            const Eigensystem& ambient, double gap_threshold) {
  if (eigen_of_site.size() != inner.size()) throw PreconditionError("injection audit: labeling size mismatch");
  InjectionAudit audit;
  audit.ambient_min_gap = min_gap(ambient.eigenvalues);
  audit.ambient_spacing_ok = audit.ambient_min_gap > 0.0 && audit.ambient_min_gap >= gap_threshold;
  const std::span<const double> spectrum(ambient.eigenvalues.data(), ambient.size());
  const double tol = spectral_tolerance(ambient_op);

  std::vector<char> used(ambient.size(), 0);
  for (const Site& x : interior_sites) {
    auto site_index = inner.region.index_of(x);
    if (!site_index) continue;
    const std::size_t j = eigen_of_site[*site_index];
    InjectionEntry e;
    e.site = x;
    e.inner_eigenvalue = inner.eigenvalue(j);
    const auto it = std::lower_bound(spectrum.begin(), spectrum.end(), e.inner_eigenvalue);
    std::size_t best = it == spectrum.end() ? spectrum.size() - 1 : static_cast<std::size_t>(it - spectrum.begin());
    if (best > 0 && std::abs(spectrum[best - 1] - e.inner_eigenvalue) <= std::abs(spectrum[best] - e.inner_eigenvalue)) {
      --best;
    }
    e.ambient_index = best;
    e.ambient_eigenvalue = spectrum[best];
    e.distance = std::abs(e.ambient_eigenvalue - e.inner_eigenvalue);
    const Eigen::VectorXd phi = extend_by_zero(Eigen::VectorXd(inner.vector(j)), inner.region, ambient_op.region);
    e.residual = spectral_residual(ambient_op, spectrum, phi, e.inner_eigenvalue).residual;
    e.within_residual = e.distance <= e.residual + tol;
    audit.distances_ok = audit.distances_ok && e.within_residual;
    if (used[best]) audit.injective = false;
    used[best] = 1;
    audit.entries.push_back(e);
  }
  return audit;
}

}  // namespace anderson
