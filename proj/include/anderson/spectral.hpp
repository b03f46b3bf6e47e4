#pragma once

#include <cmath>
#include <cstddef>
#include <algorithm>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "anderson/operator.hpp"

namespace anderson {

// Ascending eigenvalues with orthonormal eigenvectors as columns, both over
// the operator region's index order.
template <typename Scalar>
struct BasicEigensystem {
  Region region;
  DenseVector<Scalar> eigenvalues;
  DenseMatrix<Scalar> vectors;

  std::size_t size() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }
  auto vector(std::size_t j) const { return vectors.col(static_cast<Eigen::Index>(j)); }
  Scalar eigenvalue(std::size_t j) const { return eigenvalues[static_cast<Eigen::Index>(j)]; }
};

using Eigensystem = BasicEigensystem<double>;

inline constexpr double kEigenTolerance = 1e-10;

template <typename Scalar>
struct EigensystemQuality {
  Scalar residual{0};        // max_j |H phi_j - lambda_j phi_j|_2 / |H|_F
  Scalar orthogonality{0};   // max_ij |<phi_i, phi_j> - delta_ij|
  Scalar completeness{0};    // max_y |sum_j phi_j(y)^2 - 1|
  Scalar reconstruction{0};  // |sum_j lambda_j phi_j phi_j^T - H|_F / |H|_F
};

template <typename Scalar>
EigensystemQuality<Scalar> measure_quality(const BasicOperator<Scalar>& op, const BasicEigensystem<Scalar>& es) {
  EigensystemQuality<Scalar> q;
  if (es.size() == 0) return q;
  using std::max;
  const Scalar frob = max(op.matrix.norm(), std::numeric_limits<Scalar>::min());
  const DenseMatrix<Scalar> r = op.matrix * es.vectors - es.vectors * es.eigenvalues.asDiagonal();
  q.residual = r.colwise().norm().maxCoeff() / frob;
  const auto n = es.vectors.cols();
  q.orthogonality = (es.vectors.transpose() * es.vectors - DenseMatrix<Scalar>::Identity(n, n)).cwiseAbs().maxCoeff();
  q.completeness = (es.vectors.rowwise().squaredNorm().array() - Scalar(1)).abs().maxCoeff();
  q.reconstruction =
      (es.vectors * es.eigenvalues.asDiagonal() * es.vectors.transpose() - op.matrix).norm() / frob;
  return q;
}

// Largest-magnitude entry of each column made positive; ties go to the lowest index.
template <typename Scalar>
void normalize_signs(DenseMatrix<Scalar>& vectors) {
  using std::abs;
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < vectors.rows(); ++i) {
      if (abs(vectors(i, j)) > abs(vectors(best, j))) best = i;
    }
    if (vectors.rows() > 0 && vectors(best, j) < Scalar(0)) vectors.col(j) *= Scalar(-1);
  }
}

struct EigensolverOptions {
  bool verify = true;
  double tolerance = kEigenTolerance;
};

template <typename Scalar>
BasicEigensystem<Scalar> eigensystem(const BasicOperator<Scalar>& op, EigensolverOptions options = {}) {
  BasicEigensystem<Scalar> es{op.region, {}, {}};
  if (op.size() == 0) return es;
  const auto n = static_cast<Eigen::Index>(op.size());
  if (op.matrix.isDiagonal(Scalar(0))) {
    // Exact: eigenvalues are the sorted diagonal, eigenvectors delta functions.
    const auto diag = op.matrix.diagonal();
    if (!diag.allFinite()) throw SolverFailure("operator has non-finite diagonal entries");
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return diag[a] < diag[b]; });
    es.eigenvalues.resize(n);
    es.vectors = DenseMatrix<Scalar>::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      es.eigenvalues[j] = diag[order[static_cast<std::size_t>(j)]];
      es.vectors(order[static_cast<std::size_t>(j)], j) = Scalar(1);
    }
    return es;
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> solver(op.matrix, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw SolverFailure("symmetric eigensolver did not converge (n=" + std::to_string(op.size()) +
                        ", info=" + std::to_string(static_cast<int>(solver.info())) + ", max sweeps per eigenvalue=" +
                        std::to_string(Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>>::m_maxIterations) + ")");
  }
  es.eigenvalues = solver.eigenvalues();
  es.vectors = solver.eigenvectors();
  normalize_signs(es.vectors);
  if (options.verify) {
    const auto q = measure_quality(op, es);
    const auto tol = static_cast<Scalar>(options.tolerance);
    if (!(q.residual <= tol && q.orthogonality <= tol && q.completeness <= tol)) {
      throw SolverFailure("eigensystem failed verification (n=" + std::to_string(op.size()) +
                          ", residual=" + std::to_string(static_cast<double>(q.residual)) +
                          ", orthogonality=" + std::to_string(static_cast<double>(q.orthogonality)) + ")");
    }
  }
  return es;
}

// Smallest consecutive gap of ascending values; +inf with fewer than two.
template <typename Derived>
auto min_gap(const Eigen::MatrixBase<Derived>& sorted) {
  using Scalar = typename Derived::Scalar;
  Scalar gap = std::numeric_limits<Scalar>::infinity();
  for (Eigen::Index i = 1; i < sorted.size(); ++i) gap = std::min<Scalar>(gap, sorted[i] - sorted[i - 1]);
  return gap;
}

// Simple spectrum with all gaps >= R^-q.
template <typename Scalar>
bool poly_level_spacing(const BasicEigensystem<Scalar>& es, double R, double q) {
  const auto gap = min_gap(es.eigenvalues);
  return gap > Scalar(0) && gap >= static_cast<Scalar>(std::pow(R, -q));
}

// Simple spectrum with all gaps >= exp(-R^beta).
template <typename Scalar>
bool exp_level_spacing(const BasicEigensystem<Scalar>& es, double R, double beta) {
  const auto gap = min_gap(es.eigenvalues);
  return gap > Scalar(0) && gap >= static_cast<Scalar>(std::exp(-std::pow(R, beta)));
}

// Slack for comparing a computed spectrum with an exact inequality.
double spectral_tolerance(const FiniteOperator& op);

struct ResidualReport {
  double residual = 0.0;          // |(H - lambda) phi|
  double dist_to_spectrum = 0.0;  // dist(lambda, sigma(H))
};

// `phi` is indexed by the ambient region; `spectrum` holds its eigenvalues.
ResidualReport spectral_residual(const FiniteOperator& ambient, std::span<const double> spectrum,
                                 const Eigen::VectorXd& phi, double lambda);
ResidualReport spectral_residual(const FiniteOperator& ambient, const Eigen::VectorXd& phi, double lambda);

// Extends a function on `from` by zero to `to`.
Eigen::VectorXd extend_by_zero(const Eigen::VectorXd& phi, const Region& from, const Region& to);

struct InjectionEntry {
  Site site{};
  double inner_eigenvalue = 0.0;
  std::size_t ambient_index = 0;
  double ambient_eigenvalue = 0.0;
  double distance = 0.0;
  double residual = 0.0;
  bool within_residual = false;
};

struct InjectionAudit {
  std::vector<InjectionEntry> entries;
  bool injective = true;
  bool distances_ok = true;
  bool ambient_spacing_ok = true;
  double ambient_min_gap = 0.0;

  bool ok() const { return injective && distances_ok; }
};

// Sends each eigenvalue labeled by a site of `interior_sites` to its nearest
// ambient eigenvalue and checks that the assignment is one-to-one and within
// the residual of the inner eigenvector.
InjectionAudit nearest_eigenvalue_injection(const Eigensystem& inner, std::span<const std::size_t> eigen_of_site,
                                            const Region& interior_sites, const FiniteOperator& ambient_op,
                                            const Eigensystem& ambient, double gap_threshold);

}  // namespace anderson
