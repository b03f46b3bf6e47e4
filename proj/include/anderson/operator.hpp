#pragma once

#include <cstddef>
#include <string>

#include <Eigen/Core>

#include "anderson/disorder.hpp"
#include "anderson/errors.hpp"
#include "anderson/lattice.hpp"

namespace anderson {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Dense eigensolves are only attempted below this size.
inline constexpr std::size_t kMaxOperatorSites = 10000;

// H = -eps * Laplacian + diag(potential) restricted to `region`, indexed by the
// region's lexicographic site order.
template <typename Scalar>
struct BasicOperator {
  Region region;
  Scalar epsilon{0};
  DenseVector<Scalar> potential;
  DenseMatrix<Scalar> matrix;

  std::size_t size() const noexcept { return region.size(); }
};

using FiniteOperator = BasicOperator<double>;

template <typename Scalar>
BasicOperator<Scalar> build_hamiltonian(const Region& region, const DenseVector<Scalar>& potential,
                                        Scalar epsilon, std::size_t max_sites = kMaxOperatorSites) {
  if (epsilon < Scalar(0)) throw PreconditionError("hopping strength epsilon must be non-negative");
  if (static_cast<std::size_t>(potential.size()) != region.size()) {
    throw PreconditionError("potential size does not match region");
  }
  if (region.size() > max_sites) {
    throw PreconditionError("region has " + std::to_string(region.size()) + " sites, above the dense limit " +
                            std::to_string(max_sites));
  }
  const auto n = static_cast<Eigen::Index>(region.size());
  BasicOperator<Scalar> op{region, epsilon, potential, DenseMatrix<Scalar>::Zero(n, n)};
  op.matrix.diagonal() = potential;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Site& u = region[static_cast<std::size_t>(i)];
    for (int c = 0; c < region.dim(); ++c) {
      Site v = u;
      ++v[c];
      if (auto j = region.index_of(v)) {
        const auto jj = static_cast<Eigen::Index>(*j);
        op.matrix(i, jj) = -epsilon;
        op.matrix(jj, i) = -epsilon;
      }
    }
  }
  return op;
}

template <typename Scalar = double>
BasicOperator<Scalar> build_hamiltonian(const DisorderField& field, Scalar epsilon,
                                        std::size_t max_sites = kMaxOperatorSites) {
  return build_hamiltonian<Scalar>(field.region, field.values.template cast<Scalar>(), epsilon, max_sites);
}

// Principal submatrix on `sub`.
template <typename Scalar>
BasicOperator<Scalar> restrict(const BasicOperator<Scalar>& op, const Region& sub) {
  if (!sub.is_subset_of(op.region)) throw PreconditionError("restrict: subregion not contained in operator region");
  const auto m = static_cast<Eigen::Index>(sub.size());
  std::vector<Eigen::Index> idx(sub.size());
  for (std::size_t i = 0; i < sub.size(); ++i) idx[i] = static_cast<Eigen::Index>(*op.region.index_of(sub[i]));
  BasicOperator<Scalar> out{sub, op.epsilon, DenseVector<Scalar>(m), DenseMatrix<Scalar>(m, m)};
  for (Eigen::Index i = 0; i < m; ++i) {
    out.potential[i] = op.potential[idx[i]];
    for (Eigen::Index j = 0; j < m; ++j) out.matrix(i, j) = op.matrix(idx[i], idx[j]);
  }
  return out;
}

// Gamma over `ambient`: -1 at (u, v) and (v, u) for every boundary pair of `inner`.
template <typename Scalar = double>
DenseMatrix<Scalar> boundary_pairs(const Region& inner, const Region& ambient) {
  const auto n = static_cast<Eigen::Index>(ambient.size());
  DenseMatrix<Scalar> gamma = DenseMatrix<Scalar>::Zero(n, n);
  for (const auto& [u, v] : boundary_sets(inner, ambient).edges) {
    const auto i = static_cast<Eigen::Index>(*ambient.index_of(u));
    const auto j = static_cast<Eigen::Index>(*ambient.index_of(v));
    gamma(i, j) = Scalar(-1);
    gamma(j, i) = Scalar(-1);
  }
  return gamma;
}

// The coupling term eps * Gamma as an operator over `ambient` with zero potential.
template <typename Scalar = double>
BasicOperator<Scalar> boundary_coupling(const Region& inner, const Region& ambient, Scalar epsilon) {
  const auto n = static_cast<Eigen::Index>(ambient.size());
  return BasicOperator<Scalar>{ambient, epsilon, DenseVector<Scalar>::Zero(n),
                               epsilon * boundary_pairs<Scalar>(inner, ambient)};
}

// H_a (+) H_b embedded in the index order of `ambient`.
template <typename Scalar>
DenseMatrix<Scalar> direct_sum(const BasicOperator<Scalar>& a, const BasicOperator<Scalar>& b,
                               const Region& ambient) {
  const auto n = static_cast<Eigen::Index>(ambient.size());
  DenseMatrix<Scalar> out = DenseMatrix<Scalar>::Zero(n, n);
  for (const auto* part : {&a, &b}) {
    std::vector<Eigen::Index> idx(part->size());
    for (std::size_t i = 0; i < part->size(); ++i) {
      auto k = ambient.index_of(part->region[i]);
      if (!k) throw PreconditionError("direct_sum: block region not contained in ambient");
      idx[i] = static_cast<Eigen::Index>(*k);
    }
    for (std::size_t i = 0; i < idx.size(); ++i) {
      for (std::size_t j = 0; j < idx.size(); ++j) {
        out(idx[i], idx[j]) = part->matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  }
  return out;
}

// max |H_Theta - (H_Phi (+) H_{Theta\Phi}) - eps Gamma|, entrywise.
template <typename Scalar>
Scalar decomposition_defect(const BasicOperator<Scalar>& whole, const Region& inner) {
  const Region rest = whole.region.minus(inner);
  const DenseMatrix<Scalar> blocks = direct_sum(restrict(whole, inner), restrict(whole, rest), whole.region);
  const DenseMatrix<Scalar> coupling = boundary_coupling<Scalar>(inner, whole.region, whole.epsilon).matrix;
  const DenseMatrix<Scalar> diff = whole.matrix - blocks - coupling;
  return diff.size() == 0 ? Scalar(0) : diff.cwiseAbs().maxCoeff();
}

template <typename Scalar>
Scalar row_sum_norm(const BasicOperator<Scalar>& op) {
  return op.size() == 0 ? Scalar(0) : op.matrix.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace anderson
