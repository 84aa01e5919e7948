#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "locrec/geometry.hpp"
#include "locrec/kernel.hpp"

namespace locrec {

/// Full kernel interpolation on a fixed site set, via an unpivoted Cholesky
/// factorization of the Gram matrix. No regularization is applied; a
/// nonpositive pivot makes construction throw NumericalDegeneracy carrying
/// the pivot index.
class DenseSystem {
 public:
  DenseSystem(PointSet sites, const SobolevKernelSpec& spec);

  [[nodiscard]] const PointSet& sites() const noexcept { return sites_; }
  [[nodiscard]] std::size_t size() const noexcept { return sites_.size(); }
  [[nodiscard]] const SobolevKernel& kernel() const noexcept { return kernel_; }
  [[nodiscard]] const Eigen::MatrixXd& gram() const noexcept { return gram_; }
  /// Lower-triangular L with gram = L L^T.
  [[nodiscard]] const Eigen::MatrixXd& factor() const noexcept { return factor_; }

  /// gram^{-1} rhs.
  [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  /// (K(z, x_j))_j.
  [[nodiscard]] Eigen::VectorXd kernel_column(std::span<const double> z) const;

  /// Interpolatory weights u(z) = gram^{-1} (K(z, x_j))_j.
  [[nodiscard]] Eigen::VectorXd lagrange_weights(std::span<const double> z) const;

 private:
  PointSet sites_;
  SobolevKernel kernel_;
  Eigen::MatrixXd gram_;
  Eigen::MatrixXd factor_;
};

/// Global interpolant s_f(z) = sum_j u_j K(z, x_j) with gram u = fvals.
[[nodiscard]] double dense_interpolate(const DenseSystem& sys, std::span<const double> fvals,
                                       std::span<const double> z);

/// P^2(z) from the quadratic form K(z,z) - 2 u^T b + u^T G u with the
/// interpolatory weights u. Tiny negatives (>= -1e-12) are clamped to zero.
[[nodiscard]] double power_function_direct(const DenseSystem& sys, std::span<const double> z);

/// Same on an arbitrary site set; an empty set gives K(z, z).
[[nodiscard]] double power_function_direct(const PointSet& sites, const SobolevKernelSpec& spec,
                                           std::span<const double> z);

/// 2-norm condition estimate lambda_max / lambda_min of the Gram matrix:
/// power iteration on gram and inverse iteration through the factor.
[[nodiscard]] double condition_estimate(const DenseSystem& sys);

}  // namespace locrec
