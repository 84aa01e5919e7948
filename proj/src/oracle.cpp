#include "locrec/oracle.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "locrec/errors.hpp"

namespace locrec {

namespace {

constexpr double kNegativeP2Tolerance = 1.0e-12;
constexpr int kPowerIterations = 500;
constexpr double kPowerTolerance = 1.0e-10;

Eigen::VectorXd start_vector(Eigen::Index n) {
  // Fixed seed: a generic direction that is not orthogonal to any eigenvector
  // of small structured matrices.
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = u(rng);
  return v.normalized();
}

template <class Apply>
double dominant_eigenvalue(Eigen::Index n, Apply&& apply) {
  Eigen::VectorXd v = start_vector(n);
  double lambda = 0.0;
  for (int it = 0; it < kPowerIterations; ++it) {
    Eigen::VectorXd w = apply(v);
    const double next = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    if (it > 0 && std::abs(next - lambda) <= kPowerTolerance * std::abs(next)) return next;
    lambda = next;
  }
  return lambda;
}

}  // namespace

DenseSystem::DenseSystem(PointSet sites, const SobolevKernelSpec& spec)
    : sites_(std::move(sites)), kernel_(spec) {
  if (sites_.empty()) throw std::invalid_argument("DenseSystem: no sites");
  if (sites_.dim() != spec.d) throw std::invalid_argument("DenseSystem: site dimension mismatch");
  sites_.require_finite();

  const auto n = static_cast<Eigen::Index>(sites_.size());
  gram_.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = kernel_.eval_unchecked(sites_[i].data(), sites_[j].data());
      gram_(i, j) = v;
      gram_(j, i) = v;
    }
  }

  factor_ = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double diag = gram_(j, j);
    for (Eigen::Index k = 0; k < j; ++k) diag -= factor_(j, k) * factor_(j, k);
    if (!(diag > 0.0))
      throw NumericalDegeneracy("DenseSystem: nonpositive pivot " + std::to_string(diag) + " at index " +
                                    std::to_string(j),
                                static_cast<std::size_t>(j));
    const double ljj = std::sqrt(diag);
    factor_(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = gram_(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= factor_(i, k) * factor_(j, k);
      factor_(i, j) = s / ljj;
    }
  }
}

Eigen::VectorXd DenseSystem::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != factor_.rows()) throw std::invalid_argument("DenseSystem::solve: size mismatch");
  const auto L = factor_.triangularView<Eigen::Lower>();
  Eigen::VectorXd y = L.solve(rhs);
  return L.transpose().solve(y);
}

Eigen::VectorXd DenseSystem::kernel_column(std::span<const double> z) const {
  if (z.size() != static_cast<std::size_t>(sites_.dim()))
    throw std::invalid_argument("DenseSystem: evaluation point dimension mismatch");
  Eigen::VectorXd b(static_cast<Eigen::Index>(size()));
  for (std::size_t j = 0; j < size(); ++j) b(static_cast<Eigen::Index>(j)) = kernel_(z, sites_[j]);
  return b;
}

Eigen::VectorXd DenseSystem::lagrange_weights(std::span<const double> z) const {
  return solve(kernel_column(z));
}

double dense_interpolate(const DenseSystem& sys, std::span<const double> fvals, std::span<const double> z) {
  if (fvals.size() != sys.size()) throw std::invalid_argument("dense_interpolate: value count mismatch");
  const Eigen::VectorXd f = Eigen::Map<const Eigen::VectorXd>(fvals.data(), static_cast<Eigen::Index>(fvals.size()));
  const Eigen::VectorXd coeffs = sys.solve(f);
  return coeffs.dot(sys.kernel_column(z));
}

double power_function_direct(const DenseSystem& sys, std::span<const double> z) {
  const Eigen::VectorXd b = sys.kernel_column(z);
  const Eigen::VectorXd u = sys.solve(b);
  const double kzz = sys.kernel()(z, z);
  const double p2 = kzz - 2.0 * u.dot(b) + u.dot(sys.gram() * u);
  if (p2 < 0.0) {
    if (p2 < -kNegativeP2Tolerance)
      throw NumericalDegeneracy("power_function_direct: negative squared Power Function " + std::to_string(p2), 0);
    return 0.0;
  }
  return p2;
}

double power_function_direct(const PointSet& sites, const SobolevKernelSpec& spec, std::span<const double> z) {
  if (sites.empty()) return SobolevKernel(spec)(z, z);
  return power_function_direct(DenseSystem(sites, spec), z);
}

double condition_estimate(const DenseSystem& sys) {
  const auto n = static_cast<Eigen::Index>(sys.size());
  const double lambda_max = dominant_eigenvalue(n, [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return sys.gram() * v;
  });
  const double inv_lambda_min = dominant_eigenvalue(n, [&](const Eigen::VectorXd& v) { return sys.solve(v); });
  return lambda_max * inv_lambda_min;
}

}  // namespace locrec
