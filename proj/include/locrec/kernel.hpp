#pragma once

#include <span>

namespace locrec {

/// Parameters of the Matern kernel reproducing W_2^m(R^d) at scale c.
///
/// The kernel is isotropic: K(x, y) = Phi_nu(|x - y|_2 / c) with
/// nu = m - d/2 and the unit-peak profile
///   Phi_nu(r) = 2^(1-nu) / Gamma(nu) * r^nu * K_nu(r),  Phi_nu(0) = 1.
struct SobolevKernelSpec {
  double m = 3.0;
  int d = 2;
  double c = 1.0;

  /// Order of the Matern profile, m - d/2.
  [[nodiscard]] double nu() const noexcept { return m - 0.5 * d; }

  /// Throws std::invalid_argument unless d >= 1, m > d/2 and c > 0.
  void validate() const;
};

/// Modified Bessel function of the second kind K_nu(t), nu >= 0, t > 0.
///
/// Thin wrapper over std::cyl_bessel_k. Throws std::domain_error for t <= 0
/// or a negative order.
[[nodiscard]] double bessel_k(double nu, double t);

/// K_{n+1/2}(t) from the terminating closed form. Used as a cross-check
/// of bessel_k for half-integer orders.
[[nodiscard]] double bessel_k_half_integer(int n, double t);

/// Unit-peak Matern profile evaluated on the scaled distance r >= 0.
[[nodiscard]] double matern_profile(double nu, double r);

/// Closed-form unit-peak profile for nu = n + 1/2:
/// e^{-r} * n!/(2n)! * sum_k (n+k)!/(k!(n-k)!) (2r)^{n-k}.
[[nodiscard]] double matern_profile_half_integer(int n, double r);

/// Kernel evaluator with the normalization constant precomputed.
/// Immutable, so a single instance can be shared between threads.
class SobolevKernel {
 public:
  explicit SobolevKernel(const SobolevKernelSpec& spec);

  [[nodiscard]] const SobolevKernelSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] int dim() const noexcept { return spec_.d; }

  /// Profile on an unscaled distance (divides by c).
  [[nodiscard]] double radial(double distance) const;

  /// K(x, y). Both points must have spec().d finite coordinates.
  [[nodiscard]] double operator()(std::span<const double> x, std::span<const double> y) const;

  /// Same as operator() without dimension or finiteness checks.
  [[nodiscard]] double eval_unchecked(const double* x, const double* y) const;

 private:
  SobolevKernelSpec spec_;
  double nu_;
  double norm_;  // 2^(1-nu) / Gamma(nu)
};

/// K(x, y) for the given spec. Convenience wrapper around SobolevKernel.
[[nodiscard]] double kernel_eval(const SobolevKernelSpec& spec, std::span<const double> x,
                                 std::span<const double> y);

}  // namespace locrec
