#include "locrec/kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace locrec {

namespace {

// Below this scaled distance the profile is returned as its limit 1.
constexpr double kZeroRadius = 1.0e-8;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

void SobolevKernelSpec::validate() const {
  if (d < 1) throw std::invalid_argument("kernel: dimension d must be >= 1");
  if (!std::isfinite(m) || !(nu() > 0.0))
    throw std::invalid_argument("kernel: smoothness m must exceed d/2 (m=" + std::to_string(m) +
                                ", d=" + std::to_string(d) + ")");
  if (!std::isfinite(c) || !(c > 0.0)) throw std::invalid_argument("kernel: scale c must be > 0");
}

double bessel_k(double nu, double t) {
  if (!(t > 0.0)) throw std::domain_error("bessel_k: argument must be > 0");
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw std::domain_error("bessel_k: order must be >= 0");
  if (std::isinf(t)) return 0.0;
  return std::cyl_bessel_k(nu, t);
}

double bessel_k_half_integer(int n, double t) {
  if (n < 0) throw std::domain_error("bessel_k_half_integer: n must be >= 0");
  if (!(t > 0.0)) throw std::domain_error("bessel_k_half_integer: argument must be > 0");
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    sum += factorial(n + k) / (factorial(k) * factorial(n - k)) * std::pow(2.0 * t, -k);
  }
  return std::sqrt(std::numbers::pi / (2.0 * t)) * std::exp(-t) * sum;
}

double matern_profile(double nu, double r) {
  if (!(nu > 0.0)) throw std::invalid_argument("matern_profile: order must be > 0");
  if (!(r >= 0.0)) throw std::invalid_argument("matern_profile: radius must be >= 0");
  if (r < kZeroRadius) return 1.0;
  const double norm = std::pow(2.0, 1.0 - nu) / std::tgamma(nu);
  return norm * std::pow(r, nu) * bessel_k(nu, r);
}

double matern_profile_half_integer(int n, double r) {
  if (n < 0) throw std::invalid_argument("matern_profile_half_integer: n must be >= 0");
  if (!(r >= 0.0)) throw std::invalid_argument("matern_profile_half_integer: radius must be >= 0");
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    sum += factorial(n + k) / (factorial(k) * factorial(n - k)) * std::pow(2.0 * r, n - k);
  }
  return std::exp(-r) * factorial(n) / factorial(2 * n) * sum;
}

SobolevKernel::SobolevKernel(const SobolevKernelSpec& spec) : spec_(spec) {
  spec_.validate();
  nu_ = spec_.nu();
  norm_ = std::pow(2.0, 1.0 - nu_) / std::tgamma(nu_);
}

double SobolevKernel::radial(double distance) const {
  const double r = distance / spec_.c;
  if (r < kZeroRadius) return 1.0;
  return norm_ * std::pow(r, nu_) * bessel_k(nu_, r);
}

double SobolevKernel::eval_unchecked(const double* x, const double* y) const {
  double s = 0.0;
  for (int i = 0; i < spec_.d; ++i) {
    const double diff = x[i] - y[i];
    s += diff * diff;
  }
  return radial(std::sqrt(s));
}

double SobolevKernel::operator()(std::span<const double> x, std::span<const double> y) const {
  const auto d = static_cast<std::size_t>(spec_.d);
  if (x.size() != d || y.size() != d)
    throw std::invalid_argument("kernel: point dimension does not match spec.d");
  for (std::size_t i = 0; i < d; ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw std::invalid_argument("kernel: non-finite coordinate");
  }
  return eval_unchecked(x.data(), y.data());
}

double kernel_eval(const SobolevKernelSpec& spec, std::span<const double> x,
                   std::span<const double> y) {
  return SobolevKernel(spec)(x, y);
}

}  // namespace locrec
