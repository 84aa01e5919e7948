#include "locrec/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "locrec/errors.hpp"
#include "locrec/oracle.hpp"
#include "parallel.hpp"

namespace locrec {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

RecoveryRow recover_at(std::span<const double> z, const PointCloud& cloud, std::span<const double> values,
                       const SobolevKernel& kernel, const StopRule& stop, std::size_t offer) {
  RecoveryRow row;
  row.z.assign(z.begin(), z.end());
  const auto nn = cloud.knn(z, offer);
  PointSet candidates(cloud.dim());
  candidates.reserve(nn.size());
  for (const auto& nb : nn) candidates.push_back(cloud[nb.index]);

  try {
    const Selection sel = greedy_select(z, candidates, kernel, stop);
    const auto weights = lagrange_coefficients(sel);
    std::vector<double> f(sel.size());
    for (std::size_t k = 0; k < sel.size(); ++k) f[k] = values[nn[sel.site_indices[k]].index];
    row.value = recover(weights, f);
    row.p2 = sel.p2();
    row.lebesgue = lebesgue_constant(weights);
    row.npoints = sel.size();
    row.stop_reason = sel.stop_reason;
  } catch (const NumericalDegeneracy&) {
    row.value = kNaN;
    row.p2 = kNaN;
    row.lebesgue = kNaN;
    row.npoints = 0;
    row.stop_reason = StopReason::degenerate;
  }
  return row;
}

}  // namespace

double peaks(double x, double y) {
  return 3.0 * (1.0 - x) * (1.0 - x) * std::exp(-x * x - (y + 1.0) * (y + 1.0)) -
         10.0 * (x / 5.0 - x * x * x - std::pow(y, 5)) * std::exp(-x * x - y * y) -
         std::exp(-(x + 1.0) * (x + 1.0) - y * y) / 3.0;
}

PointSet random_cloud(std::size_t n, int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> coords(n * static_cast<std::size_t>(dim));
  for (double& v : coords) v = u(rng);
  return PointSet(dim, std::move(coords));
}

std::vector<double> peaks_values(const PointSet& points) {
  if (points.dim() != 2) throw std::invalid_argument("peaks: needs two-dimensional points");
  std::vector<double> f(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) f[i] = peaks(points[i][0], points[i][1]);
  return f;
}

SinglePointStudy single_point_study(std::span<const double> z, const PointCloud& cloud,
                                    const SobolevKernelSpec& spec, const StopRule& stop) {
  StopRule full = stop;
  full.k_max = cloud.size();
  SinglePointStudy study{greedy_select(z, cloud.points(), spec, full), {}};
  for (std::size_t j = 1; j <= study.selection.size(); ++j)
    study.lebesgue.push_back(lebesgue_constant(lagrange_coefficients(study.selection, j)));
  return study;
}

std::vector<RecoveryRow> upsample(const PointCloud& cloud, std::span<const double> values,
                                  const PointSet& eval_points, const SobolevKernelSpec& spec,
                                  const StopRule& stop, std::size_t offer, unsigned threads) {
  if (values.size() != cloud.size())
    throw std::invalid_argument("upsample: need one function value per data site");
  if (offer < 1 || offer > cloud.size())
    throw std::invalid_argument("upsample: offer must satisfy 1 <= offer <= N");
  if (eval_points.dim() != cloud.dim())
    throw std::invalid_argument("upsample: evaluation points have the wrong dimension");
  eval_points.require_finite();
  stop.validate();

  const SobolevKernel kernel(spec);
  if (kernel.dim() != cloud.dim()) throw std::invalid_argument("upsample: kernel dimension mismatch");
  std::vector<RecoveryRow> rows(eval_points.size());
  detail::parallel_for(eval_points.size(), threads, [&](std::size_t i) {
    rows[i] = recover_at(eval_points[i], cloud, values, kernel, stop, offer);
  });
  return rows;
}

Comparison compare_global_local(const PointCloud& cloud, std::span<const double> values,
                                const PointSet& eval_points, const SobolevKernelSpec& spec,
                                const StopRule& stop, std::size_t offer, unsigned threads) {
  Comparison out;
  const auto local = upsample(cloud, values, eval_points, spec, stop, offer, threads);
  out.rows.resize(local.size());
  for (std::size_t i = 0; i < local.size(); ++i) out.rows[i].local = local[i];

  std::optional<DenseSystem> global;
  try {
    global.emplace(cloud.points(), spec);
  } catch (const NumericalDegeneracy& e) {
    out.global_failure = e.what();
    return out;
  }
  out.global_available = true;

  const Eigen::VectorXd f = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  const Eigen::VectorXd coeffs = global->solve(f);
  detail::parallel_for(eval_points.size(), threads, [&](std::size_t i) {
    const auto z = eval_points[i];
    auto& row = out.rows[i];
    row.value_global = coeffs.dot(global->kernel_column(z));
    try {
      row.p2_global = power_function_direct(*global, z);
    } catch (const NumericalDegeneracy&) {
      row.p2_global.reset();
    }
  });
  return out;
}

ConvergenceResult convergence_study(const SobolevKernelSpec& spec, std::span<const std::size_t> Ns,
                                    const PointSet& grid, std::uint64_t seed, const StopRule& stop,
                                    std::size_t offer, unsigned threads) {
  if (Ns.empty()) throw std::invalid_argument("convergence_study: no set sizes given");
  for (std::size_t i = 1; i < Ns.size(); ++i) {
    if (Ns[i] <= Ns[i - 1]) throw std::invalid_argument("convergence_study: sizes must be strictly increasing");
  }
  if (grid.empty() || grid.dim() != spec.d)
    throw std::invalid_argument("convergence_study: evaluation grid is empty or has the wrong dimension");

  const PointSet all = random_cloud(Ns.back(), spec.d, seed);
  ConvergenceResult result;
  for (std::size_t N : Ns) {
    const PointCloud cloud(all.prefix(N));
    // Values do not influence P; zeros keep the study independent of any target.
    const std::vector<double> values(N, 0.0);
    const auto rows = upsample(cloud, values, grid, spec, stop, std::min(offer, N), threads);
    double max_p2 = 0.0;
    for (const auto& r : rows) {
      if (r.stop_reason != StopReason::degenerate) max_p2 = std::max(max_p2, r.p2);
    }
    result.points.push_back({N, fill_distance(cloud, grid), std::sqrt(max_p2)});
  }

  std::vector<double> hs;
  std::vector<double> ps;
  for (const auto& p : result.points) {
    hs.push_back(p.h);
    ps.push_back(p.maxP);
  }
  result.slope = fit_loglog_slope(hs, ps);
  return result;
}

std::optional<double> fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_loglog_slope: length mismatch");
  if (x.size() < 2) return std::nullopt;
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::nullopt;
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

double stability_fill_limit(double m, int d) {
  const double exponent = 2.0 * m - d;
  if (!(exponent > 0.0)) throw std::invalid_argument("stability_fill_limit: needs 2m > d");
  return std::pow(10.0, -15.0 / exponent);
}

}  // namespace locrec
