#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "locrec/geometry.hpp"
#include "locrec/kernel.hpp"
#include "locrec/newton_greedy.hpp"

namespace locrec {

/// MATLAB's peaks function, evaluated on raw coordinates.
[[nodiscard]] double peaks(double x, double y);

/// n points drawn i.i.d. uniformly from [-1, 1]^dim with a seeded mt19937_64.
/// Prefixes of the result are the nested sets used by convergence studies.
[[nodiscard]] PointSet random_cloud(std::size_t n, int dim, std::uint64_t seed);

/// peaks at every point of a 2-D set.
[[nodiscard]] std::vector<double> peaks_values(const PointSet& points);

struct SinglePointStudy {
  Selection selection;
  /// Lebesgue constant after each step, one entry per selected point.
  std::vector<double> lebesgue;
};

/// Greedy selection at z over every cloud point (indices are cloud indices),
/// run up to all N points unless the stop rule's threshold or floor ends it.
[[nodiscard]] SinglePointStudy single_point_study(std::span<const double> z, const PointCloud& cloud,
                                                  const SobolevKernelSpec& spec, const StopRule& stop);

struct RecoveryRow {
  std::vector<double> z;
  double value = 0.0;
  double p2 = 0.0;
  double lebesgue = 0.0;
  std::size_t npoints = 0;
  StopReason stop_reason = StopReason::k_max;
};

/// Local recovery on every evaluation point: the `offer` nearest cloud points
/// are handed to greedy_select. Rows come back in eval_points order. A row
/// whose selection breaks down numerically is marked StopReason::degenerate
/// (value, p2 and lebesgue NaN) instead of aborting the batch.
/// threads == 0 uses the hardware concurrency.
[[nodiscard]] std::vector<RecoveryRow> upsample(const PointCloud& cloud, std::span<const double> values,
                                                const PointSet& eval_points, const SobolevKernelSpec& spec,
                                                const StopRule& stop, std::size_t offer,
                                                unsigned threads = 0);

struct ComparisonRow {
  RecoveryRow local;
  std::optional<double> p2_global;
  std::optional<double> value_global;
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  bool global_available = false;
  /// Reason the global system was unavailable, empty otherwise.
  std::string global_failure;
};

/// upsample plus full interpolation on all cloud points at every z. When
/// the full Gram matrix cannot be factored the global fields stay empty.
[[nodiscard]] Comparison compare_global_local(const PointCloud& cloud, std::span<const double> values,
                                              const PointSet& eval_points, const SobolevKernelSpec& spec,
                                              const StopRule& stop, std::size_t offer,
                                              unsigned threads = 0);

struct ConvergencePoint {
  std::size_t N = 0;
  double h = 0.0;
  /// Maximum of the Power Function P (not P^2) over the evaluation grid.
  double maxP = 0.0;
};

struct ConvergenceResult {
  std::vector<ConvergencePoint> points;
  /// Least-squares slope of log maxP against log h; empty for fewer than two points.
  std::optional<double> slope;
};

/// Nested random sets X_N (prefixes of one seeded sequence on [-1,1]^d). The
/// fill distance is measured with the evaluation grid as probe.
[[nodiscard]] ConvergenceResult convergence_study(const SobolevKernelSpec& spec, std::span<const std::size_t> Ns,
                                                  const PointSet& grid, std::uint64_t seed,
                                                  const StopRule& stop, std::size_t offer,
                                                  unsigned threads = 0);

/// Ordinary least squares slope of log(y) on log(x).
[[nodiscard]] std::optional<double> fit_loglog_slope(std::span<const double> x, std::span<const double> y);

/// Fill distance below which P^2 ~ h^(2m-d) reaches double precision:
/// 10^(-15 / (2m - d)).
[[nodiscard]] double stability_fill_limit(double m, int d);

}  // namespace locrec
