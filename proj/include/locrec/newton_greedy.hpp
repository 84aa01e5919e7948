#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "locrec/geometry.hpp"
#include "locrec/kernel.hpp"

namespace locrec {

/// Termination policy for greedy_select.
struct StopRule {
  /// Maximum number of points to select.
  std::size_t k_max = 6;
  /// Stop once P^2 <= p2_threshold. Zero disables the test.
  double p2_threshold = 0.0;
  /// Candidates whose residual diagonal K_j(x, x) drops below this are
  /// dropped, and selection stops once the best score N_j(z)^2 falls below it.
  double progress_floor = 1.0e-13;

  void validate() const;
};

enum class StopReason {
  k_max,
  threshold,
  exhausted,
  no_progress,
  // Never produced by greedy_select; batch drivers record it for a row whose
  // selection raised NumericalDegeneracy.
  degenerate,
};

[[nodiscard]] std::string_view to_string(StopReason r) noexcept;

/// Work counters of one selection.
struct SelectionStats {
  std::size_t kernel_evals = 0;
  /// Multiply-adds spent on Newton columns and vector updates.
  std::size_t update_flops = 0;
};

/// Result of greedy selection at one evaluation point z.
struct Selection {
  /// Chosen positions in the candidate list, in selection order.
  std::vector<std::size_t> site_indices;
  /// j-by-j matrix, entry (k, i) = N_i(x_k) for the k-th selected site
  /// (rows) and the i-th Newton basis function (columns). It is lower
  /// triangular: the entries above the diagonal hold the computed values of
  /// N_i(x_k), k < i, which vanish up to rounding and are never read.
  Eigen::MatrixXd newton_on_sites;
  /// N_i(z) for i = 1..j.
  std::vector<double> newton_at_z;
  /// P^2(z) after 0, 1, ..., j selected points; front() = K(z, z).
  std::vector<double> p2_trace;
  StopReason stop_reason = StopReason::k_max;
  SelectionStats stats;

  [[nodiscard]] std::size_t size() const noexcept { return site_indices.size(); }
  [[nodiscard]] double p2() const noexcept { return p2_trace.back(); }
};

/// Greedy minimization of the squared Power Function at z over the
/// candidate sites, using the Newton basis of the recursive kernel.
///
/// Each step picks argmax K_j(z, x)^2 / K_j(x, x) over active candidates
/// (lowest index on ties), extends the Newton basis by one column and
/// updates K_{j+1}(z, .), K_{j+1}(., .) and P^2. Storage is O(k n) and the
/// arithmetic O(k^2 n) for k selected out of n offered candidates.
///
/// Throws std::invalid_argument for empty candidates, dimension mismatch or
/// non-finite coordinates, and NumericalDegeneracy if P^2 falls below -1e-12.
[[nodiscard]] Selection greedy_select(std::span<const double> z, const PointSet& candidates,
                                      const SobolevKernel& kernel, const StopRule& stop);

[[nodiscard]] Selection greedy_select(std::span<const double> z, const PointSet& candidates,
                                      const SobolevKernelSpec& spec, const StopRule& stop);

/// Lagrange weights L(z) on the selected sites, from the triangular system
/// N_i(z) = sum_k L_k(z) N_i(x_k), i = 1..j.
[[nodiscard]] std::vector<double> lagrange_coefficients(const Selection& sel);

/// Weights for the first `count` selected sites only. Every prefix of a
/// greedy selection is the selection that a smaller k_max would produce.
[[nodiscard]] std::vector<double> lagrange_coefficients(const Selection& sel, std::size_t count);

/// Sum of |L_k|.
[[nodiscard]] double lebesgue_constant(std::span<const double> weights);

/// sum_k L_k f(x_k).
[[nodiscard]] double recover(std::span<const double> weights, std::span<const double> fvals);

struct PointCount {
  int q;          // polynomial order ceil(m - d/2)
  std::size_t Q;  // binomial(q + d, d)
};

/// Polynomial order and point count matching W_2^m(R^d).
[[nodiscard]] PointCount q_and_Q(double m, int d);

/// Default number of nearest neighbors offered to the selection, 5 Q.
[[nodiscard]] std::size_t default_offer(double m, int d);

/// Default stop rule: k_max = Q, threshold disabled.
[[nodiscard]] StopRule default_stop_rule(double m, int d);

}  // namespace locrec
