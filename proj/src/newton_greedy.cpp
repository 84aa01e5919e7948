#include "locrec/newton_greedy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "locrec/errors.hpp"

namespace locrec {

namespace {

constexpr double kNegativeP2Tolerance = 1.0e-12;

}  // namespace

void StopRule::validate() const {
  if (k_max < 1) throw std::invalid_argument("StopRule: k_max must be >= 1");
  if (!(p2_threshold >= 0.0)) throw std::invalid_argument("StopRule: p2_threshold must be >= 0");
  if (!(progress_floor > 0.0)) throw std::invalid_argument("StopRule: progress_floor must be > 0");
}

std::string_view to_string(StopReason r) noexcept {
  switch (r) {
    case StopReason::k_max: return "k_max";
    case StopReason::threshold: return "threshold";
    case StopReason::exhausted: return "exhausted";
    case StopReason::no_progress: return "no_progress";
    case StopReason::degenerate: return "degenerate";
  }
  return "unknown";
}

Selection greedy_select(std::span<const double> z, const PointSet& candidates,
                        const SobolevKernel& kernel, const StopRule& stop) {
  stop.validate();
  const int dim = kernel.dim();
  if (candidates.empty()) throw std::invalid_argument("greedy_select: no candidates");
  if (candidates.dim() != dim || z.size() != static_cast<std::size_t>(dim))
    throw std::invalid_argument("greedy_select: dimension mismatch");
  for (double v : z) {
    if (!std::isfinite(v)) throw std::invalid_argument("greedy_select: non-finite evaluation point");
  }
  candidates.require_finite();

  const std::size_t n = candidates.size();
  Selection sel;

  // zvec = K_j(z, x_k), dvec = K_j(x_k, x_k).
  std::vector<double> zvec(n);
  std::vector<double> dvec(n);
  std::vector<char> active(n, 1);
  for (std::size_t k = 0; k < n; ++k) {
    zvec[k] = kernel.eval_unchecked(z.data(), candidates[k].data());
    dvec[k] = kernel.eval_unchecked(candidates[k].data(), candidates[k].data());
  }
  double p2 = kernel.eval_unchecked(z.data(), z.data());
  sel.stats.kernel_evals = 2 * n + 1;
  sel.p2_trace.push_back(p2);

  // newton[i][k] = N_{i+1}(x_k) for every candidate.
  std::vector<std::vector<double>> newton;
  const std::size_t k_cap = std::min(stop.k_max, n);
  newton.reserve(k_cap);

  for (std::size_t k = 0; k < n; ++k) {
    if (dvec[k] < stop.progress_floor) active[k] = 0;
  }

  for (;;) {
    const std::size_t j = sel.site_indices.size();
    if (stop.p2_threshold > 0.0 && p2 <= stop.p2_threshold) {
      sel.stop_reason = StopReason::threshold;
      break;
    }
    if (j >= stop.k_max) {
      sel.stop_reason = StopReason::k_max;
      break;
    }

    std::size_t winner = n;
    double best = -1.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k]) continue;
      const double score = zvec[k] * zvec[k] / dvec[k];
      if (score > best) {
        best = score;
        winner = k;
      }
    }
    if (winner == n) {
      sel.stop_reason = StopReason::exhausted;
      break;
    }
    if (best < stop.progress_floor) {
      sel.stop_reason = StopReason::no_progress;
      break;
    }

    // New Newton column: N_j(x_k) N_j(x_w) = K(x_k, x_w) - sum_{i<j} N_i(x_k) N_i(x_w).
    const double pivot = std::sqrt(dvec[winner]);
    const double* xw = candidates[winner].data();
    std::vector<double> column(n);
    for (std::size_t k = 0; k < n; ++k) {
      double s = kernel.eval_unchecked(candidates[k].data(), xw);
      for (std::size_t i = 0; i < j; ++i) s -= newton[i][k] * newton[i][winner];
      column[k] = s / pivot;
    }
    // The diagonal entry is exact by definition.
    column[winner] = pivot;
    sel.stats.kernel_evals += n;
    sel.stats.update_flops += n * j;

    // Dividing by the positive pivot gives N_j(z) the sign of K_j(z, x_j).
    const double nz = zvec[winner] / pivot;
    for (std::size_t k = 0; k < n; ++k) {
      zvec[k] -= nz * column[k];
      dvec[k] -= column[k] * column[k];
    }
    sel.stats.update_flops += 2 * n;
    p2 -= nz * nz;

    active[winner] = 0;
    zvec[winner] = 0.0;
    dvec[winner] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (active[k] && dvec[k] < stop.progress_floor) active[k] = 0;
    }

    if (p2 < 0.0) {
      if (p2 < -kNegativeP2Tolerance)
        throw NumericalDegeneracy("greedy_select: squared Power Function became negative (" +
                                      std::to_string(p2) + ")",
                                  j + 1);
      p2 = 0.0;
    }

    newton.push_back(std::move(column));
    sel.site_indices.push_back(winner);
    sel.newton_at_z.push_back(nz);
    sel.p2_trace.push_back(p2);
  }

  const std::size_t j = sel.site_indices.size();
  sel.newton_on_sites.resize(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j));
  for (std::size_t row = 0; row < j; ++row) {
    for (std::size_t col = 0; col < j; ++col) {
      sel.newton_on_sites(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
          newton[col][sel.site_indices[row]];
    }
  }
  return sel;
}

Selection greedy_select(std::span<const double> z, const PointSet& candidates,
                        const SobolevKernelSpec& spec, const StopRule& stop) {
  return greedy_select(z, candidates, SobolevKernel(spec), stop);
}

std::vector<double> lagrange_coefficients(const Selection& sel) {
  return lagrange_coefficients(sel, sel.size());
}

std::vector<double> lagrange_coefficients(const Selection& sel, std::size_t j) {
  if (j == 0) throw std::invalid_argument("lagrange_coefficients: empty selection");
  const auto& T = sel.newton_on_sites;
  if (j > sel.size() || static_cast<std::size_t>(T.rows()) != sel.size() ||
      static_cast<std::size_t>(T.cols()) != sel.size() || sel.newton_at_z.size() != sel.size())
    throw std::invalid_argument("lagrange_coefficients: inconsistent selection");

  // The system matrix is T^T (upper triangular): back substitution.
  std::vector<double> weights(j);
  for (std::size_t m = j; m-- > 0;) {
    const auto mi = static_cast<Eigen::Index>(m);
    double s = sel.newton_at_z[m];
    for (std::size_t k = m + 1; k < j; ++k) s -= T(static_cast<Eigen::Index>(k), mi) * weights[k];
    const double diag = T(mi, mi);
    if (!(diag > 0.0))
      throw NumericalDegeneracy("lagrange_coefficients: nonpositive Newton diagonal", m);
    weights[m] = s / diag;
  }
  return weights;
}

double lebesgue_constant(std::span<const double> weights) {
  double s = 0.0;
  for (double w : weights) s += std::abs(w);
  return s;
}

double recover(std::span<const double> weights, std::span<const double> fvals) {
  if (weights.size() != fvals.size())
    throw std::invalid_argument("recover: weight and value counts differ");
  double s = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) s += weights[k] * fvals[k];
  return s;
}

PointCount q_and_Q(double m, int d) {
  if (d < 1) throw std::invalid_argument("q_and_Q: dimension must be >= 1");
  const double order = m - 0.5 * d;
  if (!(order > 0.0)) throw std::invalid_argument("q_and_Q: m must exceed d/2");
  const int q = static_cast<int>(std::ceil(order));
  // binomial(q + d, d), exact in integers
  std::size_t Q = 1;
  for (int i = 1; i <= d; ++i) Q = Q * static_cast<std::size_t>(q + i) / static_cast<std::size_t>(i);
  return {q, Q};
}

std::size_t default_offer(double m, int d) { return 5 * q_and_Q(m, d).Q; }

StopRule default_stop_rule(double m, int d) {
  StopRule rule;
  rule.k_max = q_and_Q(m, d).Q;
  return rule;
}

}  // namespace locrec
