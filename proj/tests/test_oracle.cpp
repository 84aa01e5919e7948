#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "locrec/errors.hpp"
#include "locrec/experiments.hpp"
#include "locrec/newton_greedy.hpp"
#include "locrec/oracle.hpp"

using namespace locrec;

TEST_CASE("dense interpolation examples") {
  const SobolevKernelSpec spec{3.0, 2, 1.0};
  const SobolevKernel kernel(spec);
  const PointSet one(2, {{0.2, 0.1}});
  const DenseSystem sys(one, spec);
  const std::vector<double> f{5.0};
  const std::vector<double> z{0.5, -0.3};
  CHECK(dense_interpolate(sys, f, z) == doctest::Approx(5.0 * kernel(z, one[0])));
  CHECK(dense_interpolate(sys, f, one[0]) == doctest::Approx(5.0));

  const PointSet sites = random_cloud(15, 2, 3);
  const DenseSystem many(sites, spec);
  std::vector<double> col;
  for (std::size_t j = 0; j < sites.size(); ++j) col.push_back(kernel(sites[j], sites[4]));
  CHECK(dense_interpolate(many, col, z) == doctest::Approx(kernel(z, sites[4])).epsilon(1e-9));

  const auto fp = peaks_values(sites);
  for (std::size_t j = 0; j < sites.size(); ++j)
    CHECK(dense_interpolate(many, fp, sites[j]) == doctest::Approx(fp[j]).epsilon(1e-8));

  const std::vector<double> short_f{1.0, 2.0};
  CHECK_THROWS_AS((void)dense_interpolate(many, short_f, z), std::invalid_argument);
}

TEST_CASE("dense path equals full Newton selection") {
  const SobolevKernelSpec spec{3.0, 2, 1.0};
  const PointSet sites = random_cloud(20, 2, 17);
  const auto f = peaks_values(sites);
  const DenseSystem sys(sites, spec);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const PointSet zs = random_cloud(1, 2, 500 + s);
    StopRule all;
    all.k_max = 20;
    all.progress_floor = 1e-300;
    const Selection sel = greedy_select(zs[0], sites, spec, all);
    REQUIRE(sel.size() == 20);
    std::vector<double> fs;
    for (std::size_t idx : sel.site_indices) fs.push_back(f[idx]);
    CHECK(std::abs(recover(lagrange_coefficients(sel), fs) - dense_interpolate(sys, f, zs[0])) <= 1e-8);
  }
}

TEST_CASE("power function direct") {
  const SobolevKernelSpec spec{1.5, 2, 1.0};
  const std::vector<double> z{0.0, 0.0};
  CHECK(power_function_direct(PointSet(2), spec, z) == 1.0);
  CHECK(power_function_direct(PointSet(2, {{0.0, 0.0}}), spec, z) == 0.0);
  CHECK(power_function_direct(PointSet(2, {{1.0, 0.0}}), spec, z) ==
        doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-13));
}

TEST_CASE("power function decreases along nested site sets") {
  for (double m : {1.5, 3.0}) {
    const SobolevKernelSpec spec{m, 2, 1.0};
    const PointSet chain = random_cloud(40, 2, 23);
    const PointSet zs = random_cloud(10, 2, 24);
    for (std::size_t i = 0; i < zs.size(); ++i) {
      double prev = power_function_direct(PointSet(2), spec, zs[i]);
      for (std::size_t n = 1; n <= chain.size(); ++n) {
        const double p2 = power_function_direct(chain.prefix(n), spec, zs[i]);
        CHECK(p2 <= prev + 1e-12);
        prev = p2;
      }
    }
  }
}

TEST_CASE("Cauchy-Schwarz for kernel values") {
  const SobolevKernel kernel({3.0, 2, 0.8});
  const PointSet a = random_cloud(1000, 2, 31);
  const PointSet b = random_cloud(1000, 2, 32);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double k = kernel(a[i], b[i]);
    CHECK(k * k <= kernel(a[i], a[i]) * kernel(b[i], b[i]));
  }
}

TEST_CASE("condition estimates") {
  // Far apart sites: the Gram matrix is numerically the identity.
  const PointSet far(2, {{0.0, 0.0}, {100.0, 0.0}, {0.0, 100.0}});
  const double cond_far = condition_estimate(DenseSystem(far, {3.0, 2, 1.0}));
  CHECK(cond_far >= 1.0);
  CHECK(cond_far <= 2.0);

  // [[1, a], [a, 1]] with a = exp(-r) = 0.9: eigenvalues 1 +- a.
  const PointSet pair(2, {{0.0, 0.0}, {-std::log(0.9), 0.0}});
  CHECK(condition_estimate(DenseSystem(pair, {1.5, 2, 1.0})) == doctest::Approx(19.0).epsilon(1e-6));

  // Against a symmetric eigensolver, well inside a factor of 10.
  for (double m : {1.5, 3.0}) {
    const DenseSystem sys(random_cloud(60, 2, 41), {m, 2, 1.0});
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sys.gram(), Eigen::EigenvaluesOnly);
    const double exact = eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff();
    const double est = condition_estimate(sys);
    CHECK(est <= 10.0 * exact);
    CHECK(est >= 0.1 * exact);
  }
}

TEST_CASE("ill-conditioned smooth kernel on 100 random points") {
  const DenseSystem sys(random_cloud(100, 2, 1), {6.0, 2, 1.0});
  CHECK(condition_estimate(sys) > 1e14);
}

TEST_CASE("factorization breakdown reports the pivot") {
  const PointSet dup(2, {{0.1, 0.2}, {0.5, 0.5}, {0.1, 0.2}});
  try {
    const DenseSystem sys(dup, {3.0, 2, 1.0});
    FAIL("expected a degeneracy");
  } catch (const NumericalDegeneracy& e) {
    CHECK(e.index() == 2);
  }
}
