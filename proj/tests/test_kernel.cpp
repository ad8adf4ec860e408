#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gibo/kernel.hpp"
#include "test_util.hpp"

using gibo::KernelParams;
using gibo::se_kernel;
using gibo::se_kernel_grad1;
using gibo::se_kernel_hess12;

TEST_CASE("kernel at zero distance equals the signal variance") {
  const KernelParams p = KernelParams::isotropic(3, 0.5, 1.0, 0.0);
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(3, 0.2);
  CHECK(se_kernel(x, x, p) == doctest::Approx(1.0));

  const KernelParams p2 = KernelParams::isotropic(2, 0.3, 4.5, 0.0);
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(2);
  CHECK(se_kernel(z, z, p2) == doctest::Approx(4.5));
}

TEST_CASE("kernel correlation at one and two lengthscales") {
  const KernelParams p = KernelParams::isotropic(2, 0.7, 1.0, 0.0);
  Eigen::VectorXd x1 = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd x2(2);
  x2 << 0.7, 0.0;  // distance = one lengthscale
  CHECK(se_kernel(x1, x2, p) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(se_kernel(x1, x2, p) == doctest::Approx(0.6065).epsilon(1e-3));
  x2 << 1.4, 0.0;  // two lengthscales
  CHECK(se_kernel(x1, x2, p) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(se_kernel(x1, x2, p) == doctest::Approx(0.1353).epsilon(1e-3));
}

TEST_CASE("kernel is symmetric in its arguments") {
  gibo::SplitMix64 rng(11);
  for (int d : {1, 2, 5}) {
    KernelParams p;
    p.lengthscales = gibo::uniform_vector(rng, d, 0.1, 2.0);
    p.signal_variance = gibo::uniform_in(rng, 0.2, 3.0);
    for (int rep = 0; rep < 20; ++rep) {
      const Eigen::VectorXd a = giblab::random_point(rng, d, -2.0, 2.0);
      const Eigen::VectorXd b = giblab::random_point(rng, d, -2.0, 2.0);
      CHECK(se_kernel(a, b, p) == doctest::Approx(se_kernel(b, a, p)).epsilon(1e-14));
    }
  }
}

TEST_CASE("kernel rejects dimension mismatches") {
  const KernelParams p = KernelParams::isotropic(3, 0.5, 1.0, 0.0);
  const Eigen::VectorXd a = Eigen::VectorXd::Zero(3);
  const Eigen::VectorXd b = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(se_kernel(a, b, p), std::invalid_argument);
  CHECK_THROWS_AS(se_kernel_grad1(b, b, p), std::invalid_argument);
  CHECK_THROWS_AS(se_kernel_hess12(a, b, p), std::invalid_argument);
}

TEST_CASE("params validation") {
  KernelParams p = KernelParams::isotropic(2, 0.5, 1.0, 0.1);
  CHECK_NOTHROW(p.validate());
  p.lengthscales[1] = -0.1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = KernelParams::isotropic(2, 0.5, 1.0, 0.1);
  p.signal_variance = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = KernelParams::isotropic(2, 0.5, 1.0, 0.1);
  p.noise_variance = -1e-9;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("gradient vanishes at coincident points and is antisymmetric") {
  const KernelParams p = KernelParams::isotropic(4, 0.4, 2.0, 0.0);
  gibo::SplitMix64 rng(7);
  const Eigen::VectorXd x = giblab::random_point(rng, 4);
  CHECK(se_kernel_grad1(x, x, p).norm() == doctest::Approx(0.0));

  const Eigen::VectorXd y = giblab::random_point(rng, 4);
  const Eigen::VectorXd g12 = se_kernel_grad1(x, y, p);
  const Eigen::VectorXd g21 = se_kernel_grad1(y, x, p);
  CHECK((g12 + g21).lpNorm<Eigen::Infinity>() == doctest::Approx(0.0).epsilon(1e-14));
}

namespace {

double fd_partial(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
                  const KernelParams& p, int i, double h) {
  Eigen::VectorXd hi = x1, lo = x1;
  hi[i] += h;
  lo[i] -= h;
  return (se_kernel(hi, x2, p) - se_kernel(lo, x2, p)) / (2.0 * h);
}

}  // namespace

TEST_CASE("gradient matches central finite differences") {
  gibo::SplitMix64 rng(13);
  for (int d : {1, 2, 5}) {
    KernelParams p;
    p.lengthscales = gibo::uniform_vector(rng, d, 0.2, 1.5);
    p.signal_variance = 1.7;
    for (int rep = 0; rep < 34; ++rep) {
      const Eigen::VectorXd x1 = giblab::random_point(rng, d);
      const Eigen::VectorXd x2 = giblab::random_point(rng, d);
      const Eigen::VectorXd g = se_kernel_grad1(x1, x2, p);
      for (int i = 0; i < d; ++i) {
        const double fd = fd_partial(x1, x2, p, i, 1e-5);
        CHECK(g[i] == doctest::Approx(fd).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("mixed second derivative at coincident points is the metric") {
  const KernelParams p = KernelParams::isotropic(2, 1.0, 1.0, 0.0);
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(2, 0.3);
  const Eigen::MatrixXd h = se_kernel_hess12(x, x, p);
  CHECK((h - Eigen::MatrixXd::Identity(2, 2)).lpNorm<Eigen::Infinity>() ==
        doctest::Approx(0.0).epsilon(1e-14));

  KernelParams q;
  q.lengthscales = (Eigen::VectorXd(3) << 0.5, 1.0, 2.0).finished();
  q.signal_variance = 3.0;
  const Eigen::VectorXd y = Eigen::VectorXd::Zero(3);
  const Eigen::MatrixXd h2 = se_kernel_hess12(y, y, q);
  const Eigen::MatrixXd expected =
      q.signal_variance * Eigen::MatrixXd(q.metric_diagonal().asDiagonal());
  CHECK((h2 - expected).lpNorm<Eigen::Infinity>() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("mixed second derivative matches nested finite differences") {
  gibo::SplitMix64 rng(17);
  const double h = 1e-4;
  for (int d : {1, 2, 5}) {
    KernelParams p;
    p.lengthscales = gibo::uniform_vector(rng, d, 0.3, 1.2);
    p.signal_variance = 0.8;
    for (int rep = 0; rep < 20; ++rep) {
      const Eigen::VectorXd x1 = giblab::random_point(rng, d);
      const Eigen::VectorXd x2 = giblab::random_point(rng, d);
      const Eigen::MatrixXd hess = se_kernel_hess12(x1, x2, p);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          Eigen::VectorXd x2_hi = x2, x2_lo = x2;
          x2_hi[j] += h;
          x2_lo[j] -= h;
          const double fd =
              (fd_partial(x1, x2_hi, p, i, h) - fd_partial(x1, x2_lo, p, i, h)) /
              (2.0 * h);
          CHECK(hess(i, j) == doctest::Approx(fd).epsilon(1e-3));
        }
      }
    }
  }
}

TEST_CASE("mixed second derivative equals minus the pure second derivative") {
  // d2k/dx1^2 taken as finite differences of the analytic first derivative.
  gibo::SplitMix64 rng(23);
  const KernelParams p = KernelParams::isotropic(3, 0.6, 1.3, 0.0);
  const Eigen::VectorXd x1 = giblab::random_point(rng, 3);
  const Eigen::VectorXd x2 = giblab::random_point(rng, 3);
  const Eigen::MatrixXd mixed = se_kernel_hess12(x1, x2, p);
  const double h = 1e-6;
  for (int j = 0; j < 3; ++j) {
    Eigen::VectorXd hi = x1, lo = x1;
    hi[j] += h;
    lo[j] -= h;
    const Eigen::VectorXd col =
        (se_kernel_grad1(hi, x2, p) - se_kernel_grad1(lo, x2, p)) / (2.0 * h);
    for (int i = 0; i < 3; ++i) {
      CHECK(mixed(i, j) == doctest::Approx(-col[i]).epsilon(1e-6));
    }
  }
}
