#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "gibo/gp.hpp"
#include "test_util.hpp"

using gibo::Dataset;
using gibo::GpPosterior;
using gibo::JacobianPosterior;
using gibo::KernelParams;
using gibo::posterior_jacobian;
using gibo::posterior_value;
using gibo::ValuePosterior;

TEST_CASE("empty dataset returns the prior") {
  const KernelParams p = KernelParams::isotropic(3, 0.5, 2.5, 0.01);
  const Dataset data;
  const Eigen::VectorXd q = Eigen::VectorXd::Constant(3, 0.4);
  const ValuePosterior v = posterior_value(q, data, p);
  CHECK(v.mean == 0.0);
  CHECK(v.variance == doctest::Approx(2.5));

  const JacobianPosterior j = posterior_jacobian(q, data, p);
  CHECK(j.mean.norm() == 0.0);
  const Eigen::MatrixXd expected =
      p.signal_variance * Eigen::MatrixXd(p.metric_diagonal().asDiagonal());
  CHECK((j.covariance - expected).lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("noiseless single point interpolates") {
  const KernelParams p = KernelParams::isotropic(2, 0.7, 1.0, 0.0);
  Dataset data;
  const Eigen::VectorXd x = (Eigen::VectorXd(2) << 0.2, 0.8).finished();
  data.append(x, 1.37);
  const ValuePosterior v = posterior_value(x, data, p);
  CHECK(std::abs(v.mean - 1.37) < 1e-6);
  CHECK(v.variance < 1e-6);
}

TEST_CASE("posterior value matches a dense Gaussian-elimination solve") {
  gibo::SplitMix64 rng(101);
  const int n = 5, d = 3;
  const KernelParams p = KernelParams::isotropic(d, 0.45, 1.2, 0.04);
  const Dataset data = giblab::random_dataset(rng, n, d);

  // Independent route: assemble K + s^2 I and solve by Gaussian elimination.
  Eigen::MatrixXd k(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      k(i, j) = gibo::se_kernel(data.point(i), data.point(j), p);
      if (i == j) k(i, j) += p.noise_variance;
    }
  }
  const Eigen::VectorXd alpha = giblab::dense_solve(k, data.targets_vector());

  for (int rep = 0; rep < 10; ++rep) {
    const Eigen::VectorXd q = giblab::random_point(rng, d);
    Eigen::VectorXd cross(n);
    for (int i = 0; i < n; ++i) cross[i] = gibo::se_kernel(q, data.point(i), p);
    const double expected_mean = cross.dot(alpha);
    const double expected_var =
        p.signal_variance - cross.dot(giblab::dense_solve(k, cross));

    const ValuePosterior v = posterior_value(q, data, p);
    CHECK(v.mean == doctest::Approx(expected_mean).epsilon(1e-8));
    CHECK(v.variance == doctest::Approx(expected_var).epsilon(1e-8));
  }
}

TEST_CASE("jacobian mean matches finite differences of the posterior mean") {
  gibo::SplitMix64 rng(103);
  const KernelParams p = KernelParams::isotropic(1, 0.3, 1.0, 0.01);
  Dataset data;
  for (int i = 0; i < 6; ++i) {
    data.append(giblab::random_point(rng, 1), gibo::normal_double(rng));
  }
  const GpPosterior posterior(data, p);
  const double h = 1e-5;
  for (int g = 0; g < 20; ++g) {
    const Eigen::VectorXd q = Eigen::VectorXd::Constant(1, g / 19.0);
    Eigen::VectorXd hi = q, lo = q;
    hi[0] += h;
    lo[0] -= h;
    const double fd = (posterior.value(hi).mean - posterior.value(lo).mean) / (2.0 * h);
    const JacobianPosterior jac = posterior.jacobian(q);
    CHECK(std::abs(jac.mean[0] - fd) < 1e-4);
  }
}

TEST_CASE("jacobian covariance ignores the targets") {
  gibo::SplitMix64 rng(107);
  const int n = 8, d = 2;
  const KernelParams p = KernelParams::isotropic(d, 0.4, 1.0, 0.01);
  Dataset data = giblab::random_dataset(rng, n, d);
  const Eigen::VectorXd q = giblab::random_point(rng, d);
  const Eigen::MatrixXd cov = posterior_jacobian(q, data, p).covariance;

  // Replace, permute, and shift targets; covariance must be bitwise stable.
  Dataset shuffled;
  for (int i = n - 1; i >= 0; --i) shuffled.append(data.point(n - 1 - i), data.target(i));
  Dataset replaced;
  for (int i = 0; i < n; ++i) replaced.append(data.point(i), gibo::normal_double(rng));
  Dataset shifted;
  for (int i = 0; i < n; ++i) shifted.append(data.point(i), data.target(i) + 5.0);

  CHECK((posterior_jacobian(q, replaced, p).covariance - cov).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK((posterior_jacobian(q, shifted, p).covariance - cov).cwiseAbs().maxCoeff() == 0.0);
  CHECK((posterior_jacobian(q, shuffled, p).covariance - cov).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("jacobian covariance is symmetric positive semidefinite") {
  gibo::SplitMix64 rng(109);
  for (int d : {1, 2, 5}) {
    const KernelParams p = KernelParams::isotropic(d, 0.5, 1.0, 0.01);
    const Dataset data = giblab::random_dataset(rng, 12, d);
    const Eigen::VectorXd q = giblab::random_point(rng, d);
    const Eigen::MatrixXd cov = posterior_jacobian(q, data, p).covariance;
    CHECK((cov - cov.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    CHECK(es.eigenvalues().minCoeff() > -1e-8);
  }
}

TEST_CASE("conditioning on one more point never increases the trace") {
  gibo::SplitMix64 rng(113);
  for (int rep = 0; rep < 10; ++rep) {
    const int d = 2;
    const KernelParams p = KernelParams::isotropic(d, 0.4, 1.0, 0.01);
    Dataset data = giblab::random_dataset(rng, 6, d);
    const Eigen::VectorXd q = giblab::random_point(rng, d);
    const double before = posterior_jacobian(q, data, p).covariance.trace();
    data.append(giblab::random_point(rng, d), gibo::normal_double(rng));
    const double after = posterior_jacobian(q, data, p).covariance.trace();
    CHECK(after <= before + 1e-10);
  }
}

TEST_CASE("kernel matrices with noise factorize") {
  gibo::SplitMix64 rng(127);
  for (int rep = 0; rep < 5; ++rep) {
    const KernelParams p = KernelParams::isotropic(3, 0.3, 1.0, 1e-6);
    const Dataset data = giblab::random_dataset(rng, 30, 3);
    CHECK_NOTHROW(GpPosterior(data, p));
  }
}

TEST_CASE("duplicate points stay well conditioned through the noise term") {
  const KernelParams p = KernelParams::isotropic(2, 0.5, 1.0, 0.01);
  Dataset data;
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(2, 0.5);
  data.append(x, 1.0);
  data.append(x, 1.2);
  data.append(x, 0.8);
  const ValuePosterior v = posterior_value(x, data, p);
  CHECK(std::isfinite(v.mean));
  CHECK(v.variance >= 0.0);
}
