#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>

#include "gibo/errors.hpp"
#include "gibo/lqr.hpp"
#include "test_util.hpp"

using gibo::LQRInstance;
using gibo::RelativeError;
using gibo::RolloutConfig;
using gibo::flatten_gain;
using gibo::is_stabilizing;
using gibo::lqr_oracle;
using gibo::paper_instance;
using gibo::relative_error;
using gibo::solve_dare;
using gibo::solve_dlyap;
using gibo::spectral_radius;
using gibo::unflatten_gain;

TEST_CASE("spectral radius basics") {
  CHECK(spectral_radius(Eigen::MatrixXd::Identity(4, 4)) == doctest::Approx(1.0));
  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
  diag(0, 0) = 0.2;
  diag(1, 1) = -0.9;
  CHECK(spectral_radius(diag) == doctest::Approx(0.9));
  CHECK_THROWS_AS(spectral_radius(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("benchmark instance facts") {
  const LQRInstance inst = paper_instance();
  CHECK(inst.state_dim() == 3);
  CHECK(inst.input_dim() == 3);
  // Marginally unstable open loop.
  CHECK(spectral_radius(inst.A) == doctest::Approx(1.024).epsilon(1e-3));
  CHECK((inst.A - inst.A.transpose()).cwiseAbs().maxCoeff() == 0.0);

  // Cached optimum satisfies the Riccati equation.
  const Eigen::MatrixXd& p = inst.P;
  const Eigen::MatrixXd residual =
      inst.A.transpose() * p * inst.A - p -
      inst.A.transpose() * p * inst.B *
          (inst.R + inst.B.transpose() * p * inst.B).inverse() *
          inst.B.transpose() * p * inst.A +
      inst.Q;
  CHECK(residual.cwiseAbs().maxCoeff() < 1e-8);
  CHECK(spectral_radius(inst.A + inst.B * inst.K_opt) < 1.0);
  CHECK(inst.J_opt == doctest::Approx((inst.W * inst.P).trace()));
}

TEST_CASE("scalar riccati cases") {
  SUBCASE("no dynamics to counteract") {
    const auto [p, k] = solve_dare(Eigen::MatrixXd::Zero(1, 1),
                                   Eigen::MatrixXd::Identity(1, 1),
                                   Eigen::MatrixXd::Identity(1, 1),
                                   Eigen::MatrixXd::Identity(1, 1));
    CHECK(p(0, 0) == doctest::Approx(1.0));
    CHECK(k(0, 0) == doctest::Approx(0.0));
  }
  SUBCASE("unstable scalar matches the fixed-point recursion oracle") {
    Eigen::MatrixXd a(1, 1), b(1, 1), q(1, 1), r(1, 1);
    a << 1.1;
    b << 1.0;
    q << 1.0;
    r << 1.0;
    // Plain value-iteration recursion as the independent route.
    double p_fp = 1.0;
    for (int i = 0; i < 100000; ++i) {
      p_fp = a(0) * p_fp * a(0) -
             a(0) * p_fp * b(0) / (r(0) + b(0) * p_fp * b(0)) * b(0) * p_fp * a(0) +
             q(0);
    }
    const auto [p, k] = solve_dare(a, b, q, r);
    CHECK(p(0, 0) == doctest::Approx(p_fp).epsilon(1e-8));
  }
}

TEST_CASE("riccati matches the fixed-point recursion on the benchmark instance") {
  const LQRInstance inst = paper_instance();
  Eigen::MatrixXd p_fp = inst.Q;
  for (int i = 0; i < 20000; ++i) {
    const Eigen::MatrixXd bpb = inst.R + inst.B.transpose() * p_fp * inst.B;
    p_fp = inst.A.transpose() * p_fp * inst.A -
           inst.A.transpose() * p_fp * inst.B * bpb.inverse() * inst.B.transpose() *
               p_fp * inst.A +
           inst.Q;
  }
  CHECK((inst.P - p_fp).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("riccati rejects non-stabilizable inputs") {
  // x cannot be influenced at all and A is unstable.
  Eigen::MatrixXd a(1, 1), b(1, 1), q(1, 1), r(1, 1);
  a << 1.5;
  b << 0.0;
  q << 1.0;
  r << 1.0;
  CHECK_THROWS_AS(solve_dare(a, b, q, r), gibo::StabilityError);
}

TEST_CASE("discrete lyapunov solutions") {
  SUBCASE("zero dynamics returns the forcing term") {
    const Eigen::MatrixXd w = (Eigen::MatrixXd(2, 2) << 2.0, 0.3, 0.3, 1.0).finished();
    CHECK((solve_dlyap(Eigen::MatrixXd::Zero(2, 2), w) - w).cwiseAbs().maxCoeff() <
          1e-12);
  }
  SUBCASE("scalar geometric series") {
    Eigen::MatrixXd a(1, 1), w(1, 1);
    a << 0.5;
    w << 1.0;
    CHECK(solve_dlyap(a, w)(0, 0) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("random stable system matches the truncated series") {
    gibo::SplitMix64 rng(1001);
    Eigen::MatrixXd a(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = 0.3 * gibo::normal_double(rng);
    REQUIRE(spectral_radius(a) < 1.0);
    const Eigen::MatrixXd w = Eigen::MatrixXd::Identity(3, 3);
    Eigen::MatrixXd series = Eigen::MatrixXd::Zero(3, 3);
    Eigen::MatrixXd term = w;
    for (int k = 0; k <= 200; ++k) {
      series += term;
      term = a * term * a.transpose();
    }
    CHECK((solve_dlyap(a, w) - series).cwiseAbs().maxCoeff() < 1e-8);
    // Residual identity.
    const Eigen::MatrixXd s = solve_dlyap(a, w);
    CHECK((a * s * a.transpose() + w - s).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("unstable dynamics are rejected") {
    Eigen::MatrixXd a(1, 1), w(1, 1);
    a << 1.0;
    w << 1.0;
    CHECK_THROWS_AS(solve_dlyap(a, w), gibo::StabilityError);
  }
}

TEST_CASE("gain flattening round-trips in row-major order") {
  Eigen::MatrixXd k(2, 3);
  k << 1, 2, 3, 4, 5, 6;
  const Eigen::VectorXd theta = flatten_gain(k);
  CHECK(theta[0] == 1.0);
  CHECK(theta[2] == 3.0);
  CHECK(theta[3] == 4.0);
  CHECK((unflatten_gain(theta, 2, 3) - k).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(unflatten_gain(theta, 3, 3), std::invalid_argument);
}

TEST_CASE("relative error of the optimal gain is zero") {
  const LQRInstance inst = paper_instance();
  const RelativeError err = relative_error(inst.K_opt, inst);
  CHECK(err.stabilizing);
  CHECK(err.value < 1e-10);
}

TEST_CASE("non-stabilizing gains get the infinity flag") {
  const LQRInstance inst = paper_instance();
  const Eigen::MatrixXd zero_gain = Eigen::MatrixXd::Zero(3, 3);
  const RelativeError err = relative_error(zero_gain, inst);
  CHECK(!err.stabilizing);
  CHECK(std::isinf(err.value));
}

TEST_CASE("relative error grows quadratically near the optimum") {
  const LQRInstance inst = paper_instance();
  const Eigen::MatrixXd direction = Eigen::MatrixXd::Identity(3, 3);
  const Eigen::MatrixXd near = inst.K_opt + 1e-3 * direction;
  const Eigen::MatrixXd far = inst.K_opt + 2e-3 * direction;
  const double small = relative_error(near, inst).value;
  const double large = relative_error(far, inst).value;
  CHECK(small > 0.0);
  CHECK(large == doctest::Approx(4.0 * small).epsilon(0.01));
}

TEST_CASE("stabilization checks") {
  const LQRInstance inst = paper_instance();
  CHECK(is_stabilizing(flatten_gain(inst.K_opt), inst));
  CHECK(!is_stabilizing(Eigen::VectorXd::Zero(9), inst));

  // An already stable scalar system is stabilized by the zero gain.
  Eigen::MatrixXd a(1, 1), b(1, 1), q(1, 1), r(1, 1), w(1, 1);
  a << 0.5;
  b << 0.0001;
  q << 1.0;
  r << 1.0;
  w << 1.0;
  const LQRInstance stable = gibo::make_instance(a, b, q, r, w);
  CHECK(is_stabilizing(Eigen::VectorXd::Zero(1), stable));
}

TEST_CASE("reward transform endpoints") {
  CHECK(gibo::transformed_reward(0.0) == 0.0);
  CHECK(gibo::transformed_reward(std::exp(1.0) - 1.0) == doctest::Approx(-1.0));
  // Strictly decreasing in the stage cost.
  CHECK(gibo::transformed_reward(2.0) < gibo::transformed_reward(1.0));

  // A zero-started rollout with zero gain on a noise-free system stays at
  // zero cost, so the mean transformed reward is exactly zero.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(1, 1);
  Eigen::MatrixXd b = Eigen::MatrixXd::Identity(1, 1);
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(1, 1);
  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(1, 1);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(1, 1);
  const LQRInstance inst = gibo::make_instance(a, b, q, r, w);
  gibo::SplitMix64 rng(1);
  RolloutConfig cfg;
  cfg.trajectory_length = 5;
  CHECK(lqr_oracle(Eigen::VectorXd::Zero(1), inst, cfg, rng) == 0.0);
}

TEST_CASE("noise-free rollout matches a hand-stepped simulation") {
  const LQRInstance base = paper_instance();
  LQRInstance quiet = base;
  quiet.W = Eigen::MatrixXd::Zero(3, 3);
  // Start from e1 instead of zero to make the trajectory informative: shift
  // the dynamics by seeding the state through one noiseless "kick". The
  // oracle itself always starts at zero, so emulate the kick by comparing
  // against an independent simulation of the same oracle contract.
  RolloutConfig cfg;
  cfg.trajectory_length = 300;
  gibo::SplitMix64 rng(3);
  const Eigen::VectorXd theta = flatten_gain(base.K_opt);
  const double reported = lqr_oracle(theta, quiet, cfg, rng);

  // Independent straight-line simulation of the same protocol.
  Eigen::VectorXd x = Eigen::VectorXd::Zero(3);
  double total = 0.0;
  const Eigen::MatrixXd k = unflatten_gain(theta, 3, 3);
  for (int t = 0; t < 300; ++t) {
    const Eigen::VectorXd u = k * x;
    total += -std::log1p(x.dot(quiet.Q * x) + u.dot(quiet.R * u));
    x = quiet.A * x + quiet.B * u;
  }
  CHECK(reported == doctest::Approx(total).epsilon(1e-12));
}

TEST_CASE("noisy rollout from a perturbed state matches the independent simulation") {
  // Same protocol, nonzero noise: replicate the oracle's draws with a twin
  // generator and step the dynamics by hand.
  const LQRInstance inst = paper_instance();
  RolloutConfig cfg;
  cfg.trajectory_length = 50;
  const Eigen::VectorXd theta = flatten_gain(inst.K_opt);
  gibo::SplitMix64 rng(17), twin(17);
  const double reported = lqr_oracle(theta, inst, cfg, rng);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(3);
  double total = 0.0;
  const Eigen::MatrixXd k = unflatten_gain(theta, 3, 3);
  const Eigen::MatrixXd noise_l =
      Eigen::LLT<Eigen::MatrixXd>(inst.W).matrixL();
  for (int t = 0; t < 50; ++t) {
    const Eigen::VectorXd u = k * x;
    total += -std::log1p(x.dot(inst.Q * x) + u.dot(inst.R * u));
    x = inst.A * x + inst.B * u + noise_l * gibo::normal_vector(twin, 3);
  }
  CHECK(reported == doctest::Approx(total).epsilon(1e-12));
}

TEST_CASE("diverging rollouts are truncated with the worst reward") {
  const LQRInstance inst = paper_instance();
  // A strongly destabilizing gain blows the state up quickly.
  Eigen::MatrixXd bad = 5.0 * Eigen::MatrixXd::Identity(3, 3);
  RolloutConfig cfg;
  cfg.trajectory_length = 300;
  gibo::SplitMix64 rng(23);
  const double y = lqr_oracle(flatten_gain(bad), inst, cfg, rng);
  CHECK(std::isfinite(y));
  CHECK(y < -1000.0);  // heavily penalized
}

TEST_CASE("oracle determinism and timestep accounting") {
  const LQRInstance inst = paper_instance();
  RolloutConfig cfg;
  cfg.trajectory_length = 123;
  cfg.trajectories = 3;
  CHECK(gibo::rollout_timesteps(cfg) == 369);
  gibo::SplitMix64 a(5), b(5);
  const Eigen::VectorXd theta = flatten_gain(inst.K_opt);
  CHECK(lqr_oracle(theta, inst, cfg, a) == lqr_oracle(theta, inst, cfg, b));
}

TEST_CASE("instance serialization round-trips") {
  const LQRInstance inst = paper_instance();
  const auto path = std::filesystem::temp_directory_path() / "gibo_lqr_test.json";
  gibo::save_instance(inst, path.string());
  const LQRInstance loaded = gibo::load_instance(path.string());
  CHECK((loaded.A - inst.A).cwiseAbs().maxCoeff() == 0.0);
  CHECK((loaded.P - inst.P).cwiseAbs().maxCoeff() == 0.0);
  CHECK((loaded.K_opt - inst.K_opt).cwiseAbs().maxCoeff() == 0.0);
  CHECK(loaded.J_opt == inst.J_opt);
  std::filesystem::remove(path);
}
