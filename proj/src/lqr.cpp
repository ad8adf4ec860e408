#include "gibo/lqr.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <stdexcept>

#include "gibo/errors.hpp"

namespace gibo {

namespace {

void check_square(const Eigen::MatrixXd& m, const char* name) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(name) + " must be square");
  }
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    std::vector<double> row(m.cols());
    for (int j = 0; j < m.cols(); ++j) row[j] = m(i, j);
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  const int rows = static_cast<int>(j.size());
  const int cols = rows > 0 ? static_cast<int>(j.at(0).size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int c = 0; c < cols; ++c) m(i, c) = j.at(i).at(c).get<double>();
  }
  return m;
}

}  // namespace

LQRInstance make_instance(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                          const Eigen::MatrixXd& W) {
  check_square(A, "A");
  check_square(Q, "Q");
  check_square(R, "R");
  check_square(W, "W");
  if (B.rows() != A.rows()) throw std::invalid_argument("B row count must match A");
  LQRInstance inst;
  inst.A = A;
  inst.B = B;
  inst.Q = Q;
  inst.R = R;
  inst.W = W;
  std::tie(inst.P, inst.K_opt) = solve_dare(A, B, Q, R);
  inst.J_opt = (W * inst.P).trace();
  return inst;
}

LQRInstance paper_instance() {
  Eigen::MatrixXd a(3, 3);
  a << 1.01, 0.01, 0.00,
       0.01, 1.01, 0.01,
       0.00, 0.01, 1.01;
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(3, 3);
  return make_instance(a, eye, 1e-3 * eye, eye, eye);
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> solve_dare(const Eigen::MatrixXd& A,
                                                       const Eigen::MatrixXd& B,
                                                       const Eigen::MatrixXd& Q,
                                                       const Eigen::MatrixXd& R) {
  check_square(A, "A");
  const int n = static_cast<int>(A.rows());
  Eigen::LLT<Eigen::MatrixXd> r_llt(R);
  if (r_llt.info() != Eigen::Success) {
    throw std::invalid_argument("solve_dare: R must be positive definite");
  }

  // Structure-preserving doubling: quadratic convergence, robust for the
  // marginally unstable instances used here.
  Eigen::MatrixXd a_k = A;
  Eigen::MatrixXd g_k = B * r_llt.solve(B.transpose());
  Eigen::MatrixXd h_k = Q;
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  bool converged = false;
  constexpr int kMaxIterations = 200;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    const Eigen::PartialPivLU<Eigen::MatrixXd> w_lu(eye + g_k * h_k);
    const Eigen::MatrixXd v1 = w_lu.solve(a_k);
    const Eigen::MatrixXd v2 = w_lu.solve(g_k.transpose()).transpose();
    const Eigen::MatrixXd h_next = h_k + v1.transpose() * h_k * a_k;
    g_k += a_k * v2 * a_k.transpose();
    a_k *= v1;
    const double change = (h_next - h_k).cwiseAbs().maxCoeff();
    h_k = h_next;
    if (!h_k.allFinite()) break;
    if (change <= 1e-14 * std::max(1.0, h_k.cwiseAbs().maxCoeff())) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw StabilityError("solve_dare: iteration did not converge (not stabilizable?)");
  }
  const Eigen::MatrixXd p = 0.5 * (h_k + h_k.transpose());
  const Eigen::MatrixXd k =
      -(R + B.transpose() * p * B).ldlt().solve(B.transpose() * p * A);
  return {p, k};
}

Eigen::MatrixXd solve_dlyap(const Eigen::MatrixXd& A, const Eigen::MatrixXd& W) {
  check_square(A, "A");
  check_square(W, "W");
  if (spectral_radius(A) >= 1.0) {
    throw StabilityError("solve_dlyap: matrix is not stable");
  }
  const int n = static_cast<int>(A.rows());
  // vec(S) = (I - A kron A)^{-1} vec(W); small n keeps this exact and cheap.
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n * n, n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          system(i * n + j, k * n + l) -= A(i, k) * A(j, l);
        }
      }
    }
  }
  Eigen::VectorXd w_vec(n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) w_vec[i * n + j] = W(i, j);
  }
  const Eigen::VectorXd s_vec = system.fullPivLu().solve(w_vec);
  Eigen::MatrixXd s(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) s(i, j) = s_vec[i * n + j];
  }
  return 0.5 * (s + s.transpose());
}

double spectral_radius(const Eigen::MatrixXd& m) {
  check_square(m, "spectral_radius input");
  return m.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::VectorXd flatten_gain(const Eigen::MatrixXd& K) {
  Eigen::VectorXd theta(K.size());
  int idx = 0;
  for (int i = 0; i < K.rows(); ++i) {
    for (int j = 0; j < K.cols(); ++j) theta[idx++] = K(i, j);
  }
  return theta;
}

Eigen::MatrixXd unflatten_gain(const Eigen::VectorXd& theta, int input_dim,
                               int state_dim) {
  if (theta.size() != static_cast<Eigen::Index>(input_dim) * state_dim) {
    throw std::invalid_argument("unflatten_gain: length mismatch");
  }
  Eigen::MatrixXd k(input_dim, state_dim);
  int idx = 0;
  for (int i = 0; i < input_dim; ++i) {
    for (int j = 0; j < state_dim; ++j) k(i, j) = theta[idx++];
  }
  return k;
}

RelativeError relative_error(const Eigen::MatrixXd& K_hat, const LQRInstance& instance) {
  const Eigen::MatrixXd closed = instance.A + instance.B * K_hat;
  RelativeError out;
  if (spectral_radius(closed) >= 1.0) {
    out.value = std::numeric_limits<double>::infinity();
    out.stabilizing = false;
    return out;
  }
  const Eigen::MatrixXd stationary = solve_dlyap(closed, instance.W);
  const Eigen::MatrixXd diff = K_hat - instance.K_opt;
  const Eigen::MatrixXd weight =
      instance.R + instance.B.transpose() * instance.P * instance.B;
  const double gap = (stationary * diff.transpose() * weight * diff).trace();
  out.value = gap / instance.J_opt;
  out.stabilizing = true;
  return out;
}

RelativeError relative_error(const Eigen::VectorXd& theta, const LQRInstance& instance) {
  return relative_error(unflatten_gain(theta, instance.input_dim(), instance.state_dim()),
                        instance);
}

bool is_stabilizing(const Eigen::VectorXd& theta, const LQRInstance& instance) {
  const Eigen::MatrixXd k =
      unflatten_gain(theta, instance.input_dim(), instance.state_dim());
  return spectral_radius(instance.A + instance.B * k) < 1.0;
}

double lqr_oracle(const Eigen::VectorXd& theta, const LQRInstance& instance,
                  const RolloutConfig& config, SplitMix64& rng,
                  StateNormalizer* normalizer) {
  if (config.trajectory_length < 1 || config.trajectories < 1) {
    throw std::invalid_argument("lqr_oracle: rollout config must be positive");
  }
  const int n = instance.state_dim();
  const Eigen::MatrixXd k =
      unflatten_gain(theta, instance.input_dim(), instance.state_dim());
  // Process noise w ~ N(0, W) drawn through the Cholesky factor of W.
  Eigen::MatrixXd noise_factor;
  const bool noisy = instance.W.cwiseAbs().maxCoeff() > 0.0;
  if (noisy) {
    Eigen::LLT<Eigen::MatrixXd> llt(instance.W);
    if (llt.info() != Eigen::Success) {
      throw std::invalid_argument("lqr_oracle: W must be positive semidefinite");
    }
    noise_factor = llt.matrixL();
  }

  constexpr double kOverflowNorm = 1e12;
  double total = 0.0;
  for (int traj = 0; traj < config.trajectories; ++traj) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    double worst = 0.0;
    int steps_done = 0;
    for (int t = 0; t < config.trajectory_length; ++t) {
      const Eigen::VectorXd policy_state = normalizer ? (*normalizer)(x) : x;
      const Eigen::VectorXd u = k * policy_state;
      const double cost = x.dot(instance.Q * x) + u.dot(instance.R * u);
      const double reward = transformed_reward(cost);
      total += reward;
      worst = std::min(worst, reward);
      ++steps_done;
      x = instance.A * x + instance.B * u;
      if (noisy) x += noise_factor * normal_vector(rng, n);
      if (x.lpNorm<Eigen::Infinity>() > kOverflowNorm) break;
    }
    // Fill in truncated steps with the worst reward seen in this trajectory.
    total += worst * (config.trajectory_length - steps_done);
  }
  return total / static_cast<double>(config.trajectories);
}

void save_instance(const LQRInstance& instance, const std::string& path) {
  nlohmann::json j;
  j["kind"] = "lqr-instance";
  j["A"] = matrix_to_json(instance.A);
  j["B"] = matrix_to_json(instance.B);
  j["Q"] = matrix_to_json(instance.Q);
  j["R"] = matrix_to_json(instance.R);
  j["W"] = matrix_to_json(instance.W);
  j["P"] = matrix_to_json(instance.P);
  j["K_opt"] = matrix_to_json(instance.K_opt);
  j["J_opt"] = instance.J_opt;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_instance: cannot open " + path);
  out << j.dump(2) << "\n";
}

LQRInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_instance: cannot open " + path);
  nlohmann::json j;
  in >> j;
  if (j.value("kind", "") != "lqr-instance") {
    throw ParseError("load_instance: not an LQR instance file");
  }
  LQRInstance inst;
  inst.A = matrix_from_json(j.at("A"));
  inst.B = matrix_from_json(j.at("B"));
  inst.Q = matrix_from_json(j.at("Q"));
  inst.R = matrix_from_json(j.at("R"));
  inst.W = matrix_from_json(j.at("W"));
  inst.P = matrix_from_json(j.at("P"));
  inst.K_opt = matrix_from_json(j.at("K_opt"));
  inst.J_opt = j.at("J_opt").get<double>();
  return inst;
}

}  // namespace gibo
