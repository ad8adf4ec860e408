#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <vector>

namespace gibo {

/// Append-only list of (parameter point, noisy observation) pairs. Ordering is
/// preserved so that trailing windows of recent points are well defined.
class Dataset {
 public:
  Dataset() = default;

  void append(const Eigen::VectorXd& point, double target) {
    if (!points_.empty() && point.size() != points_.front().size()) {
      throw std::invalid_argument("Dataset: dimension mismatch on append");
    }
    points_.push_back(point);
    targets_.push_back(target);
  }

  int size() const { return static_cast<int>(points_.size()); }
  bool empty() const { return points_.empty(); }

  /// Dimension of the stored points; 0 while empty.
  int dim() const { return points_.empty() ? 0 : static_cast<int>(points_.front().size()); }

  const Eigen::VectorXd& point(int i) const { return points_.at(i); }
  double target(int i) const { return targets_.at(i); }

  /// Points as columns of a d x n matrix.
  Eigen::MatrixXd points_matrix() const {
    Eigen::MatrixXd m(dim(), size());
    for (int i = 0; i < size(); ++i) m.col(i) = points_[i];
    return m;
  }

  Eigen::VectorXd targets_vector() const {
    return Eigen::Map<const Eigen::VectorXd>(targets_.data(),
                                             static_cast<Eigen::Index>(targets_.size()));
  }

  /// The most recent min(count, size) entries, original order preserved.
  Dataset tail(int count) const {
    Dataset out;
    const int start = std::max(0, size() - count);
    for (int i = start; i < size(); ++i) out.append(points_[i], targets_[i]);
    return out;
  }

 private:
  std::vector<Eigen::VectorXd> points_;
  std::vector<double> targets_;
};

}  // namespace gibo
