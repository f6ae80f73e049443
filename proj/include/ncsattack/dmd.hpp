#pragma once

#include <deque>

#include <Eigen/Dense>

namespace ncsattack::dmd {

inline constexpr double kDefaultSvdTol = 1e-10;
inline constexpr int kDefaultWidth = 50;

/// Rolling window of eavesdropped stacked states. Holds at most width + 1
/// columns so that X and X+ are both dim x width when full.
class SnapshotBuffer {
 public:
  SnapshotBuffer(int width, int dim);

  /// Appends x, evicting the oldest column past capacity. Throws
  /// InvalidInput on a dimension mismatch.
  void push(const Eigen::VectorXd& x);

  int width() const noexcept { return width_; }
  int dim() const noexcept { return dim_; }
  int size() const noexcept { return static_cast<int>(columns_.size()); }
  bool full() const noexcept { return size() == width_ + 1; }
  bool fittable() const noexcept { return size() >= 2; }

  /// Columns 1..n-1 and 2..n of the retained window.
  Eigen::MatrixXd X() const;
  Eigen::MatrixXd X_plus() const;
  const Eigen::VectorXd& column(int i) const { return columns_[i]; }

 private:
  int width_;
  int dim_;
  std::deque<Eigen::VectorXd> columns_;
};

struct DmdModel {
  Eigen::MatrixXd K;
  /// ||X+ - K X||_F / ||X+||_F (0 when X+ is zero).
  double residual = 0.0;
  int rank_used = 0;
};

/// Truncated pseudoinverse: singular values below svd_tol * sigma_max are dropped.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m, double svd_tol, int* rank = nullptr);

/// K = X+ pinv(X). Throws InsufficientData with fewer than two columns.
DmdModel fit(const SnapshotBuffer& buf, double svd_tol = kDefaultSvdTol);

/// Same fit on explicit snapshot matrices of equal shape.
DmdModel fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& X_plus,
             double svd_tol = kDefaultSvdTol);

/// K x. Throws InvalidInput on a dimension mismatch.
Eigen::VectorXd predict(const DmdModel& m, const Eigen::VectorXd& x);

}  // namespace ncsattack::dmd
