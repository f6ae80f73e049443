#include "ncsattack/dmd.hpp"

#include <string>

#include "ncsattack/errors.hpp"

namespace ncsattack::dmd {

SnapshotBuffer::SnapshotBuffer(int width, int dim) : width_(width), dim_(dim) {
  if (width < 1) throw InvalidInput("snapshot width must be at least 1");
  if (dim < 1) throw InvalidInput("snapshot dimension must be at least 1");
}

void SnapshotBuffer::push(const Eigen::VectorXd& x) {
  if (x.size() != dim_)
    throw InvalidInput("snapshot has length " + std::to_string(x.size()) + ", expected " +
                       std::to_string(dim_));
  columns_.push_back(x);
  if (size() > width_ + 1) columns_.pop_front();
}

Eigen::MatrixXd SnapshotBuffer::X() const {
  const int w = std::max(0, size() - 1);
  Eigen::MatrixXd m(dim_, w);
  for (int c = 0; c < w; ++c) m.col(c) = columns_[c];
  return m;
}

Eigen::MatrixXd SnapshotBuffer::X_plus() const {
  const int w = std::max(0, size() - 1);
  Eigen::MatrixXd m(dim_, w);
  for (int c = 0; c < w; ++c) m.col(c) = columns_[c + 1];
  return m;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m, double svd_tol, int* rank) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? svd_tol * sv(0) : 0.0;
  int r = 0;
  while (r < sv.size() && sv(r) > cutoff) ++r;
  if (rank) *rank = r;
  if (r == 0) return Eigen::MatrixXd::Zero(m.cols(), m.rows());
  const Eigen::VectorXd inv = sv.head(r).cwiseInverse();
  return svd.matrixV().leftCols(r) * inv.asDiagonal() * svd.matrixU().leftCols(r).transpose();
}

DmdModel fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& X_plus, double svd_tol) {
  if (X.cols() < 1) throw InsufficientData("DMD fit needs at least two snapshots");
  if (X.rows() != X_plus.rows() || X.cols() != X_plus.cols())
    throw InvalidInput("X and X+ must have the same shape");
  DmdModel m;
  m.K = X_plus * pseudo_inverse(X, svd_tol, &m.rank_used);
  const double denom = X_plus.norm();
  m.residual = denom > 0.0 ? (X_plus - m.K * X).norm() / denom : 0.0;
  return m;
}

DmdModel fit(const SnapshotBuffer& buf, double svd_tol) {
  if (!buf.fittable()) throw InsufficientData("DMD fit needs at least two snapshots");
  return fit(buf.X(), buf.X_plus(), svd_tol);
}

Eigen::VectorXd predict(const DmdModel& m, const Eigen::VectorXd& x) {
  if (x.size() != m.K.cols()) throw InvalidInput("state length does not match the DMD model");
  return m.K * x;
}

}  // namespace ncsattack::dmd
