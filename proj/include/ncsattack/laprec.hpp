#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ncsattack/graph.hpp"

namespace ncsattack::laprec {

/// K ~ S + T (x) L with S block-diagonal (one block per agent), T a
/// per-agent block and L a candidate Laplacian. The coupling term is laid
/// out agent-major: block (i,j) equals L(i,j) * T.
struct KroneckerModel {
  Eigen::MatrixXd S;
  Eigen::MatrixXd T;
  Eigen::MatrixXd L;
};

struct StepResult {
  Eigen::MatrixXd factor;
  /// Set when the normal equations were singular and a 1e-12 ridge was used.
  bool regularized = false;
};

struct RecoveryIterate {
  int iteration = 0;
  double frobenius_residual = 0.0;
  double gamma = 0.0;
  double best_gamma = 0.0;
};

struct RecoveryResult {
  KroneckerModel model;
  /// Spectral norm of K - (S + T (x) L) at the returned iterate.
  double gamma = 0.0;
  double frobenius_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  bool regularized = false;
  std::vector<RecoveryIterate> trace;
};

struct RecoveryOptions {
  double threshold = 1e-6;
  int max_iters = 100;
  std::uint64_t seed = 0;
  int block_size = 4;
};

/// Nearest symmetric, zero-row-sum, positive semi-definite matrix (Frobenius).
Eigen::MatrixXd project_laplacian_cone(const Eigen::MatrixXd& m);

/// Coupling term with block (i,j) = L(i,j) T.
Eigen::MatrixXd coupling_product(const Eigen::MatrixXd& T, const Eigen::MatrixXd& L);

/// Residual K - (S + T (x) L).
Eigen::MatrixXd residual(const Eigen::MatrixXd& K, const KroneckerModel& m);

/// Closed form: the diagonal blocks of K - T (x) L.
Eigen::MatrixXd solve_s_step(const Eigen::MatrixXd& K, const Eigen::MatrixXd& T,
                             const Eigen::MatrixXd& L);

/// Least-squares T given S and L.
StepResult solve_t_step(const Eigen::MatrixXd& K, const Eigen::MatrixXd& S,
                        const Eigen::MatrixXd& L);

/// Least-squares L given S and T, followed by the cone projection.
StepResult solve_l_step(const Eigen::MatrixXd& K, const Eigen::MatrixXd& S,
                        const Eigen::MatrixXd& T);

/// Alternating minimization from a seeded start until the spectral residual
/// stops improving by more than the threshold (or reaches it).
RecoveryResult recover(const Eigen::MatrixXd& K, const RecoveryOptions& opts = {});

/// The 2n x 2n matrix [gamma I, R; R^T, gamma I] is positive semi-definite.
/// Equivalent to gamma >= ||R||_2.
bool schur_certificate_holds(const Eigen::MatrixXd& residual, double gamma, double tol = 0.0);

/// Edges where L(i,j) < -0.5 * max |off-diagonal|.
graph::Graph recovered_graph(const Eigen::MatrixXd& L);

}  // namespace ncsattack::laprec
