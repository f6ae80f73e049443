#include "ncsattack/laprec.hpp"

#include <limits>
#include <random>
#include <string>

#include "ncsattack/errors.hpp"

namespace ncsattack::laprec {

namespace {

constexpr double kRidge = 1e-12;
constexpr double kConeTol = 1e-10;
constexpr int kConeMaxPasses = 100;

struct Blocks {
  int n;  // agents
  int b;  // block size
};

Blocks block_shape(const Eigen::MatrixXd& K, const Eigen::MatrixXd& T) {
  if (K.rows() != K.cols()) throw InvalidInput("K must be square");
  if (T.rows() != T.cols() || T.rows() < 1) throw InvalidInput("T must be square");
  const auto b = T.rows();
  if (K.rows() % b != 0) throw InvalidInput("K side is not a multiple of the block size");
  return {static_cast<int>(K.rows() / b), static_cast<int>(b)};
}

auto block(const Eigen::MatrixXd& m, int i, int j, int b) { return m.block(i * b, j * b, b, b); }

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

/// Off-diagonal-block residual: the part S cannot absorb.
double offdiag_residual(const Eigen::MatrixXd& K, const Eigen::MatrixXd& T,
                        const Eigen::MatrixXd& L, Blocks s) {
  double acc = 0.0;
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j)
      if (i != j) acc += (block(K, i, j, s.b) - L(i, j) * T).squaredNorm();
  return acc;
}

struct ProfiledL {
  Eigen::MatrixXd L;
  Eigen::MatrixXd T;
  bool regularized = false;
};

// L given T with the block-diagonal S eliminated: only off-diagonal blocks
// constrain L, its diagonal follows from the zero row sums. The sign of the
// (T, L) pair is not identifiable, so both orientations are tried.
ProfiledL profiled_l_step(const Eigen::MatrixXd& K, const Eigen::MatrixXd& T, Blocks s) {
  ProfiledL out;
  double tt = T.squaredNorm();
  if (tt < kRidge) {
    tt += kRidge;
    out.regularized = true;
  }
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(s.n, s.n);
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j)
      if (i != j) g(i, j) = (block(K, i, j, s.b).array() * T.array()).sum();
  Eigen::MatrixXd ls = (g + g.transpose()) / (2.0 * tt);
  ls.diagonal() = -ls.rowwise().sum();

  Eigen::MatrixXd plus = project_laplacian_cone(ls);
  Eigen::MatrixXd minus = project_laplacian_cone(-ls);
  if (offdiag_residual(K, -T, minus, s) < offdiag_residual(K, T, plus, s)) {
    out.L = std::move(minus);
    out.T = -T;
  } else {
    out.L = std::move(plus);
    out.T = T;
  }
  return out;
}

// T given L with S eliminated.
StepResult profiled_t_step(const Eigen::MatrixXd& K, const Eigen::MatrixXd& L, Blocks s) {
  StepResult out;
  Eigen::MatrixXd num = Eigen::MatrixXd::Zero(s.b, s.b);
  double den = 0.0;
  for (int i = 0; i < s.n; ++i) {
    for (int j = 0; j < s.n; ++j) {
      if (i == j) continue;
      num += L(i, j) * block(K, i, j, s.b);
      den += L(i, j) * L(i, j);
    }
  }
  if (den < kRidge) {
    den += kRidge;
    out.regularized = true;
  }
  out.factor = num / den;
  return out;
}

}  // namespace

Eigen::MatrixXd project_laplacian_cone(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw InvalidInput("cone projection needs a square matrix");
  const auto n = m.rows();
  if (n == 0) return m;
  const Eigen::MatrixXd P =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  Eigen::MatrixXd x = m;
  for (int pass = 0; pass < kConeMaxPasses; ++pass) {
    Eigen::MatrixXd y = 0.5 * (x + x.transpose());
    y = P * y * P;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(y);
    const Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(0.0);
    y = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
    y = 0.5 * (y + y.transpose());
    const double change = (y - x).norm();
    x = std::move(y);
    if (pass > 0 && change <= kConeTol * std::max(1.0, x.norm())) break;
  }
  return x;
}

Eigen::MatrixXd coupling_product(const Eigen::MatrixXd& T, const Eigen::MatrixXd& L) {
  const auto b = T.rows();
  const auto n = L.rows();
  Eigen::MatrixXd out(n * b, n * b);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out.block(i * b, j * b, b, b) = L(i, j) * T;
  return out;
}

Eigen::MatrixXd residual(const Eigen::MatrixXd& K, const KroneckerModel& m) {
  return K - m.S - coupling_product(m.T, m.L);
}

Eigen::MatrixXd solve_s_step(const Eigen::MatrixXd& K, const Eigen::MatrixXd& T,
                             const Eigen::MatrixXd& L) {
  const Blocks s = block_shape(K, T);
  if (L.rows() != s.n || L.cols() != s.n) throw InvalidInput("L has the wrong size");
  const Eigen::MatrixXd diff = K - coupling_product(T, L);
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(K.rows(), K.cols());
  for (int i = 0; i < s.n; ++i) S.block(i * s.b, i * s.b, s.b, s.b) = block(diff, i, i, s.b);
  return S;
}

StepResult solve_t_step(const Eigen::MatrixXd& K, const Eigen::MatrixXd& S,
                        const Eigen::MatrixXd& L) {
  if (L.rows() != L.cols() || L.rows() < 1 || K.rows() % L.rows() != 0)
    throw InvalidInput("L size does not divide K");
  if (S.rows() != K.rows() || S.cols() != K.cols()) throw InvalidInput("S must match K");
  const int n = static_cast<int>(L.rows());
  const int b = static_cast<int>(K.rows() / n);
  const Eigen::MatrixXd M = K - S;
  StepResult out;
  Eigen::MatrixXd num = Eigen::MatrixXd::Zero(b, b);
  double den = L.squaredNorm();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) num += L(i, j) * block(M, i, j, b);
  if (den < kRidge) {
    den += kRidge;
    out.regularized = true;
  }
  out.factor = num / den;
  return out;
}

StepResult solve_l_step(const Eigen::MatrixXd& K, const Eigen::MatrixXd& S,
                        const Eigen::MatrixXd& T) {
  const Blocks s = block_shape(K, T);
  if (S.rows() != K.rows() || S.cols() != K.cols()) throw InvalidInput("S must match K");
  const Eigen::MatrixXd M = K - S;
  StepResult out;
  double tt = T.squaredNorm();
  if (tt < kRidge) {
    tt += kRidge;
    out.regularized = true;
  }
  Eigen::MatrixXd ls(s.n, s.n);
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j) ls(i, j) = (block(M, i, j, s.b).array() * T.array()).sum() / tt;
  // Every entry carries the same weight ||T||^2, so the constrained minimizer
  // is the Frobenius projection of the unconstrained one.
  out.factor = project_laplacian_cone(ls);
  return out;
}

RecoveryResult recover(const Eigen::MatrixXd& K, const RecoveryOptions& opts) {
  if (opts.block_size < 1) throw InvalidInput("block size must be positive");
  if (K.rows() != K.cols() || K.rows() == 0 || K.rows() % opts.block_size != 0)
    throw InvalidInput("K must be square with a side divisible by " + std::to_string(opts.block_size));
  const Blocks s{static_cast<int>(K.rows() / opts.block_size), opts.block_size};

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> scale(0.5, 1.5);
  std::normal_distribution<double> normal(0.0, 1.0);

  KroneckerModel m;
  m.S = Eigen::MatrixXd::Zero(K.rows(), K.cols());
  for (int i = 0; i < s.n; ++i) m.S.block(i * s.b, i * s.b, s.b, s.b) = block(K, i, i, s.b);
  m.T = scale(rng) * Eigen::MatrixXd::Identity(s.b, s.b);
  Eigen::MatrixXd r(s.n, s.n);
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j) r(i, j) = normal(rng);
  m.L = project_laplacian_cone(r + r.transpose());

  RecoveryResult out;
  out.model = m;
  {
    const Eigen::MatrixXd res = residual(K, m);
    out.gamma = spectral_norm(res);
    out.frobenius_residual = res.norm();
  }
  double best = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= opts.max_iters; ++it) {
    auto lstep = profiled_l_step(K, m.T, s);
    m.L = std::move(lstep.L);
    m.T = std::move(lstep.T);
    m.S = solve_s_step(K, m.T, m.L);
    auto tstep = profiled_t_step(K, m.L, s);
    m.T = std::move(tstep.factor);
    m.S = solve_s_step(K, m.T, m.L);
    out.regularized = out.regularized || lstep.regularized || tstep.regularized;

    const Eigen::MatrixXd res = residual(K, m);
    const double gamma = spectral_norm(res);
    const double previous_best = best;
    if (gamma < best) {
      best = gamma;
      out.model = m;
      out.gamma = gamma;
      out.frobenius_residual = res.norm();
    }
    out.iterations = it;
    out.trace.push_back({it, res.norm(), gamma, best});

    if (gamma <= opts.threshold || previous_best - gamma < opts.threshold) {
      out.converged = true;
      break;
    }
  }
  return out;
}

bool schur_certificate_holds(const Eigen::MatrixXd& res, double gamma, double tol) {
  const auto m = res.rows();
  const auto n = res.cols();
  Eigen::MatrixXd big(m + n, m + n);
  big.topLeftCorner(m, m) = gamma * Eigen::MatrixXd::Identity(m, m);
  big.topRightCorner(m, n) = res;
  big.bottomLeftCorner(n, m) = res.transpose();
  big.bottomRightCorner(n, n) = gamma * Eigen::MatrixXd::Identity(n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(big, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0) >= -tol;
}

graph::Graph recovered_graph(const Eigen::MatrixXd& L) {
  if (L.rows() != L.cols() || L.rows() < 1) throw InvalidInput("L must be square");
  const int n = static_cast<int>(L.rows());
  const Eigen::MatrixXd sym = 0.5 * (L + L.transpose());
  double max_off = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) max_off = std::max(max_off, std::abs(sym(i, j)));
  std::vector<graph::Edge> edges;
  if (max_off > 0.0) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (sym(i, j) < -0.5 * max_off) edges.emplace_back(i, j);
  }
  return graph::Graph(n, std::move(edges));
}

}  // namespace ncsattack::laprec
