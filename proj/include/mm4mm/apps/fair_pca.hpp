#pragma once

#include "mm4mm/apps/common.hpp"
#include "mm4mm/apps/instances.hpp"
#include "mm4mm/engine.hpp"
#include "mm4mm/inner_solvers.hpp"

// Fair PCA: maximize min_k Tr(X' C_k X) over X'X = I. Max-min on the
// linearized minorizer: the simplex weight problem
//   min_z 2 sum_i sigma_i(A(z)) + z'd,  A(z) = sum_k z_k C_k X^t,
// is solved by projected subgradient (thin-SVD subgradient) refined by a
// deterministic polish (golden section for K = 2, shrinking barycentric
// pattern otherwise), then X = polar factor of A(z).

namespace mm4mm::apps {

inline double fair_pca_min_variance(const FairPcaInstance& inst, const Matrix& x) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : inst.C) m = std::min(m, (x.transpose() * c * x).trace());
  return m;
}

// Engine objective is the paper's minimization sense.
inline double fair_pca_objective(const FairPcaInstance& inst, const Matrix& x) {
  return -fair_pca_min_variance(inst, x);
}

// g(X, z) = sum_k z_k Tr(X' C_k X) over the simplex (the worst-case weights).
inline double fair_pca_augmented(const FairPcaInstance& inst, const Matrix& x, const Vector& z) {
  double s = 0.0;
  for (size_t k = 0; k < inst.C.size(); ++k)
    s += z[static_cast<Eigen::Index>(k)] * (x.transpose() * inst.C[k] * x).trace();
  return s;
}

// Minimizing weights of g(X, .): the indicator of the argmin class (uniform
// over ties).
inline Vector fair_pca_argmin_z(const FairPcaInstance& inst, const Matrix& x) {
  const Eigen::Index K = static_cast<Eigen::Index>(inst.C.size());
  Vector vals(K);
  for (Eigen::Index k = 0; k < K; ++k) vals[k] = (x.transpose() * inst.C[k] * x).trace();
  const double m = vals.minCoeff();
  Vector z = Vector::Zero(K);
  int ties = 0;
  for (Eigen::Index k = 0; k < K; ++k)
    if (vals[k] == m) ++ties;
  for (Eigen::Index k = 0; k < K; ++k)
    if (vals[k] == m) z[k] = 1.0 / ties;
  return z;
}

inline Matrix fair_pca_default_init(const FairPcaInstance& inst) {
  const Eigen::Index n = inst.C[0].rows();
  Matrix mean = Matrix::Zero(n, n);
  for (const auto& c : inst.C) mean += c;
  mean /= static_cast<double>(inst.C.size());
  auto eig = numerics::eig_hermitian(mean);
  return eig.eigenvectors.rightCols(inst.r);
}

// Polar factor A (A'A)^{-1/2} via SVD; directions of vanishing singular
// values are dropped (completed to an orthonormal frame by the SVD basis).
inline Matrix polar_factor(const Matrix& a, bool* degenerate = nullptr) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (degenerate != nullptr)
    *degenerate = svd.singularValues().minCoeff() < 1e-12 * svd.singularValues().maxCoeff();
  return svd.matrixU() * svd.matrixV().transpose();
}

// The simplex weight subproblem phi(z) = 2 ||A(z)||_* + z'd at X^t; exposed
// for the gradient gate (smooth wherever the singular values are simple).
inline inner::SmoothProblem fair_pca_weight_problem(const FairPcaInstance& inst,
                                                    const Matrix& xt) {
  const Eigen::Index K = static_cast<Eigen::Index>(inst.C.size());
  std::vector<Matrix> cx(inst.C.size());
  Vector d(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    cx[k] = inst.C[k] * xt;
    d[k] = -(xt.transpose() * inst.C[k] * xt).trace();
  }
  inner::SmoothProblem p;
  p.value = [cx, d, K](const Vector& z) {
    Matrix a = Matrix::Zero(cx[0].rows(), cx[0].cols());
    for (Eigen::Index k = 0; k < K; ++k) a += z[k] * cx[k];
    Eigen::JacobiSVD<Matrix> svd(a);
    return 2.0 * svd.singularValues().sum() + z.dot(d);
  };
  p.gradient = [cx, d, K](const Vector& z) {
    Matrix a = Matrix::Zero(cx[0].rows(), cx[0].cols());
    for (Eigen::Index k = 0; k < K; ++k) a += z[k] * cx[k];
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Matrix uv = svd.matrixU() * svd.matrixV().transpose();
    Vector g(K);
    for (Eigen::Index k = 0; k < K; ++k) g[k] = 2.0 * (uv.array() * cx[k].array()).sum() + d[k];
    return g;
  };
  p.project = [](const Vector& z) { return numerics::project_simplex(z); };
  return p;
}

inline std::pair<Matrix, IterationTrace> solve_fair_pca(const FairPcaInstance& inst,
                                                        const Matrix& x0,
                                                        const SolverConfig& cfg) {
  inst.validate();
  const Eigen::Index n = inst.C[0].rows();
  if (x0.rows() != n || x0.cols() != inst.r)
    throw std::invalid_argument("solve_fair_pca: X0 must be n x r");
  if ((x0.transpose() * x0 - Matrix::Identity(inst.r, inst.r)).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument("solve_fair_pca: X0 must have orthonormal columns");
  const int K = static_cast<int>(inst.C.size());

  MmProblem<Matrix, Vector> prob;
  auto objective = [inst](const Matrix& x) { return fair_pca_objective(inst, x); };
  prob.objective = objective;

  prob.dual_ascent = [inst, cfg, K](const Matrix& xt, StepInfo& info) {
    if (K == 1) return Vector(Vector::Ones(1));
    inner::SmoothProblem phi = fair_pca_weight_problem(inst, xt);
    // subgradient pass with diminishing steps, tracking the best iterate
    Vector z = Vector::Constant(K, 1.0 / K);
    Vector best = z;
    double fbest = phi.value(z);
    const int sub_iters = std::max(cfg.max_inner_iters, 200);
    for (int it = 1; it <= sub_iters; ++it) {
      Vector g = phi.gradient(z);
      const double gn = g.norm();
      if (gn < 1e-300) break;
      z = numerics::project_simplex(z - (0.5 / std::sqrt(double(it))) * g / gn);
      const double fz = phi.value(z);
      ++info.inner_iters;
      if (fz < fbest) {
        fbest = fz;
        best = z;
      }
    }
    // deterministic polish around the subgradient incumbent
    if (K == 2) {
      const double s = inner::golden_section_min(
          [&phi](double t) {
            Vector v(2);
            v << t, 1.0 - t;
            return phi.value(v);
          },
          0.0, 1.0);
      Vector cand(2);
      cand << s, 1.0 - s;
      if (phi.value(cand) < fbest) best = cand;
    } else {
      Vector cand = inner::simplex_pattern_min(phi.value, K, best);
      if (phi.value(cand) < fbest) best = cand;
    }
    return best;
  };
  prob.surrogate_inner_min = [inst, objective, K](const Vector& z, const Matrix& xt,
                                                  StepInfo& info) {
    Matrix a = Matrix::Zero(xt.rows(), xt.cols());
    for (int k = 0; k < K; ++k) a += z[k] * (inst.C[k] * xt);
    bool degenerate = false;
    Matrix cand = polar_factor(a, &degenerate);
    if (degenerate) info.warnings.push_back("fair_pca: A'A singular at the polar step");
    return guard_step<Matrix>(objective, xt, std::move(cand), info, "fair_pca");
  };
  return engine::run_maxmin_mm(prob, x0, cfg);
}

}  // namespace mm4mm::apps
