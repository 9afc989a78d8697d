#pragma once

#include "mm4mm/apps/common.hpp"
#include "mm4mm/apps/instances.hpp"
#include "mm4mm/engine.hpp"
#include "mm4mm/inner_solvers.hpp"

// A-optimal sensor orientation design: min Tr[(X' Sigma^{-1} X)^{-1}] over
// unit-norm rows. Max-min path: the PSD-cone dual
//   h(Z | X^t) = -2 sum_i ||Z w_i|| + Tr(Z W X^t) + 2 Tr(sqrt(Z)),
// W = (X^t)' Sigma^{-1}, is maximized by projected (sub)gradient ascent,
// then rows are updated to x_i = v_i / ||v_i|| with V = Z W.

namespace mm4mm::apps {

inline double placement_objective(const PlacementInstance& inst, const Matrix& x) {
  const Matrix c = x.transpose() * numerics::solve_hpd(inst.Sigma, Matrix(x));
  return numerics::solve_hpd(c, Matrix(Matrix::Identity(c.rows(), c.cols()))).trace();
}

// g(X, Z) = -Tr(Z X' Sigma^{-1} X) + 2 Tr(sqrt(Z)) over Z >= 0.
inline double placement_augmented(const PlacementInstance& inst, const Matrix& x,
                                  const Matrix& z) {
  const Matrix c = x.transpose() * numerics::solve_hpd(inst.Sigma, Matrix(x));
  return -(z * c).trace() + 2.0 * numerics::matrix_sqrt_psd(z).trace();
}

inline Matrix placement_argmax_z(const PlacementInstance& inst, const Matrix& x) {
  const Matrix c = x.transpose() * numerics::solve_hpd(inst.Sigma, Matrix(x));
  const Matrix ci = numerics::solve_hpd(c, Matrix(Matrix::Identity(c.rows(), c.cols())));
  return ci * ci;
}

inline Matrix placement_default_init(const PlacementInstance& inst, Rng& rng) {
  // random unit rows, redrawn until the row-space Gram matrix is comfortably
  // nonsingular so the first CRB evaluation is stable
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Matrix x = rng.gaussian_matrix(inst.M, inst.n);
    for (int i = 0; i < inst.M; ++i) x.row(i).normalize();
    auto ev = numerics::eig_hermitian(Matrix(x.transpose() * x)).eigenvalues;
    if (ev.minCoeff() > 0.05 * ev.maxCoeff()) return x;
  }
  throw std::runtime_error("placement_default_init: failed to draw a well-conditioned start");
}

// Dual over the flattened symmetric Z (packed column-major of the full
// matrix), for the gradient gate and the inner ascent. Subgradient
// convention: 0 at ||Z w_i|| = 0 kinks; Tr(sqrt(Z)) differentiated on the PD
// interior with a small ridge.
inline inner::SmoothProblem placement_dual_problem(const PlacementInstance& inst,
                                                   const Matrix& xt) {
  const Matrix w = xt.transpose() * numerics::solve_hpd(
                                        inst.Sigma, Matrix(Matrix::Identity(inst.M, inst.M)));
  const Matrix wxt = w * xt;
  const Eigen::Index n = inst.n;
  auto unflatten = [n](const Vector& v) {
    Matrix z(n, n);
    for (Eigen::Index j = 0, k = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) z(i, j) = v[k++];
    return Matrix(((z + z.transpose()) / 2.0).eval());
  };
  auto flatten = [n](const Matrix& z) {
    Vector v(n * n);
    for (Eigen::Index j = 0, k = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) v[k++] = z(i, j);
    return v;
  };
  inner::SmoothProblem p;
  p.sense = inner::Sense::maximize;
  p.value = [inst, w, wxt, unflatten](const Vector& v) {
    const Matrix z = unflatten(v);
    auto eig = numerics::eig_hermitian(z);
    if (eig.eigenvalues.minCoeff() < -1e-9 * std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff()))
      return -std::numeric_limits<double>::infinity();
    const double tr_sqrt = eig.eigenvalues.cwiseMax(0.0).cwiseSqrt().sum();
    const Matrix zw = z * w;
    double s = (z * wxt).trace() + 2.0 * tr_sqrt;
    for (Eigen::Index i = 0; i < inst.M; ++i) s -= 2.0 * zw.col(i).norm();
    return s;
  };
  p.gradient = [inst, w, wxt, unflatten, flatten](const Vector& v) {
    const Matrix z = unflatten(v);
    const Matrix zw = z * w;
    Matrix g = (wxt + wxt.transpose()) / 2.0;
    for (Eigen::Index i = 0; i < inst.M; ++i) {
      const double nrm = zw.col(i).norm();
      if (nrm > 1e-300) {
        const Vector u = zw.col(i) / nrm;
        g -= u * w.col(i).transpose() + w.col(i) * u.transpose();
      }
    }
    auto eig = numerics::eig_hermitian(z);
    const Vector lam = eig.eigenvalues.cwiseMax(1e-9);
    g += eig.eigenvectors * lam.cwiseSqrt().cwiseInverse().asDiagonal() *
         eig.eigenvectors.transpose();
    return flatten(Matrix(((g + g.transpose()) / 2.0).eval()));
  };
  p.project = [unflatten, flatten](const Vector& v) {
    return flatten(numerics::project_psd(unflatten(v)));
  };
  return p;
}

inline std::pair<Matrix, IterationTrace> solve_placement(const PlacementInstance& inst,
                                                         const Matrix& x0,
                                                         const SolverConfig& cfg) {
  inst.validate();
  if (x0.rows() != inst.M || x0.cols() != inst.n)
    throw std::invalid_argument("solve_placement: X0 must be M x n");
  for (int i = 0; i < inst.M; ++i)
    if (std::abs(x0.row(i).norm() - 1.0) > 1e-8)
      throw std::invalid_argument("solve_placement: X0 rows must be unit norm");
  {
    const Matrix c0 = x0.transpose() * numerics::solve_hpd(inst.Sigma, Matrix(x0));
    if (numerics::eig_hermitian(c0).eigenvalues.minCoeff() < 1e-12)
      throw std::domain_error(
          "solve_placement: X0' Sigma^{-1} X0 is singular; choose a different X0");
  }

  MmProblem<Matrix, Matrix> prob;
  auto objective = [inst](const Matrix& x) { return placement_objective(inst, x); };
  prob.objective = objective;

  const Eigen::Index n = inst.n;
  prob.dual_ascent = [inst, cfg, n](const Matrix& xt, StepInfo& info) {
    inner::SmoothProblem h = placement_dual_problem(inst, xt);
    // warm start at the touch maximizer (X' Sigma^{-1} X)^{-2}
    Vector z0(n * n);
    {
      const Matrix zh = placement_argmax_z(inst, xt);
      for (Eigen::Index j = 0, k = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) z0[k++] = zh(i, j);
    }
    auto res = inner::projected_gradient(h, z0, cfg.inner_tolerance,
                                         std::max(cfg.max_inner_iters, 800));
    info.inner_iters = res.iters;
    Matrix z(n, n);
    for (Eigen::Index j = 0, k = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) z(i, j) = res.x[k++];
    return Matrix(((z + z.transpose()) / 2.0).eval());
  };
  prob.surrogate_inner_min = [inst, objective](const Matrix& z, const Matrix& xt,
                                               StepInfo& info) {
    const Matrix w = xt.transpose() * numerics::solve_hpd(
                                          inst.Sigma, Matrix(Matrix::Identity(inst.M, inst.M)));
    const Matrix v = z * w;
    Matrix cand(inst.M, inst.n);
    for (int i = 0; i < inst.M; ++i) {
      const double nrm = v.col(i).norm();
      if (nrm < 1e-300) {
        cand.row(i) = xt.row(i);  // degenerate column: keep the old row
      } else {
        cand.row(i) = (v.col(i) / nrm).transpose();
      }
    }
    return guard_step<Matrix>(objective, xt, std::move(cand), info, "placement");
  };
  return engine::run_maxmin_mm(prob, x0, cfg);
}

}  // namespace mm4mm::apps
