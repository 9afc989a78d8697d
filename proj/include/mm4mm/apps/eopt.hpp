#pragma once

#include "mm4mm/apps/common.hpp"
#include "mm4mm/apps/instances.hpp"
#include "mm4mm/engine.hpp"

// E-optimal experiment design: min over simplex weights p of
// lambda_max[(A P A')^{-1}]. Lagrangian max-min on the scaled variables
// x = alpha p: B^t = (A X^t A')^{-1} A X^t, the PSD multiplier is driven by
// the inner MM update Z <- sum_i b_i b_i' Z / ||Z' b_i|| (cold-started at I
// each outer step), then x_i = ||Z' b_i|| and p = x / sum(x).

namespace mm4mm::apps {

inline double eopt_weight_objective(const EoptInstance& inst, const Vector& p) {
  const Matrix cov = inst.A * p.asDiagonal() * inst.A.transpose();
  const double lmin = numerics::eig_hermitian(cov).eigenvalues.minCoeff();
  if (lmin <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / lmin;
}

// g_s(x, Zbar | x^t) = sum_i x_i + Tr(Zbar B^t X^{-1} (B^t)') - Tr(Zbar).
inline double eopt_surrogate(const EoptInstance& inst, const Vector& x, const Vector& xt,
                             const Matrix& zbar) {
  const Matrix axat = inst.A * xt.asDiagonal() * inst.A.transpose();
  const Matrix b = numerics::solve_hpd(axat, Matrix(inst.A * xt.asDiagonal()));
  double s = x.sum() - zbar.trace();
  for (Eigen::Index i = 0; i < x.size(); ++i)
    s += b.col(i).dot(zbar * b.col(i)) / x[i];
  return s;
}

inline std::pair<Vector, IterationTrace> solve_eopt(const EoptInstance& inst, const Vector& p0,
                                                    const SolverConfig& cfg) {
  inst.validate();
  const Eigen::Index M = inst.A.cols();
  if (p0.size() != M || p0.minCoeff() <= 0.0 || std::abs(p0.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("solve_eopt: p0 must be strictly positive on the simplex");

  // engine state is the scaled x = alpha p, started on the constraint
  // boundary lambda_min(A X A') = 1
  const double alpha0 = eopt_weight_objective(inst, p0);
  Vector x0 = alpha0 * p0;

  MmProblem<Vector, Matrix> prob;
  auto objective = [inst](const Vector& x) {
    return eopt_weight_objective(inst, Vector(x / x.sum()));
  };
  prob.objective = objective;

  prob.dual_ascent = [inst, cfg](const Vector& xt, StepInfo& info) {
    const Eigen::Index n = inst.A.rows();
    const Matrix axat = inst.A * xt.asDiagonal() * inst.A.transpose();
    const Matrix b = numerics::solve_hpd(axat, Matrix(inst.A * xt.asDiagonal()));
    Matrix z = Matrix::Identity(n, n);
    auto h_of = [&b](const Matrix& zf) {
      const Matrix zbar = zf * zf.transpose();
      double s = -zbar.trace();
      for (Eigen::Index i = 0; i < b.cols(); ++i)
        s += 2.0 * std::sqrt(std::max(b.col(i).dot(zbar * b.col(i)), 0.0));
      return s;
    };
    double h_prev = h_of(z);
    for (int k = 0; k < std::max(cfg.max_inner_iters, 400); ++k) {
      Matrix znew = Matrix::Zero(n, n);
      for (Eigen::Index i = 0; i < b.cols(); ++i) {
        const double nrm = std::max((z.transpose() * b.col(i)).norm(), 1e-300);
        znew += (b.col(i) * (b.col(i).transpose() * z)) / nrm;
      }
      z = znew;
      ++info.inner_iters;
      const double h = h_of(z);
      if (std::abs(h - h_prev) <= cfg.inner_tolerance * std::max(1.0, std::abs(h_prev))) break;
      h_prev = h;
    }
    return Matrix(z * z.transpose());
  };
  prob.surrogate_inner_min = [inst, objective, cfg](const Matrix& zbar, const Vector& xt,
                                                    StepInfo& info) {
    const Matrix axat = inst.A * xt.asDiagonal() * inst.A.transpose();
    const Matrix b = numerics::solve_hpd(axat, Matrix(inst.A * xt.asDiagonal()));
    Vector cand(xt.size());
    bool floored = false;
    for (Eigen::Index i = 0; i < xt.size(); ++i) {
      cand[i] = std::sqrt(std::max(b.col(i).dot(zbar * b.col(i)), 0.0));
      if (cand[i] < 1e-14) {
        cand[i] = 1e-14;  // weight floor, then renormalized by the readout
        floored = true;
      }
    }
    if (floored) info.warnings.push_back("eopt: weight floored at 1e-14");
    return guard_step<Vector>(objective, xt, std::move(cand), info, "eopt");
  };

  auto [x_hat, trace] = engine::run_maxmin_mm(prob, x0, cfg);
  return {Vector(x_hat / x_hat.sum()), std::move(trace)};
}

}  // namespace mm4mm::apps
