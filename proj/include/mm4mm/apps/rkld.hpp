#pragma once

#include <limits>

#include "mm4mm/apps/common.hpp"
#include "mm4mm/apps/instances.hpp"
#include "mm4mm/engine.hpp"
#include "mm4mm/inner_solvers.hpp"

// Outlier-robust phase retrieval with the reverse KL divergence loss,
//   min_x sum_i [ u_i log(u_i / y_i) - (u_i - y_i) ],  u_i = |a_i^H x|^2.
// Max-min path only: the dual h(z | x^t) = b_t^H (A^H Z A)^{-1} b_t
// + sum_i y_i e^{z_i - 1} is minimized over z > 0 by log-reparameterized
// gradient descent, then x = (A^H Z A)^{-1} b_t.

namespace mm4mm::apps {

inline double rkld_objective(const RkldInstance& inst, const CVector& x) {
  const Vector u = (inst.A * x).cwiseAbs2();
  double s = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u[i] > 0.0) s += u[i] * std::log(u[i] / inst.y[i]);
    s += -(u[i] - inst.y[i]);
  }
  return s;
}

// g(x, z) = sum_i [ z_i |a_i^H x|^2 - y_i e^{z_i - 1} - |a_i^H x|^2 + y_i ].
inline double rkld_augmented(const RkldInstance& inst, const CVector& x, const Vector& z) {
  const Vector u = (inst.A * x).cwiseAbs2();
  double s = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i)
    s += z[i] * u[i] - inst.y[i] * std::exp(z[i] - 1.0) - u[i] + inst.y[i];
  return s;
}

inline Vector rkld_argmax_z(const RkldInstance& inst, const CVector& x) {
  const Vector u = (inst.A * x).cwiseAbs2();
  Vector z(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i)
    z[i] = std::log(std::max(u[i], 1e-300) / inst.y[i]) + 1.0;
  return z;
}

inline CVector rkld_default_init(const RkldInstance& inst) {
  const CMatrix s = inst.A.adjoint() * inst.y.asDiagonal() * inst.A;
  auto eig = numerics::eig_hermitian(s);
  CVector v = eig.eigenvectors.col(eig.eigenvectors.cols() - 1);
  const double pred = (inst.A * v).cwiseAbs2().mean();
  return std::sqrt(std::max(inst.y.mean(), 1e-12) / std::max(pred, 1e-300)) * v;
}

// Dual restricted to z > 0 (b_t = A^H A x^t fixed); exposed for the gradient
// gate. The gradient of the quadratic term in z_i is -|a_i^H (A^H Z A)^{-1} b_t|^2.
inline inner::SmoothProblem rkld_dual_problem(const RkldInstance& inst, const CVector& xt) {
  const CVector bt = inst.A.adjoint() * (inst.A * xt);
  inner::SmoothProblem h;
  h.value = [inst, bt](const Vector& z) {
    if (z.minCoeff() <= 0.0) return std::numeric_limits<double>::infinity();
    const CMatrix m = inst.A.adjoint() * z.asDiagonal() * inst.A;
    Eigen::LLT<CMatrix> llt(m);
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    double s = std::real(bt.dot(llt.solve(bt)));
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double e = inst.y[i] * std::exp(z[i] - 1.0);
      if (!std::isfinite(e)) return std::numeric_limits<double>::infinity();
      s += e;
    }
    return s;
  };
  h.gradient = [inst, bt](const Vector& z) {
    const CMatrix m = inst.A.adjoint() * z.asDiagonal() * inst.A;
    const CVector s = numerics::solve_hpd(m, bt);
    const Vector as = (inst.A * s).cwiseAbs2();
    Vector g(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i)
      g[i] = -as[i] + inst.y[i] * std::exp(z[i] - 1.0);
    return g;
  };
  return h;
}

inline std::pair<CVector, IterationTrace> solve_rkld_pr(const RkldInstance& inst,
                                                        const CVector& x0,
                                                        const SolverConfig& cfg) {
  inst.validate();
  MmProblem<CVector, Vector> prob;
  auto objective = [inst](const CVector& x) { return rkld_objective(inst, x); };
  prob.objective = objective;

  prob.dual_ascent = [inst, cfg](const CVector& xt, StepInfo& info) {
    inner::SmoothProblem h = rkld_dual_problem(inst, xt);
    inner::SmoothProblem hu = inner::log_reparam(h);  // z = exp(u), u free
    Vector z0 = rkld_argmax_z(inst, xt).cwiseMax(1e-8);
    auto res = inner::projected_gradient(hu, z0.array().log().matrix(), cfg.inner_tolerance,
                                         std::max(cfg.max_inner_iters, 400));
    info.inner_iters = res.iters;
    return Vector(res.x.array().exp().matrix());
  };
  prob.surrogate_inner_min = [inst, objective](const Vector& z, const CVector& xt,
                                               StepInfo& info) {
    const CVector bt = inst.A.adjoint() * (inst.A * xt);
    const CMatrix m = inst.A.adjoint() * z.asDiagonal() * inst.A;
    CVector cand = numerics::solve_hpd(m, bt);
    return guard_step<CVector>(objective, xt, std::move(cand), info, "rkld");
  };
  return engine::run_maxmin_mm(prob, x0, cfg);
}

}  // namespace mm4mm::apps
