#pragma once

#include <memory>

#include "mm4mm/apps/common.hpp"
#include "mm4mm/apps/instances.hpp"
#include "mm4mm/engine.hpp"

// Total variation filtering: min_x ||y - x||^2 + lambda ||D x||_1. The box
// dual is driven to its fixed point by the clipped MM update
// z <- clip(b), b = (2/(alpha lambda)) D y - (1/alpha) A z, A = DD' - alpha I,
// and the primal readout is x = y - (lambda/2) D' z.

namespace mm4mm::apps {

inline Matrix tv_difference_matrix(Eigen::Index n) {
  Matrix d = Matrix::Zero(n - 1, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    d(i, i) = -1.0;
    d(i, i + 1) = 1.0;
  }
  return d;
}

inline double tv_objective(const TvInstance& inst, const Vector& x) {
  const Matrix d = tv_difference_matrix(inst.y.size());
  return (inst.y - x).squaredNorm() + inst.lambda * (d * x).cwiseAbs().sum();
}

// g(x, z) = ||y - x||^2 + lambda z' D x over |z| <= 1.
inline double tv_augmented(const TvInstance& inst, const Vector& x, const Vector& z) {
  const Matrix d = tv_difference_matrix(inst.y.size());
  return (inst.y - x).squaredNorm() + inst.lambda * z.dot(d * x);
}

inline Vector tv_argmax_z(const TvInstance& inst, const Vector& x) {
  const Matrix d = tv_difference_matrix(inst.y.size());
  Vector dx = d * x;
  Vector z(dx.size());
  for (Eigen::Index i = 0; i < dx.size(); ++i) z[i] = dx[i] > 0 ? 1.0 : (dx[i] < 0 ? -1.0 : 0.0);
  return z;
}

inline std::pair<Vector, IterationTrace> solve_tv(const TvInstance& inst,
                                                  const SolverConfig& cfg) {
  inst.validate();
  const Eigen::Index n = inst.y.size();
  const Matrix d = tv_difference_matrix(n);
  const Matrix ddt = d * d.transpose();
  const double alpha = numerics::eig_hermitian(ddt).eigenvalues.maxCoeff();
  const Matrix a = ddt - alpha * Matrix::Identity(n - 1, n - 1);
  const Vector dy = d * inst.y;
  const double lambda = inst.lambda;

  auto x_of = [&inst, d, lambda](const Vector& z) {
    return Vector(inst.y - (lambda / 2.0) * (d.transpose() * z));
  };

  MmProblem<Vector, Vector> prob;
  prob.objective = [inst](const Vector& x) { return tv_objective(inst, x); };

  auto z_state = std::make_shared<Vector>(Vector::Zero(n - 1));
  // One outer step advances the dual MM chain to (near) its fixed point; the
  // chain is global, so it simply continues from the stored z.
  prob.dual_ascent = [z_state, a, dy, alpha, lambda, cfg](const Vector& /*xt*/,
                                                          StepInfo& info) {
    Vector z = *z_state;
    const int budget = std::max(cfg.max_inner_iters, 20000);
    for (int k = 0; k < budget; ++k) {
      Vector b = (2.0 / (alpha * lambda)) * dy - (a * z) / alpha;
      Vector zn = b.cwiseMax(-1.0).cwiseMin(1.0);
      const double move = (zn - z).cwiseAbs().maxCoeff();
      z = zn;
      ++info.inner_iters;
      if (move <= 1e-15 * (1.0 + z.cwiseAbs().maxCoeff())) break;
    }
    *z_state = z;
    return z;
  };
  prob.surrogate_inner_min = [x_of](const Vector& z, const Vector&, StepInfo&) { return x_of(z); };

  return engine::run_maxmin_mm(prob, x_of(*z_state), cfg);
}

}  // namespace mm4mm::apps
