#pragma once

#include <limits>

#include "mm4mm/apps/common.hpp"
#include "mm4mm/apps/instances.hpp"
#include "mm4mm/engine.hpp"
#include "mm4mm/inner_solvers.hpp"

// Poisson-noise phase retrieval,
//   min_x sum_i [ |a_i^H x|^2 + b_i - y_i log(|a_i^H x|^2 + b_i)
//                 + y_i log y_i - 2 y_i ].
// Max-min path: the separable dual in z is driven by the per-coordinate
// quadratic-root MM update, then x = (A^H A)^{-1} A^H D z with D = diag(A x^t).
// Min-max path: barrier-protected descent on the locally majorizing d(x|x^t).

namespace mm4mm::apps {

enum class PrVariant { maxmin, minmax };

inline double poisson_pr_objective(const PoissonPrInstance& inst, const CVector& x) {
  const Vector mu = (inst.A * x).cwiseAbs2() + inst.b;
  double s = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    s += mu[i];
    if (inst.y[i] > 0.0)
      s += -inst.y[i] * std::log(mu[i]) + inst.y[i] * std::log(inst.y[i]) - 2.0 * inst.y[i];
  }
  return s;
}

// g(x, z) = sum_i [ |a_i^H x|^2 + b_i + y_i (log z_i - 1) - z_i (|a_i^H x|^2 + b_i) ],
// with the y_i = 0 terms dropping their log.
inline double poisson_pr_augmented(const PoissonPrInstance& inst, const CVector& x,
                                   const Vector& z) {
  const Vector mu = (inst.A * x).cwiseAbs2() + inst.b;
  double s = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    s += mu[i] - z[i] * mu[i];
    if (inst.y[i] > 0.0) s += inst.y[i] * (std::log(z[i]) - 1.0);
  }
  return s;
}

inline Vector poisson_pr_argmax_z(const PoissonPrInstance& inst, const CVector& x) {
  const Vector mu = (inst.A * x).cwiseAbs2() + inst.b;
  return inst.y.cwiseQuotient(mu);
}

// Spectral initialization: leading eigenvector of A^H diag(y) A, scaled so
// the mean predicted intensity matches the mean count.
inline CVector poisson_pr_default_init(const PoissonPrInstance& inst) {
  const CMatrix s = inst.A.adjoint() * inst.y.asDiagonal() * inst.A;
  auto eig = numerics::eig_hermitian(s);
  CVector v = eig.eigenvectors.col(eig.eigenvectors.cols() - 1);
  const double pred = (inst.A * v).cwiseAbs2().mean();
  const double want = std::max(inst.y.mean(), 1e-12);
  return std::sqrt(want / std::max(pred, 1e-300)) * v;
}

// Locally majorizing surrogate of the min-max path without its additive
// constants (the inner solver works on this form); +inf outside the strict
// half-space set.
inline double poisson_pr_minmax_surrogate_centered(const PoissonPrInstance& inst,
                                                   const CVector& x, const CVector& xt) {
  const CVector axt = inst.A * xt;
  const Vector dbar = axt.cwiseAbs2();
  const Vector arg = inst.b - dbar + 2.0 * (axt.conjugate().cwiseProduct(inst.A * x)).real();
  double s = std::real(x.dot(inst.A.adjoint() * (inst.A * x)));
  for (Eigen::Index i = 0; i < arg.size(); ++i) {
    if (inst.y[i] > 0.0) {
      if (arg[i] <= 0.0) return std::numeric_limits<double>::infinity();
      s += -inst.y[i] * std::log(arg[i]);
    }
  }
  return s;
}

// Full surrogate d(x | x^t), touching f at x = x^t.
inline double poisson_pr_minmax_surrogate(const PoissonPrInstance& inst, const CVector& x,
                                          const CVector& xt) {
  double c = 0.0;
  for (Eigen::Index i = 0; i < inst.y.size(); ++i) {
    if (inst.y[i] > 0.0) c += inst.y[i] * std::log(inst.y[i]) - 2.0 * inst.y[i];
    c += inst.b[i];
  }
  return poisson_pr_minmax_surrogate_centered(inst, x, xt) + c;
}

// Inner problem of the min-max path (for the gradient gate): d(. | xt) over
// the real/imaginary split of x.
inline inner::SmoothProblem poisson_pr_minmax_inner(const PoissonPrInstance& inst,
                                                    const CVector& xt) {
  const CVector axt = inst.A * xt;
  const Vector dbar = axt.cwiseAbs2();
  inner::SmoothProblem d;
  d.value = [inst, xt](const Vector& xr) {
    return poisson_pr_minmax_surrogate_centered(inst, join_complex(xr), xt);
  };
  d.gradient = [inst, axt, dbar](const Vector& xr) {
    const CVector x = join_complex(xr);
    const Vector arg = inst.b - dbar + 2.0 * (axt.conjugate().cwiseProduct(inst.A * x)).real();
    Vector w(arg.size());
    for (Eigen::Index i = 0; i < arg.size(); ++i)
      w[i] = (inst.y[i] > 0.0 && arg[i] > 0.0) ? inst.y[i] / arg[i] : 0.0;
    const CVector gc = 2.0 * (inst.A.adjoint() * (inst.A * x)) -
                       2.0 * (inst.A.adjoint() * w.cwiseProduct(axt).matrix());
    return split_complex(gc);
  };
  return d;
}

inline std::pair<CVector, IterationTrace> solve_poisson_pr(const PoissonPrInstance& inst,
                                                           const CVector& x0,
                                                           const SolverConfig& cfg,
                                                           PrVariant variant) {
  inst.validate();
  const Eigen::Index M = inst.A.rows();
  const CMatrix aha = inst.A.adjoint() * inst.A;
  Eigen::LLT<CMatrix> aha_llt(aha);
  if (aha_llt.info() != Eigen::Success)
    throw std::invalid_argument("solve_poisson_pr: A^H A must be invertible");
  {
    const Vector mu0 = (inst.A * x0).cwiseAbs2() + inst.b;
    for (Eigen::Index i = 0; i < M; ++i)
      if (inst.y[i] > 0.0 && mu0[i] <= 0.0)
        throw std::invalid_argument("solve_poisson_pr: A x0 vanishes on a positive count");
  }

  MmProblem<CVector, Vector> prob;
  auto objective = [inst](const CVector& x) { return poisson_pr_objective(inst, x); };
  prob.objective = objective;

  if (variant == PrVariant::maxmin) {
    const CMatrix p = inst.A * aha_llt.solve(CMatrix(inst.A.adjoint()));
    prob.dual_ascent = [inst, p, M, cfg](const CVector& xt, StepInfo& info) {
      const CVector axt = inst.A * xt;
      const Vector dbar = axt.cwiseAbs2();
      const CMatrix pmi = p - CMatrix::Identity(M, M);
      Vector z = inst.y.cwiseQuotient(dbar + inst.b);  // touch point
      auto h_of = [&](const Vector& zv) {
        const CVector dz = axt.cwiseProduct(zv);
        double h = -std::real(dz.dot(p * dz));
        for (Eigen::Index i = 0; i < M; ++i) {
          if (inst.y[i] > 0.0) h += inst.y[i] * std::log(std::max(zv[i], 1e-300));
          h += zv[i] * (dbar[i] - inst.b[i]);
        }
        return h;
      };
      double h_prev = h_of(z);
      for (int k = 0; k < cfg.max_inner_iters; ++k) {
        const CVector dz = axt.cwiseProduct(z);
        const Vector c = 2.0 * (axt.conjugate().cwiseProduct(pmi * dz)).real();
        for (Eigen::Index i = 0; i < M; ++i) {
          const double beta = inst.b[i] + c[i] - dbar[i];
          if (dbar[i] > 1e-300) {
            z[i] =
                (-beta + std::sqrt(beta * beta + 8.0 * dbar[i] * inst.y[i])) / (4.0 * dbar[i]);
          } else {
            z[i] = std::abs(beta) > 1e-300 ? std::max(inst.y[i] / beta, 0.0) : 0.0;
          }
        }
        ++info.inner_iters;
        const double h = h_of(z);
        if (std::abs(h - h_prev) <= cfg.inner_tolerance * std::max(1.0, std::abs(h_prev)))
          break;
        h_prev = h;
      }
      return z;
    };
    prob.surrogate_inner_min = [inst, aha_llt, objective](const Vector& z, const CVector& xt,
                                                           StepInfo& info) {
      const CVector dz = (inst.A * xt).cwiseProduct(z);
      CVector cand = aha_llt.solve(inst.A.adjoint() * dz);
      return guard_step<CVector>(objective, xt, std::move(cand), info, "poisson_pr");
    };
    return engine::run_maxmin_mm(prob, x0, cfg);
  }

  prob.primal_step = [inst, cfg, objective](const CVector& xt, StepInfo& info) {
    inner::SmoothProblem d = poisson_pr_minmax_inner(inst, xt);
    const CVector axt = inst.A * xt;
    const Vector dbar = axt.cwiseAbs2();
    std::vector<std::function<double(const Vector&)>> strict;
    for (Eigen::Index i = 0; i < inst.A.rows(); ++i) {
      if (inst.y[i] <= 0.0) continue;
      const CVector arow = inst.A.row(i).transpose();
      const std::complex<double> axti = axt[i];
      const double bi = inst.b[i], di = dbar[i];
      strict.push_back([arow, axti, bi, di](const Vector& xr) {
        const CVector x = join_complex(xr);
        const std::complex<double> ax = arow.cwiseProduct(x).sum();
        return bi - di + 2.0 * std::real(std::conj(axti) * ax);
      });
    }
    auto res = inner::barrier_descent(d, strict, split_complex(xt), cfg.inner_tolerance,
                                      cfg.max_inner_iters);
    info.inner_iters = res.iters;
    if (res.stagnated) info.warnings.push_back("poisson_pr: inner descent stagnated");
    CVector cand = join_complex(res.x);
    return guard_step<CVector>(objective, xt, std::move(cand), info, "poisson_pr");
  };
  return engine::run_minmax_mm(prob, x0, cfg);
}

}  // namespace mm4mm::apps
