#pragma once

#include <memory>

#include "mm4mm/apps/common.hpp"
#include "mm4mm/apps/instances.hpp"
#include "mm4mm/engine.hpp"
#include "mm4mm/inner_solvers.hpp"

// Auxiliary-function IVA with fixed weighted covariances:
//   min_W sum_k w_k^H V_k w_k - 2 log|det W|,   rows of W are w_k^H.
// Max-min path: the HPD dual
//   h(Z | W^t) = log|Z| - sum_k w_k^H Z V_k^{-1} Z w_k + sum_k w_k^H Z w_k (+M)
// is maximized by Cholesky-factor ascent, then w_k = V_k^{-1} Z w_k^t.

namespace mm4mm::apps {

namespace detail_iva {

// w_k is the conjugate of row k (W = [w_1 ... w_M]^H).
inline CVector row_vector(const CMatrix& w, int k) { return w.row(k).conjugate().transpose(); }

}  // namespace detail_iva

inline double iva_objective(const IvaInstance& inst, const CMatrix& w) {
  const int M = static_cast<int>(inst.V.size());
  double s = 0.0;
  for (int k = 0; k < M; ++k) {
    const CVector wk = detail_iva::row_vector(w, k);
    s += std::real(wk.dot(inst.V[k] * wk));
  }
  const double ad = std::abs(w.determinant());
  if (ad <= 1e-300) return std::numeric_limits<double>::infinity();
  return s - 2.0 * std::log(ad);
}

// g(W, Z) = sum_k w_k^H V_k w_k + log|Z| - sum_k w_k^H Z w_k + M over Z > 0
// (the constant M closes the identity max_Z g = f).
inline double iva_augmented(const IvaInstance& inst, const CMatrix& w, const CMatrix& z) {
  const int M = static_cast<int>(inst.V.size());
  double s = numerics::logdet_hpd(z) + M;
  for (int k = 0; k < M; ++k) {
    const CVector wk = detail_iva::row_vector(w, k);
    s += std::real(wk.dot(inst.V[k] * wk)) - std::real(wk.dot(z * wk));
  }
  return s;
}

inline CMatrix iva_argmax_z(const IvaInstance& inst, const CMatrix& w) {
  const int M = static_cast<int>(inst.V.size());
  CMatrix sum = CMatrix::Zero(M, M);
  for (int k = 0; k < M; ++k) {
    const CVector wk = detail_iva::row_vector(w, k);
    sum += wk * wk.adjoint();
  }
  return numerics::solve_hpd(sum, CMatrix(CMatrix::Identity(M, M)));
}

// Dual over the Cholesky parameterization Z = L L^H, for the gradient gate
// and the inner ascent.
inline inner::SmoothProblem iva_dual_problem(const IvaInstance& inst, const CMatrix& wt) {
  const int M = static_cast<int>(inst.V.size());
  std::vector<CVector> wk(M);
  std::vector<CMatrix> vi(M);
  for (int k = 0; k < M; ++k) {
    wk[k] = detail_iva::row_vector(wt, k);
    vi[k] = numerics::solve_hpd(inst.V[k], CMatrix(CMatrix::Identity(M, M)));
  }
  auto param = std::make_shared<inner::HermitianPdParam>(M);
  inner::SmoothProblem p;
  p.sense = inner::Sense::maximize;
  p.value = [param, wk, vi, M](const Vector& v) {
    const CMatrix z = param->unpack(v);
    double s = numerics::logdet_hpd(z) + M;
    for (int k = 0; k < M; ++k)
      s += -std::real(wk[k].dot(z * vi[k] * z * wk[k])) + std::real(wk[k].dot(z * wk[k]));
    return s;
  };
  p.gradient = [param, wk, vi, M](const Vector& v) {
    const CMatrix z = param->unpack(v);
    CMatrix g = numerics::solve_hpd(z, CMatrix(CMatrix::Identity(M, M)));
    for (int k = 0; k < M; ++k) {
      const CMatrix u = (vi[k] * z * wk[k]) * wk[k].adjoint();
      g -= u + u.adjoint();
      g += wk[k] * wk[k].adjoint();
    }
    g = (g + g.adjoint()) / 2.0;
    return param->grad_chain(v, g);
  };
  return p;
}

inline std::pair<CMatrix, IterationTrace> solve_iva(const IvaInstance& inst, const CMatrix& w0,
                                                    const SolverConfig& cfg) {
  inst.validate();
  const int M = static_cast<int>(inst.V.size());
  if (w0.rows() != M || w0.cols() != M)
    throw std::invalid_argument("solve_iva: W0 must be M x M");
  if (std::abs(w0.determinant()) < 1e-12)
    throw std::invalid_argument("solve_iva: W0 must be nonsingular");

  MmProblem<CMatrix, CMatrix> prob;
  auto objective = [inst](const CMatrix& w) { return iva_objective(inst, w); };
  prob.objective = objective;

  prob.dual_ascent = [inst, cfg, M](const CMatrix& wt, StepInfo& info) {
    inner::SmoothProblem h = iva_dual_problem(inst, wt);
    inner::HermitianPdParam param(M);
    const Vector v0 = param.pack(iva_argmax_z(inst, wt));  // touch point
    auto res = inner::projected_gradient(h, v0, cfg.inner_tolerance,
                                         std::max(cfg.max_inner_iters, 400));
    info.inner_iters = res.iters;
    return param.unpack(res.x);
  };
  prob.surrogate_inner_min = [inst, objective, M](const CMatrix& z, const CMatrix& wt,
                                                  StepInfo& info) {
    CMatrix cand(M, M);
    for (int k = 0; k < M; ++k) {
      const CVector wk = detail_iva::row_vector(wt, k);
      const CVector wn = numerics::solve_hpd(inst.V[k], CVector(z * wk));
      cand.row(k) = wn.adjoint();
    }
    if (std::abs(cand.determinant()) < 1e-12) {
      // jittered restart for a singular candidate, then fall back to W^t
      cand += 1e-8 * cand.norm() * CMatrix::Identity(M, M);
      info.warnings.push_back("iva: singular candidate, jittered restart");
      if (std::abs(cand.determinant()) < 1e-12) return wt;
    }
    return guard_step<CMatrix>(objective, wt, std::move(cand), info, "iva");
  };
  return engine::run_maxmin_mm(prob, w0, cfg);
}

}  // namespace mm4mm::apps
