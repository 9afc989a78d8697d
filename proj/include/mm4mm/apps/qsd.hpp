#pragma once

#include <vector>

#include "mm4mm/apps/common.hpp"
#include "mm4mm/apps/instances.hpp"
#include "mm4mm/engine.hpp"

// Quantum state discrimination: maximize sum_i p_i Tr(rho_i Pi_i) over PSD
// measurement operators Pi_i = X_i X_i^H with sum_i Pi_i = I. Closed-form
// alternation: Z^{t+1} = (sum_i p_i^2 rho_i X_i X_i^H rho_i^H)^{1/2}, then
// X_i <- p_i Z^{-1} rho_i X_i, which keeps sum_i Pi_i = I exactly.

namespace mm4mm::apps {

using QsdFactors = std::vector<CMatrix>;

inline double qsd_success_probability(const QsdInstance& inst, const QsdFactors& x) {
  double s = 0.0;
  for (size_t i = 0; i < inst.rho.size(); ++i)
    s += inst.p[static_cast<Eigen::Index>(i)] *
         std::real((inst.rho[i] * x[i] * x[i].adjoint()).trace());
  return s;
}

// Engine objective is the paper's minimization form.
inline double qsd_objective(const QsdInstance& inst, const QsdFactors& x) {
  return -qsd_success_probability(inst, x);
}

// g(X, Z) = -sum_i p_i Tr(X_i^H rho_i X_i) + Tr(Z (sum_i X_i X_i^H - I)).
inline double qsd_augmented(const QsdInstance& inst, const QsdFactors& x, const CMatrix& z) {
  const Eigen::Index n = inst.rho[0].rows();
  CMatrix acc = -CMatrix::Identity(n, n);
  double s = 0.0;
  for (size_t i = 0; i < inst.rho.size(); ++i) {
    s -= inst.p[static_cast<Eigen::Index>(i)] *
         std::real((x[i].adjoint() * inst.rho[i] * x[i]).trace());
    acc += x[i] * x[i].adjoint();
  }
  return s + std::real((z * acc).trace());
}

inline QsdFactors qsd_default_init(const QsdInstance& inst) {
  const Eigen::Index n = inst.rho[0].rows();
  const double scale = 1.0 / std::sqrt(static_cast<double>(inst.rho.size()));
  return QsdFactors(inst.rho.size(), CMatrix(scale * CMatrix::Identity(n, n)));
}

inline CMatrix qsd_z_update(const QsdInstance& inst, const QsdFactors& x, bool* ridged = nullptr) {
  const Eigen::Index n = inst.rho[0].rows();
  CMatrix s = CMatrix::Zero(n, n);
  for (size_t i = 0; i < inst.rho.size(); ++i) {
    const double pi = inst.p[static_cast<Eigen::Index>(i)];
    const CMatrix rx = inst.rho[i] * x[i];
    s += (pi * pi) * (rx * rx.adjoint());
  }
  CMatrix z = numerics::matrix_sqrt_psd(s);
  const double lmin = numerics::eig_hermitian(z).eigenvalues.minCoeff();
  if (lmin < 1e-12) {
    z += 1e-12 * CMatrix::Identity(n, n);
    if (ridged != nullptr) *ridged = true;
  }
  return z;
}

inline std::pair<QsdFactors, IterationTrace> solve_qsd(const QsdInstance& inst,
                                                       const QsdFactors& x0,
                                                       const SolverConfig& cfg) {
  inst.validate();
  if (x0.size() != inst.rho.size())
    throw std::invalid_argument("solve_qsd: need one factor per state");

  MmProblem<QsdFactors, CMatrix> prob;
  prob.objective = [inst](const QsdFactors& x) { return qsd_objective(inst, x); };
  prob.dual_ascent = [inst](const QsdFactors& xt, StepInfo& info) {
    bool ridged = false;
    CMatrix z = qsd_z_update(inst, xt, &ridged);
    if (ridged) info.warnings.push_back("qsd: singular Z, ridge 1e-12 applied");
    info.inner_iters = 1;
    return z;
  };
  prob.surrogate_inner_min = [inst](const CMatrix& z, const QsdFactors& xt, StepInfo&) {
    QsdFactors next(xt.size());
    for (size_t i = 0; i < xt.size(); ++i) {
      const double pi = inst.p[static_cast<Eigen::Index>(i)];
      next[i] = pi * numerics::solve_hpd(z, CMatrix(inst.rho[i] * xt[i]));
    }
    return next;
  };
  return engine::run_maxmin_mm(prob, x0, cfg);
}

// Measurement operators from the converged factors.
inline std::vector<CMatrix> qsd_operators(const QsdFactors& x) {
  std::vector<CMatrix> pi;
  pi.reserve(x.size());
  for (const auto& xi : x) pi.push_back(CMatrix(xi * xi.adjoint()));
  return pi;
}

// Two-state optimum under the sum-of-traces normalization: the positive part
// of p1 rho1 - p2 rho2 plus p2 Tr(rho2). Reduces to (1 + ||.||_tr)/2 for
// unit-trace states.
inline double qsd_two_state_bound(const QsdInstance& inst) {
  if (inst.rho.size() != 2)
    throw std::invalid_argument("qsd_two_state_bound: needs exactly two states");
  const CMatrix m = inst.p[0] * inst.rho[0] - inst.p[1] * inst.rho[1];
  const Vector ev = numerics::eig_hermitian(m).eigenvalues;
  double s = inst.p[1] * std::real(inst.rho[1].trace());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev[i] > 0.0) s += ev[i];
  return s;
}

}  // namespace mm4mm::apps
