#pragma once

#include <limits>

#include "mm4mm/apps/common.hpp"
#include "mm4mm/apps/instances.hpp"
#include "mm4mm/engine.hpp"
#include "mm4mm/inner_solvers.hpp"

// Dual-function radar/communication transmit beamforming:
//   min_w sum_p 1 / (w^H A_p w)   s.t.  w^H w = e_T,  w^H T_k w >= gamma_k,
// with A_p = |beta_p|^2 (I_K \otimes a_p a_p^H), T_k = That_k - lambda_min I,
// That_k = Lambda_k \otimes H_k^T. Max-min path: concave ascent over
// (z >= 0, lambda >= 0), then w = sqrt(e_T) B w^t / ||B w^t||.

namespace mm4mm::apps {

struct DfrcOperators {
  std::vector<CMatrix> A;      // P quadratic-form matrices
  std::vector<CMatrix> T;     // K shifted SINR matrices (PSD)
  Vector gamma;               // shifted floors gamma_k = Gamma_k - lambda_min(That_k) e_T
};

inline DfrcOperators dfrc_operators(const DfrcInstance& inst) {
  DfrcOperators ops;
  const int K = inst.K(), P = inst.P(), nT = inst.n_T();
  const int blocks = std::max(K, 1);
  for (int p = 0; p < P; ++p) {
    const CMatrix outer = inst.steering[p] * inst.steering[p].adjoint();
    ops.A.push_back(std::norm(inst.beta[p]) *
                    numerics::kron(CMatrix(CMatrix::Identity(blocks, blocks)), outer));
  }
  ops.gamma = Vector(K);
  for (int k = 0; k < K; ++k) {
    const CVector hk = inst.H.row(k).adjoint();  // h_k from the channel row h_k^H
    const CMatrix hmat = hk * hk.adjoint();
    CMatrix lam = -inst.Gamma_hat[k] * CMatrix::Identity(K, K);
    lam(k, k) = 1.0;
    const CMatrix that = numerics::kron(lam, CMatrix(hmat.transpose()));
    const double lmin = numerics::eig_hermitian(that).eigenvalues.minCoeff();
    ops.T.push_back(CMatrix(that - lmin * CMatrix::Identity(that.rows(), that.cols())));
    // Gamma_k = Gamma_hat_k sigma_C^2; the shift removes lambda_min(That_k)
    // from every quadratic form on the sphere ||w||^2 = e_T.
    ops.gamma[k] = inst.Gamma_hat[k] * inst.sigmaC2 - lmin * inst.eT;
  }
  return ops;
}

inline double dfrc_objective(const DfrcOperators& ops, const CVector& w) {
  double s = 0.0;
  for (const auto& a : ops.A) {
    const double q = std::real(w.dot(a * w));
    if (q <= 0.0) return std::numeric_limits<double>::infinity();
    s += 1.0 / q;
  }
  return s;
}

// g(w, z, lambda) = sum_p [-z_p w^H A_p w + 2 sqrt(z_p)]
//                 + sum_k lambda_k (gamma_k - w^H T_k w).
inline double dfrc_augmented(const DfrcOperators& ops, const CVector& w, const Vector& z,
                             const Vector& lambda) {
  double s = 0.0;
  for (size_t p = 0; p < ops.A.size(); ++p)
    s += -z[static_cast<Eigen::Index>(p)] * std::real(w.dot(ops.A[p] * w)) +
         2.0 * std::sqrt(z[static_cast<Eigen::Index>(p)]);
  for (size_t k = 0; k < ops.T.size(); ++k)
    s += lambda[static_cast<Eigen::Index>(k)] *
         (ops.gamma[static_cast<Eigen::Index>(k)] - std::real(w.dot(ops.T[k] * w)));
  return s;
}

inline Vector dfrc_argmax_z(const DfrcOperators& ops, const CVector& w) {
  Vector z(static_cast<Eigen::Index>(ops.A.size()));
  for (size_t p = 0; p < ops.A.size(); ++p) {
    const double q = std::real(w.dot(ops.A[p] * w));
    z[static_cast<Eigen::Index>(p)] = 1.0 / (q * q);
  }
  return z;
}

inline CVector dfrc_default_init(const DfrcInstance& inst) {
  CVector w = CVector::Constant(inst.dim(), std::complex<double>(1.0, 0.0));
  return std::sqrt(inst.eT) * w / w.norm();
}

// Concave dual over u = [log z; lambda] (z strictly positive at its maximum
// because of the 2 sqrt(z) term; lambda projected onto >= 0); exposed for the
// gradient gate.
inline inner::SmoothProblem dfrc_dual_problem(const DfrcOperators& ops, double eT,
                                              const CVector& wt) {
  const int P = static_cast<int>(ops.A.size());
  const int K = static_cast<int>(ops.T.size());
  auto bmat = [ops, P, K](const Vector& u) {
    CMatrix b = CMatrix::Zero(ops.A[0].rows(), ops.A[0].cols());
    for (int p = 0; p < P; ++p) b += std::exp(u[p]) * ops.A[p];
    for (int k = 0; k < K; ++k) b += u[P + k] * ops.T[k];
    return b;
  };
  inner::SmoothProblem prob;
  prob.sense = inner::Sense::maximize;
  prob.value = [ops, bmat, eT, wt, P, K](const Vector& u) {
    const CVector bw = bmat(u) * wt;
    double s = -2.0 * std::sqrt(eT) * bw.norm() + std::real(wt.dot(bw));
    for (int p = 0; p < P; ++p) s += 2.0 * std::exp(0.5 * u[p]);
    for (int k = 0; k < K; ++k) s += u[P + k] * ops.gamma[k];
    return s;
  };
  prob.gradient = [ops, bmat, eT, wt, P, K](const Vector& u) {
    const CVector bw = bmat(u) * wt;
    const double nb = std::max(bw.norm(), 1e-300);
    Vector g(P + K);
    for (int p = 0; p < P; ++p) {
      const CVector aw = ops.A[p] * wt;
      const double z = std::exp(u[p]);
      const double dz = -2.0 * std::sqrt(eT) * std::real(bw.dot(aw)) / nb +
                        std::real(wt.dot(aw)) + 1.0 / std::sqrt(z);
      g[p] = dz * z;  // chain rule through z = exp(u)
    }
    for (int k = 0; k < K; ++k) {
      const CVector tw = ops.T[k] * wt;
      g[P + k] = -2.0 * std::sqrt(eT) * std::real(bw.dot(tw)) / nb + std::real(wt.dot(tw)) +
                 ops.gamma[k];
    }
    return g;
  };
  prob.project = [P, K](const Vector& u) {
    Vector v = u;
    for (int k = 0; k < K; ++k) v[P + k] = std::max(v[P + k], 0.0);
    return v;
  };
  return prob;
}

inline std::pair<CVector, IterationTrace> solve_dfrc(const DfrcInstance& inst, const CVector& w0,
                                                     const SolverConfig& cfg) {
  inst.validate();
  if (w0.size() != inst.dim()) throw std::invalid_argument("solve_dfrc: w0 dimension mismatch");
  if (std::abs(w0.squaredNorm() - inst.eT) > 1e-8 * std::max(1.0, inst.eT))
    throw std::invalid_argument("solve_dfrc: w0 must satisfy ||w0||^2 = eT");
  const DfrcOperators ops = dfrc_operators(inst);
  const int P = inst.P(), K = inst.K();

  MmProblem<CVector, Vector> prob;
  auto objective = [ops](const CVector& w) { return dfrc_objective(ops, w); };
  prob.objective = objective;

  prob.dual_ascent = [ops, inst, cfg, P, K](const CVector& wt, StepInfo& info) {
    inner::SmoothProblem h = dfrc_dual_problem(ops, inst.eT, wt);
    Vector u0(P + K);
    u0.head(P) = dfrc_argmax_z(ops, wt).array().log();
    u0.tail(K).setZero();  // multipliers restart cold each outer step
    auto res = inner::projected_gradient(h, u0, cfg.inner_tolerance,
                                         std::max(cfg.max_inner_iters, 600));
    info.inner_iters = res.iters;
    Vector zl(P + K);
    zl.head(P) = res.x.head(P).array().exp();
    zl.tail(K) = res.x.tail(K);
    if (K > 0 && zl.tail(K).maxCoeff() > 1e8)
      info.warnings.push_back("dfrc: multiplier blow-up, SINR floors look infeasible");
    return zl;
  };
  prob.surrogate_inner_min = [ops, inst, objective, P, K](const Vector& zl, const CVector& wt,
                                                          StepInfo& info) {
    CMatrix b = CMatrix::Zero(wt.size(), wt.size());
    for (int p = 0; p < P; ++p) b += zl[p] * ops.A[p];
    for (int k = 0; k < K; ++k) b += zl[P + k] * ops.T[k];
    const CVector bw = b * wt;
    if (bw.norm() < 1e-300)
      throw std::domain_error("solve_dfrc: degenerate direction B w^t = 0");
    CVector cand = std::sqrt(inst.eT) * bw / bw.norm();
    return guard_step<CVector>(objective, wt, std::move(cand), info, "dfrc");
  };
  return engine::run_maxmin_mm(prob, w0, cfg);
}

}  // namespace mm4mm::apps
