#pragma once

#include <limits>

#include "mm4mm/apps/common.hpp"
#include "mm4mm/apps/instances.hpp"
#include "mm4mm/engine.hpp"
#include "mm4mm/inner_solvers.hpp"

// RSS-based maximum-likelihood source localization,
//   min_x sum_i [ y_i^2 - y_i log ||x - s_i||^2 + (log ||x - s_i||)^2 ],
// with y_i = 10 alpha (p0 - p_i) / log 10. Max-min path: concave inner
// maximization over (q > 0, z > 0) via log-reparameterized ascent, then
// x = (C q + D z) / (2 q' bbar). Min-max path: barrier-protected descent on
// the locally majorizing d(x | x^t).

namespace mm4mm::apps {

enum class RssVariant { maxmin, minmax };

inline double rss_objective(const RssInstance& inst, const Vector& x) {
  const Vector y = inst.log_range_observations();
  double s = 0.0;
  for (Eigen::Index i = 0; i < inst.sensors.rows(); ++i) {
    const double d2 = (x - inst.sensors.row(i).transpose()).squaredNorm();
    s += y[i] * y[i] - y[i] * std::log(d2) + 0.25 * std::log(d2) * std::log(d2);
  }
  return s;
}

// g(x, q, z) = sum_i [ y_i^2 - q_i^2 + q_i log ||x-s_i||^2
//                      + y_i (log z_i - z_i ||x-s_i||^2 + 1) ].
inline double rss_augmented(const RssInstance& inst, const Vector& x, const Vector& q,
                            const Vector& z) {
  const Vector y = inst.log_range_observations();
  double s = 0.0;
  for (Eigen::Index i = 0; i < inst.sensors.rows(); ++i) {
    const double d2 = (x - inst.sensors.row(i).transpose()).squaredNorm();
    s += y[i] * y[i] - q[i] * q[i] + q[i] * std::log(d2) +
         y[i] * (std::log(z[i]) - z[i] * d2 + 1.0);
  }
  return s;
}

inline std::pair<Vector, Vector> rss_argmax_qz(const RssInstance& inst, const Vector& x) {
  const Eigen::Index M = inst.sensors.rows();
  Vector q(M), z(M);
  for (Eigen::Index i = 0; i < M; ++i) {
    const double d2 = (x - inst.sensors.row(i).transpose()).squaredNorm();
    q[i] = 0.5 * std::log(d2);
    z[i] = 1.0 / d2;
  }
  return {q, z};
}

// Default start: sensor centroid weighted toward the shortest estimated
// ranges (d_i ~ exp(y_i)).
inline Vector rss_default_init(const RssInstance& inst) {
  const Vector y = inst.log_range_observations();
  Vector w(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) w[i] = 1.0 / std::max(std::exp(y[i]), 1e-3);
  w /= w.sum();
  return inst.sensors.transpose() * w;
}

namespace detail_rss {

struct Majorizer {
  Matrix b;      // rows x^t - s_i
  Vector nb2;    // ||b_i||^2, clamped to the far-field floor for the q-bound
  Vector nb2_raw;
  Vector a;      // log(nb2) - 1
  Vector bbar;   // 1 / nb2
  bool clamped = false;
};

inline Majorizer majorizer_at(const RssInstance& inst, const Vector& xt) {
  Majorizer m;
  const Eigen::Index M = inst.sensors.rows();
  m.b = Matrix(M, xt.size());
  m.nb2 = Vector(M);
  m.nb2_raw = Vector(M);
  const double floor = (1.0 + 1e-6) * (1.0 + 1e-6);
  for (Eigen::Index i = 0; i < M; ++i) {
    m.b.row(i) = (xt - inst.sensors.row(i).transpose()).transpose();
    m.nb2_raw[i] = m.b.row(i).squaredNorm();
    if (m.nb2_raw[i] < floor) m.clamped = true;
    m.nb2[i] = std::max(m.nb2_raw[i], floor);
  }
  m.a = m.nb2.array().log() - 1.0;
  m.bbar = m.nb2.cwiseInverse();
  return m;
}

}  // namespace detail_rss

// Concave dual of the max-min path over (q, z) > 0, packed as [q; z];
// exposed for the gradient gate.
inline inner::SmoothProblem rss_maxmin_inner(const RssInstance& inst, const Vector& xt) {
  const auto mj = detail_rss::majorizer_at(inst, xt);
  const Eigen::Index M = inst.sensors.rows();
  const Eigen::Index n = inst.sensors.cols();
  const Vector y = inst.log_range_observations();
  Matrix c(n, M), d(n, M);
  Vector u(M), v(M);
  for (Eigen::Index i = 0; i < M; ++i) {
    c.col(i) = 2.0 * mj.bbar[i] * inst.sensors.row(i).transpose();
    d.col(i) = 2.0 * y[i] * mj.b.row(i).transpose();
    u[i] = mj.bbar[i] * inst.sensors.row(i).squaredNorm();
    v[i] = y[i] * mj.b.row(i).dot(2.0 * xt.transpose() - mj.b.row(i));
  }
  const Vector a = mj.a;
  const Vector bbar = mj.bbar;
  inner::SmoothProblem p;
  p.sense = inner::Sense::maximize;
  p.value = [M, c, d, a, u, v, y, bbar](const Vector& qz) {
    const Vector q = qz.head(M), z = qz.tail(M);
    if (q.minCoeff() <= 0.0 || z.minCoeff() <= 0.0)
      return -std::numeric_limits<double>::infinity();
    const Vector num = c * q + d * z;
    const double den = 4.0 * q.dot(bbar);
    double s = -q.squaredNorm() + q.dot(a + u) - num.squaredNorm() / den + z.dot(v);
    for (Eigen::Index i = 0; i < M; ++i) s += y[i] * std::log(z[i]);
    return s;
  };
  p.gradient = [M, c, d, a, u, v, y, bbar](const Vector& qz) {
    const Vector q = qz.head(M), z = qz.tail(M);
    const Vector num = c * q + d * z;
    const double qb = q.dot(bbar);
    Vector g(2 * M);
    g.head(M) = -2.0 * q + (a + u) - (c.transpose() * num) / (2.0 * qb) +
                (num.squaredNorm() / (4.0 * qb * qb)) * bbar;
    g.tail(M) = -(d.transpose() * num) / (2.0 * qb) + y.cwiseQuotient(z) + v;
    return g;
  };
  return p;
}

// Locally majorizing surrogate of the min-max path without the constant
// sum_i y_i^2 (the inner solver works on this form so value differences are
// not drowned by a large additive offset); +inf outside the printed
// constraint set 2 b_i'(x - s_i) > ||b_i||^2.
inline double rss_minmax_surrogate_centered(const RssInstance& inst, const Vector& x,
                                            const Vector& xt) {
  const auto mj = detail_rss::majorizer_at(inst, xt);
  const Vector y = inst.log_range_observations();
  double s = 0.0;
  for (Eigen::Index i = 0; i < inst.sensors.rows(); ++i) {
    const double d2 = (x - inst.sensors.row(i).transpose()).squaredNorm();
    const double qt = 0.5 * (d2 / mj.nb2[i] + mj.a[i]);
    const double arg = mj.b.row(i).dot(2.0 * x.transpose() - xt.transpose() -
                                       inst.sensors.row(i));
    if (arg <= 0.0) return std::numeric_limits<double>::infinity();
    s += qt * qt - y[i] * std::log(arg);
  }
  return s;
}

// Full surrogate d(x | x^t), touching the ML objective at x = x^t.
inline double rss_minmax_surrogate(const RssInstance& inst, const Vector& x, const Vector& xt) {
  const Vector y = inst.log_range_observations();
  return rss_minmax_surrogate_centered(inst, x, xt) + y.squaredNorm();
}

inline inner::SmoothProblem rss_minmax_inner(const RssInstance& inst, const Vector& xt) {
  const auto mj = detail_rss::majorizer_at(inst, xt);
  const Vector y = inst.log_range_observations();
  inner::SmoothProblem p;
  p.value = [inst, xt](const Vector& x) { return rss_minmax_surrogate_centered(inst, x, xt); };
  p.gradient = [inst, mj, y, xt](const Vector& x) {
    Vector g = Vector::Zero(x.size());
    for (Eigen::Index i = 0; i < inst.sensors.rows(); ++i) {
      const Vector diff = Vector(x - inst.sensors.row(i).transpose());
      const double d2 = diff.squaredNorm();
      const double qt = 0.5 * (d2 / mj.nb2[i] + mj.a[i]);
      const double arg = mj.b.row(i).dot(2.0 * x.transpose() - xt.transpose() -
                                         inst.sensors.row(i));
      g += 2.0 * qt * diff / mj.nb2[i] - (2.0 * y[i] / arg) * mj.b.row(i).transpose();
    }
    return g;
  };
  return p;
}

inline std::pair<Vector, IterationTrace> solve_rss(const RssInstance& inst, const Vector& x0,
                                                   const SolverConfig& cfg, RssVariant variant) {
  inst.validate();
  const Eigen::Index M = inst.sensors.rows();
  const Vector y = inst.log_range_observations();
  MmProblem<Vector, Vector> prob;
  auto objective = [inst](const Vector& x) { return rss_objective(inst, x); };
  prob.objective = objective;

  if (variant == RssVariant::maxmin) {
    prob.dual_ascent = [inst, cfg, M](const Vector& xt, StepInfo& info) {
      const auto mj = detail_rss::majorizer_at(inst, xt);
      if (mj.clamped)
        info.warnings.push_back("rss: far-field violated, q-bound clamped at 1+1e-6");
      inner::SmoothProblem g = rss_maxmin_inner(inst, xt);
      inner::SmoothProblem gu = inner::log_reparam(g);
      Vector qz0(2 * M);
      qz0.head(M) = (0.5 * mj.nb2.array().log()).cwiseMax(1e-8);  // touch point
      qz0.tail(M) = mj.nb2_raw.cwiseMax(1e-12).cwiseInverse();
      auto res = inner::projected_gradient(gu, qz0.array().log().matrix(),
                                           cfg.inner_tolerance,
                                           std::max(cfg.max_inner_iters, 600));
      info.inner_iters = res.iters;
      return Vector(res.x.array().exp().matrix());
    };
    prob.surrogate_inner_min = [inst, objective, M](const Vector& qz, const Vector& xt,
                                                    StepInfo& info) {
      const auto mj = detail_rss::majorizer_at(inst, xt);
      const Vector y2 = inst.log_range_observations();
      const Vector q = qz.head(M), z = qz.tail(M);
      Vector num = Vector::Zero(xt.size());
      for (Eigen::Index i = 0; i < M; ++i)
        num += 2.0 * mj.bbar[i] * q[i] * inst.sensors.row(i).transpose() +
               2.0 * y2[i] * z[i] * mj.b.row(i).transpose();
      Vector cand = num / (2.0 * q.dot(mj.bbar));
      return guard_step<Vector>(objective, xt, std::move(cand), info, "rss");
    };
    return engine::run_maxmin_mm(prob, x0, cfg);
  }

  prob.primal_step = [inst, cfg, objective](const Vector& xt, StepInfo& info) {
    const auto mj = detail_rss::majorizer_at(inst, xt);
    if (mj.clamped)
      info.warnings.push_back("rss: far-field violated, q-bound clamped at 1+1e-6");
    inner::SmoothProblem d = rss_minmax_inner(inst, xt);
    std::vector<std::function<double(const Vector&)>> strict;
    for (Eigen::Index i = 0; i < inst.sensors.rows(); ++i) {
      const Vector bi = mj.b.row(i).transpose();
      const Vector si = inst.sensors.row(i).transpose();
      const double nb2 = mj.nb2_raw[i];
      strict.push_back(
          [bi, si, nb2](const Vector& x) { return 2.0 * bi.dot(x - si) - nb2; });
    }
    auto res = inner::barrier_descent(d, strict, xt, cfg.inner_tolerance,
                                      std::max(cfg.max_inner_iters, 400));
    info.inner_iters = res.iters;
    if (res.stagnated) info.warnings.push_back("rss: inner descent stagnated");
    return guard_step<Vector>(objective, xt, std::move(res.x), info, "rss");
  };
  return engine::run_minmax_mm(prob, x0, cfg);
}

}  // namespace mm4mm::apps
