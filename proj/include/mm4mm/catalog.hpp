#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "mm4mm/numerics.hpp"

// Executable catalog of max formulations f(x) = max_z g(x,z): each entry
// carries the primal evaluator, the augmented function, the closed-form
// maximizer and the auxiliary-variable domain, so the defining identity and
// the domination property can be certified numerically.

namespace mm4mm::catalog {

using Value = std::variant<double, Vector, Matrix, CVector, CMatrix>;

enum class ZDomain {
  unit_box,        // |z_i| <= 1
  spectral_ball,   // sigma_max(Z) <= 1
  unconstrained,
  positive_open,   // z > 0 elementwise
  nonneg,          // z >= 0 elementwise
  simplex,         // z >= 0, 1'z = 1
  pd_cone,         // Z Hermitian positive definite
};

inline const char* z_domain_name(ZDomain d) {
  switch (d) {
    case ZDomain::unit_box: return "unit_box";
    case ZDomain::spectral_ball: return "spectral_ball";
    case ZDomain::unconstrained: return "unconstrained";
    case ZDomain::positive_open: return "positive_open";
    case ZDomain::nonneg: return "nonneg";
    case ZDomain::simplex: return "simplex";
    case ZDomain::pd_cone: return "pd_cone";
  }
  return "?";
}

namespace detail {

inline double as_scalar(const Value& v, const char* who) {
  if (auto* d = std::get_if<double>(&v)) return *d;
  throw std::invalid_argument(std::string(who) + ": expected scalar value");
}

inline const Vector& as_vector(const Value& v, const char* who) {
  if (auto* p = std::get_if<Vector>(&v)) return *p;
  throw std::invalid_argument(std::string(who) + ": expected real vector value");
}

inline const Matrix& as_matrix(const Value& v, const char* who) {
  if (auto* p = std::get_if<Matrix>(&v)) return *p;
  throw std::invalid_argument(std::string(who) + ": expected real matrix value");
}

inline const CMatrix& as_cmatrix(const Value& v, const char* who) {
  if (auto* p = std::get_if<CMatrix>(&v)) return *p;
  throw std::invalid_argument(std::string(who) + ": expected complex matrix value");
}

template <typename MatT>
bool is_pd(const MatT& z) {
  if (z.rows() != z.cols()) return false;
  if (!numerics::is_hermitian(z, 1e-9)) return false;
  Eigen::LLT<MatT> llt(((z + z.adjoint()) / 2.0).eval());
  return llt.info() == Eigen::Success;
}

inline void check_z_domain(ZDomain dom, const Value& z) {
  constexpr double tol = 1e-9;
  switch (dom) {
    case ZDomain::unit_box: {
      const Vector& v = as_vector(z, "eval_augmented(z)");
      if (v.cwiseAbs().maxCoeff() > 1.0 + tol)
        throw std::domain_error("z outside the unit box");
      return;
    }
    case ZDomain::spectral_ball: {
      const Matrix& m = as_matrix(z, "eval_augmented(z)");
      Eigen::JacobiSVD<Matrix> svd(m);
      if (svd.singularValues()(0) > 1.0 + tol)
        throw std::domain_error("z outside the spectral-norm ball");
      return;
    }
    case ZDomain::unconstrained:
      return;
    case ZDomain::positive_open: {
      if (auto* d = std::get_if<double>(&z)) {
        if (*d <= 0.0) throw std::domain_error("z must be > 0");
        return;
      }
      const Vector& v = as_vector(z, "eval_augmented(z)");
      if (v.minCoeff() <= 0.0) throw std::domain_error("z must be > 0");
      return;
    }
    case ZDomain::nonneg: {
      if (auto* d = std::get_if<double>(&z)) {
        if (*d < 0.0) throw std::domain_error("z must be >= 0");
        return;
      }
      const Vector& v = as_vector(z, "eval_augmented(z)");
      if (v.minCoeff() < 0.0) throw std::domain_error("z must be >= 0");
      return;
    }
    case ZDomain::simplex: {
      const Vector& v = as_vector(z, "eval_augmented(z)");
      if (v.minCoeff() < -tol || std::abs(v.sum() - 1.0) > tol)
        throw std::domain_error("z not on the probability simplex");
      return;
    }
    case ZDomain::pd_cone: {
      if (auto* m = std::get_if<Matrix>(&z)) {
        if (!is_pd(*m)) throw std::domain_error("z not positive definite");
        return;
      }
      if (auto* m = std::get_if<CMatrix>(&z)) {
        if (!is_pd(*m)) throw std::domain_error("z not positive definite");
        return;
      }
      throw std::invalid_argument("pd_cone z must be a matrix");
    }
  }
}

}  // namespace detail

// One max formulation. Parameters are frozen at construction; evaluators
// validate shapes and domains eagerly so solver loops fail fast.
struct CatalogEntry {
  std::string id;
  ZDomain z_domain = ZDomain::unconstrained;
  std::function<double(const Value& x)> primal;
  std::function<double(const Value& x, const Value& z)> augmented_unchecked;
  std::function<Value(const Value& x)> maximizer;
  std::function<Value(Rng&)> sample_x;  // random point in the primal domain

  double eval_primal(const Value& x) const { return primal(x); }

  double eval_augmented(const Value& x, const Value& z) const {
    detail::check_z_domain(z_domain, z);
    return augmented_unchecked(x, z);
  }

  Value argmax_z(const Value& x) const { return maximizer(x); }
};

struct VerificationReport {
  double identity_gap = 0.0;    // |g(x, zhat) - f(x)| / max(1, |f|)
  double max_violation = 0.0;   // max over sampled feasible z of g(x,z) - f(x)
};

namespace detail {

// Draw a feasible z with the same shape/type as `like`. Cone samples are
// L L^H plus a small ridge; simplex samples are flat-Dirichlet; box and
// ball samples are uniform; open orthants are explored ratio-wise around
// the maximizer so the identity region is covered.
inline Value sample_z_like(ZDomain dom, const Value& like, Rng& rng) {
  switch (dom) {
    case ZDomain::unit_box: {
      const Vector& v = as_vector(like, "sample_z");
      Vector z(v.size());
      for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.uniform(-1.0, 1.0);
      return z;
    }
    case ZDomain::spectral_ball: {
      const Matrix& m = as_matrix(like, "sample_z");
      Matrix g = rng.gaussian_matrix(m.rows(), m.cols());
      Eigen::JacobiSVD<Matrix> svd(g);
      const double smax = svd.singularValues()(0);
      return Matrix((rng.uniform() / std::max(smax, 1e-300)) * g);
    }
    case ZDomain::unconstrained: {
      if (auto* d = std::get_if<double>(&like)) {
        const double s = 1.0 + std::abs(*d);
        return rng.uniform() < 0.5 ? *d + s * rng.gaussian() : s * rng.gaussian();
      }
      const Vector& v = as_vector(like, "sample_z");
      const double s = 1.0 + v.cwiseAbs().maxCoeff();
      Vector z = s * rng.gaussian_vector(v.size());
      if (rng.uniform() < 0.5) z += v;
      return z;
    }
    case ZDomain::positive_open:
    case ZDomain::nonneg: {
      if (auto* d = std::get_if<double>(&like)) {
        return std::max(*d, 1e-12) * std::exp(rng.gaussian());
      }
      const Vector& v = as_vector(like, "sample_z");
      Vector z(v.size());
      for (Eigen::Index i = 0; i < z.size(); ++i)
        z[i] = std::max(v[i], 1e-12) * std::exp(rng.gaussian());
      return z;
    }
    case ZDomain::simplex: {
      const Vector& v = as_vector(like, "sample_z");
      return rng.dirichlet(v.size());
    }
    case ZDomain::pd_cone: {
      if (auto* m = std::get_if<Matrix>(&like)) {
        const Eigen::Index n = m->rows();
        const double scale = std::exp(rng.gaussian()) * std::max(m->trace() / n, 1e-8);
        Matrix g = rng.gaussian_matrix(n, n);
        return Matrix(scale * (g * g.transpose()) / double(n) + 1e-8 * Matrix::Identity(n, n));
      }
      const CMatrix& m = as_cmatrix(like, "sample_z");
      const Eigen::Index n = m.rows();
      const double scale = std::exp(rng.gaussian()) * std::max(std::real(m.trace()) / n, 1e-8);
      CMatrix g = rng.cgaussian_matrix(n, n);
      return CMatrix(scale * (g * g.adjoint()) / double(n) + 1e-8 * CMatrix::Identity(n, n));
    }
  }
  throw std::logic_error("sample_z_like: unreachable");
}

}  // namespace detail

// Certify the defining identity g(x, zhat(x)) = f(x) and the domination
// g(x, z) <= f(x) over n_samples feasible z (the maximizer itself is always
// included as the first sample).
inline VerificationReport verify_entry(const CatalogEntry& entry, const Value& x,
                                       int n_samples, Rng& rng) {
  if (n_samples < 1) throw std::invalid_argument("verify_entry: n_samples must be >= 1");
  const double f = entry.eval_primal(x);
  const Value zhat = entry.argmax_z(x);
  const double g_at_max = entry.eval_augmented(x, zhat);
  VerificationReport rep;
  rep.identity_gap = std::abs(g_at_max - f) / std::max(1.0, std::abs(f));
  rep.max_violation = g_at_max - f;
  for (int k = 1; k < n_samples; ++k) {
    const Value z = detail::sample_z_like(entry.z_domain, zhat, rng);
    rep.max_violation = std::max(rep.max_violation, entry.eval_augmented(x, z) - f);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Entry factories. Fixed problem data (A, B, anchors, alpha, ...) is copied
// into the closures; shape mismatches surface as exceptions on first use.
// ---------------------------------------------------------------------------

inline CatalogEntry make_l1_norm(Eigen::Index n) {
  CatalogEntry e;
  e.id = "L1_NORM";
  e.z_domain = ZDomain::unit_box;
  e.primal = [](const Value& x) {
    return detail::as_vector(x, "L1_NORM").cwiseAbs().sum();
  };
  e.augmented_unchecked = [](const Value& x, const Value& z) {
    return detail::as_vector(z, "L1_NORM").dot(detail::as_vector(x, "L1_NORM"));
  };
  e.maximizer = [](const Value& x) -> Value {
    const Vector& v = detail::as_vector(x, "L1_NORM");
    Vector z(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) z[i] = v[i] > 0 ? 1.0 : (v[i] < 0 ? -1.0 : 0.0);
    return z;
  };
  e.sample_x = [n](Rng& rng) -> Value { return rng.gaussian_vector(n); };
  return e;
}

inline CatalogEntry make_nuclear_norm(Eigen::Index rows, Eigen::Index cols) {
  CatalogEntry e;
  e.id = "NUCLEAR_NORM";
  e.z_domain = ZDomain::spectral_ball;
  e.primal = [](const Value& x) {
    Eigen::JacobiSVD<Matrix> svd(detail::as_matrix(x, "NUCLEAR_NORM"));
    return svd.singularValues().sum();
  };
  e.augmented_unchecked = [](const Value& x, const Value& z) {
    return (detail::as_matrix(z, "NUCLEAR_NORM").transpose() *
            detail::as_matrix(x, "NUCLEAR_NORM")).trace();
  };
  e.maximizer = [](const Value& x) -> Value {
    // U V' from a thin SVD attains the dual-norm bound.
    Eigen::JacobiSVD<Matrix> svd(detail::as_matrix(x, "NUCLEAR_NORM"),
                                 Eigen::ComputeThinU | Eigen::ComputeThinV);
    return Matrix(svd.matrixU() * svd.matrixV().transpose());
  };
  e.sample_x = [rows, cols](Rng& rng) -> Value { return rng.gaussian_matrix(rows, cols); };
  return e;
}

inline CatalogEntry make_squared_l2(Eigen::Index n) {
  CatalogEntry e;
  e.id = "SQUARED_L2";
  e.z_domain = ZDomain::unconstrained;
  e.primal = [](const Value& x) { return detail::as_vector(x, "SQUARED_L2").squaredNorm(); };
  e.augmented_unchecked = [](const Value& x, const Value& z) {
    const Vector& zv = detail::as_vector(z, "SQUARED_L2");
    return 2.0 * zv.dot(detail::as_vector(x, "SQUARED_L2")) - zv.squaredNorm();
  };
  e.maximizer = [](const Value& x) -> Value { return detail::as_vector(x, "SQUARED_L2"); };
  e.sample_x = [n](Rng& rng) -> Value { return rng.gaussian_vector(n); };
  return e;
}

inline CatalogEntry make_huber(double alpha, Eigen::Index n) {
  if (alpha <= 0) throw std::invalid_argument("make_huber: alpha must be > 0");
  CatalogEntry e;
  e.id = "HUBER";
  e.z_domain = ZDomain::unit_box;
  e.primal = [alpha](const Value& x) {
    const Vector& v = detail::as_vector(x, "HUBER");
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double a = std::abs(v[i]);
      s += a <= alpha ? a * a / (2.0 * alpha) : a - alpha / 2.0;
    }
    return s;
  };
  e.augmented_unchecked = [alpha](const Value& x, const Value& z) {
    const Vector& zv = detail::as_vector(z, "HUBER");
    return detail::as_vector(x, "HUBER").dot(zv) - 0.5 * alpha * zv.squaredNorm();
  };
  e.maximizer = [alpha](const Value& x) -> Value {
    const Vector& v = detail::as_vector(x, "HUBER");
    Vector z = (v / alpha).cwiseMax(-1.0).cwiseMin(1.0);
    return z;
  };
  e.sample_x = [n](Rng& rng) -> Value { return rng.gaussian_vector(n); };
  return e;
}

inline CatalogEntry make_log_squared_dist(Matrix anchors) {
  // f(r) = sum_i (log ||r - s_i||)^2, anchors stacked as rows.
  CatalogEntry e;
  e.id = "LOG_SQUARED_DIST";
  e.z_domain = ZDomain::unconstrained;
  auto logs = [anchors](const Vector& r) {
    Vector out(anchors.rows());
    for (Eigen::Index i = 0; i < anchors.rows(); ++i) {
      const double d = (r - anchors.row(i).transpose()).norm();
      if (d <= 0.0) throw std::domain_error("LOG_SQUARED_DIST: point coincides with an anchor");
      out[i] = std::log(d);
    }
    return out;
  };
  e.primal = [logs](const Value& x) {
    return logs(detail::as_vector(x, "LOG_SQUARED_DIST")).squaredNorm();
  };
  e.augmented_unchecked = [logs](const Value& x, const Value& z) {
    const Vector& zv = detail::as_vector(z, "LOG_SQUARED_DIST");
    return 2.0 * zv.dot(logs(detail::as_vector(x, "LOG_SQUARED_DIST"))) - zv.squaredNorm();
  };
  e.maximizer = [logs](const Value& x) -> Value {
    return logs(detail::as_vector(x, "LOG_SQUARED_DIST"));
  };
  const Eigen::Index dim = anchors.cols();
  e.sample_x = [dim](Rng& rng) -> Value { return Vector(3.0 * rng.gaussian_vector(dim)); };
  return e;
}

inline CatalogEntry make_neg_logdet_waw(Matrix a, Eigen::Index n_cols) {
  // f(W) = -log|W' A W| for W in R^{m x n}, A > 0.
  if (!numerics::is_hermitian(a, 1e-9))
    throw std::invalid_argument("make_neg_logdet_waw: A must be symmetric");
  CatalogEntry e;
  e.id = "NEG_LOGDET_WAW";
  e.z_domain = ZDomain::pd_cone;
  auto gram = [a](const Value& x) {
    const Matrix& w = detail::as_matrix(x, "NEG_LOGDET_WAW");
    if (w.rows() != a.rows())
      throw std::invalid_argument("NEG_LOGDET_WAW: W rows must match A");
    return Matrix(w.transpose() * a * w);
  };
  e.primal = [gram](const Value& x) { return -numerics::logdet_hpd(gram(x)); };
  e.augmented_unchecked = [gram](const Value& x, const Value& z) {
    const Matrix& zm = detail::as_matrix(z, "NEG_LOGDET_WAW");
    const Matrix g = gram(x);
    return -(zm * g).trace() + numerics::logdet_hpd(zm) + double(g.rows());
  };
  e.maximizer = [gram](const Value& x) -> Value {
    const Matrix g = gram(x);
    return Matrix(numerics::solve_hpd(g, Matrix(Matrix::Identity(g.rows(), g.cols()))));
  };
  const Eigen::Index m = a.rows();
  e.sample_x = [m, n_cols](Rng& rng) -> Value { return rng.gaussian_matrix(m, n_cols); };
  return e;
}

inline CatalogEntry make_neg_2log_absdet(Eigen::Index n) {
  // f(W) = -2 log |det W| for nonsingular complex W.
  CatalogEntry e;
  e.id = "NEG_2LOG_ABSDET";
  e.z_domain = ZDomain::pd_cone;
  e.primal = [](const Value& x) {
    const CMatrix& w = detail::as_cmatrix(x, "NEG_2LOG_ABSDET");
    const double ad = std::abs(w.determinant());
    if (ad <= 0.0) throw std::domain_error("NEG_2LOG_ABSDET: W is singular");
    return -2.0 * std::log(ad);
  };
  e.augmented_unchecked = [](const Value& x, const Value& z) {
    const CMatrix& w = detail::as_cmatrix(x, "NEG_2LOG_ABSDET");
    const CMatrix& zm = detail::as_cmatrix(z, "NEG_2LOG_ABSDET");
    return -std::real((w * w.adjoint() * zm).trace()) + numerics::logdet_hpd(zm) +
           double(w.rows());
  };
  e.maximizer = [](const Value& x) -> Value {
    const CMatrix& w = detail::as_cmatrix(x, "NEG_2LOG_ABSDET");
    const CMatrix g = w * w.adjoint();
    return CMatrix(numerics::solve_hpd(g, CMatrix(CMatrix::Identity(g.rows(), g.cols()))));
  };
  e.sample_x = [n](Rng& rng) -> Value { return rng.cgaussian_matrix(n, n); };
  return e;
}

inline CatalogEntry make_neg_log_dist(Vector s) {
  // f(x) = -log ||x - s||^2.
  CatalogEntry e;
  e.id = "NEG_LOG_DIST";
  e.z_domain = ZDomain::positive_open;
  auto d2 = [s](const Value& x) {
    const double v = (detail::as_vector(x, "NEG_LOG_DIST") - s).squaredNorm();
    if (v <= 0.0) throw std::domain_error("NEG_LOG_DIST: x coincides with s");
    return v;
  };
  e.primal = [d2](const Value& x) { return -std::log(d2(x)); };
  e.augmented_unchecked = [d2](const Value& x, const Value& z) {
    const double zv = detail::as_scalar(z, "NEG_LOG_DIST");
    return std::log(zv) - zv * d2(x) + 1.0;
  };
  e.maximizer = [d2](const Value& x) -> Value { return 1.0 / d2(x); };
  const Eigen::Index dim = s.size();
  e.sample_x = [dim](Rng& rng) -> Value { return Vector(2.0 * rng.gaussian_vector(dim)); };
  return e;
}

namespace detail {

inline std::function<double(const Value&)> quad_form(Matrix a, const char* who) {
  if (!numerics::is_hermitian(a, 1e-9))
    throw std::invalid_argument(std::string(who) + ": A must be symmetric");
  std::string name = who;
  return [a, name](const Value& x) {
    const Vector& w = as_vector(x, name.c_str());
    if (w.size() != a.rows()) throw std::invalid_argument(name + ": dimension mismatch");
    const double q = w.dot(a * w);
    if (q <= 0.0) throw std::domain_error(name + ": quadratic form not positive");
    return q;
  };
}

}  // namespace detail

inline CatalogEntry make_neg_log_quad(Matrix a) {
  // f(w) = -log(w' A w), A > 0.
  CatalogEntry e;
  e.id = "NEG_LOG_QUAD";
  e.z_domain = ZDomain::positive_open;
  const Eigen::Index n = a.rows();
  auto q = detail::quad_form(std::move(a), "NEG_LOG_QUAD");
  e.primal = [q](const Value& x) { return -std::log(q(x)); };
  e.augmented_unchecked = [q](const Value& x, const Value& z) {
    const double zv = detail::as_scalar(z, "NEG_LOG_QUAD");
    return std::log(zv) - zv * q(x) + 1.0;
  };
  e.maximizer = [q](const Value& x) -> Value { return 1.0 / q(x); };
  e.sample_x = [n](Rng& rng) -> Value { return rng.gaussian_vector(n); };
  return e;
}

inline CatalogEntry make_neg_entropy_quad(Matrix a) {
  // f(x) = (x'Ax) log(x'Ax), A > 0.
  CatalogEntry e;
  e.id = "NEG_ENTROPY_QUAD";
  e.z_domain = ZDomain::unconstrained;
  auto q = detail::quad_form(a, "NEG_ENTROPY_QUAD");
  e.primal = [q](const Value& x) {
    const double t = q(x);
    return t * std::log(t);
  };
  e.augmented_unchecked = [q](const Value& x, const Value& z) {
    const double zv = detail::as_scalar(z, "NEG_ENTROPY_QUAD");
    return zv * q(x) - std::exp(zv - 1.0);
  };
  e.maximizer = [q](const Value& x) -> Value { return std::log(q(x)) + 1.0; };
  const Eigen::Index n = a.rows();
  e.sample_x = [n](Rng& rng) -> Value { return rng.gaussian_vector(n); };
  return e;
}

inline CatalogEntry make_inv_quad(Matrix a) {
  // f(w) = 1 / (w' A w), A > 0.
  CatalogEntry e;
  e.id = "INV_QUAD";
  e.z_domain = ZDomain::nonneg;
  auto q = detail::quad_form(a, "INV_QUAD");
  e.primal = [q](const Value& x) { return 1.0 / q(x); };
  e.augmented_unchecked = [q](const Value& x, const Value& z) {
    const double zv = detail::as_scalar(z, "INV_QUAD");
    return -zv * q(x) + 2.0 * std::sqrt(zv);
  };
  e.maximizer = [q](const Value& x) -> Value {
    const double t = q(x);
    return 1.0 / (t * t);
  };
  const Eigen::Index n = a.rows();
  e.sample_x = [n](Rng& rng) -> Value { return rng.gaussian_vector(n); };
  return e;
}

inline CatalogEntry make_fractional_quad(Matrix a, Matrix b) {
  // f(x) = (x'Bx) / (x'Ax), A, B > 0.
  CatalogEntry e;
  e.id = "FRACTIONAL_QUAD";
  e.z_domain = ZDomain::nonneg;
  auto qa = detail::quad_form(a, "FRACTIONAL_QUAD");
  auto qb = detail::quad_form(b, "FRACTIONAL_QUAD");
  const Matrix b_half = numerics::matrix_sqrt_psd(b);
  e.primal = [qa, qb](const Value& x) { return qb(x) / qa(x); };
  e.augmented_unchecked = [qa, b_half](const Value& x, const Value& z) {
    const double zv = detail::as_scalar(z, "FRACTIONAL_QUAD");
    const Vector& xv = detail::as_vector(x, "FRACTIONAL_QUAD");
    return -zv * qa(x) + 2.0 * (b_half * xv).norm() * std::sqrt(zv);
  };
  e.maximizer = [qa, qb](const Value& x) -> Value {
    const double ta = qa(x);
    return qb(x) / (ta * ta);
  };
  const Eigen::Index n = a.rows();
  e.sample_x = [n](Rng& rng) -> Value { return rng.gaussian_vector(n); };
  return e;
}

inline CatalogEntry make_trace_inv_waw(Matrix a, Eigen::Index n_cols) {
  // f(W) = Tr[(W' A W)^{-1}], A > 0.
  if (!numerics::is_hermitian(a, 1e-9))
    throw std::invalid_argument("make_trace_inv_waw: A must be symmetric");
  CatalogEntry e;
  e.id = "TRACE_INV_WAW";
  e.z_domain = ZDomain::pd_cone;
  auto gram = [a](const Value& x) {
    const Matrix& w = detail::as_matrix(x, "TRACE_INV_WAW");
    if (w.rows() != a.rows())
      throw std::invalid_argument("TRACE_INV_WAW: W rows must match A");
    return Matrix(w.transpose() * a * w);
  };
  e.primal = [gram](const Value& x) {
    const Matrix g = gram(x);
    return numerics::solve_hpd(g, Matrix(Matrix::Identity(g.rows(), g.cols()))).trace();
  };
  e.augmented_unchecked = [gram](const Value& x, const Value& z) {
    const Matrix& zm = detail::as_matrix(z, "TRACE_INV_WAW");
    return -(zm * gram(x)).trace() + 2.0 * numerics::matrix_sqrt_psd(zm).trace();
  };
  e.maximizer = [gram](const Value& x) -> Value {
    const Matrix g = gram(x);
    const Matrix gi = numerics::solve_hpd(g, Matrix(Matrix::Identity(g.rows(), g.cols())));
    return Matrix(gi * gi);
  };
  const Eigen::Index m = a.rows();
  e.sample_x = [m, n_cols](Rng& rng) -> Value { return rng.gaussian_matrix(m, n_cols); };
  return e;
}

inline CatalogEntry make_max_element(Eigen::Index n) {
  // f(x) = max_i x_i, the worst-case selector over the simplex.
  CatalogEntry e;
  e.id = "MAX_ELEMENT";
  e.z_domain = ZDomain::simplex;
  e.primal = [](const Value& x) { return detail::as_vector(x, "MAX_ELEMENT").maxCoeff(); };
  e.augmented_unchecked = [](const Value& x, const Value& z) {
    return detail::as_vector(x, "MAX_ELEMENT").dot(detail::as_vector(z, "MAX_ELEMENT"));
  };
  e.maximizer = [](const Value& x) -> Value {
    // Ties get uniform weight over the argmax set.
    const Vector& v = detail::as_vector(x, "MAX_ELEMENT");
    const double m = v.maxCoeff();
    Vector z = Vector::Zero(v.size());
    int ties = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (v[i] == m) ++ties;
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (v[i] == m) z[i] = 1.0 / ties;
    return z;
  };
  e.sample_x = [n](Rng& rng) -> Value { return rng.gaussian_vector(n); };
  return e;
}

// The fixed roster, with per-entry parameters drawn from `rng` at modest
// desk-scale dimensions.
inline std::vector<CatalogEntry> standard_roster(Rng& rng) {
  std::vector<CatalogEntry> out;
  out.push_back(make_l1_norm(5));
  out.push_back(make_nuclear_norm(4, 3));
  out.push_back(make_squared_l2(5));
  out.push_back(make_huber(0.7, 5));
  out.push_back(make_log_squared_dist(4.0 * rng.gaussian_matrix(4, 3)));
  out.push_back(make_neg_logdet_waw(rng.spd_matrix(4), 3));
  out.push_back(make_neg_2log_absdet(3));
  out.push_back(make_neg_log_dist(rng.gaussian_vector(3)));
  out.push_back(make_neg_log_quad(rng.spd_matrix(4)));
  out.push_back(make_neg_entropy_quad(rng.spd_matrix(4)));
  out.push_back(make_inv_quad(rng.spd_matrix(4)));
  out.push_back(make_fractional_quad(rng.spd_matrix(4), rng.spd_matrix(4)));
  out.push_back(make_trace_inv_waw(rng.spd_matrix(4), 3));
  out.push_back(make_max_element(5));
  return out;
}

}  // namespace mm4mm::catalog
