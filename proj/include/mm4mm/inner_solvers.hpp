#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "mm4mm/numerics.hpp"

// First-order solvers for the concave/convex inner subproblems that the
// framework would otherwise hand to an off-the-shelf convex solver, plus a
// finite-difference gradient checker and the reparameterizations used for
// open orthants and the PD cone.

namespace mm4mm::inner {

enum class Sense { minimize, maximize };

struct SmoothProblem {
  // value may return +inf outside an open domain; such trial points are
  // rejected by the line search.
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  std::function<Vector(const Vector&)> project;  // empty => unconstrained
  Sense sense = Sense::minimize;
};

struct InnerResult {
  Vector x;
  double value = 0.0;   // in the problem's own sense
  int iters = 0;
  bool stagnated = false;
};

namespace detail {

constexpr double kArmijoShrink = 0.5;
constexpr double kArmijoSlope = 1e-4;
constexpr int kMaxBacktracks = 60;

inline Vector apply_project(const SmoothProblem& p, const Vector& x) {
  return p.project ? p.project(x) : x;
}

}  // namespace detail

// Projected gradient with Armijo backtracking (shrink 0.5, sufficient
// decrease 1e-4, initial step 1.0, doubling after accepted steps). Stops on
// projected-gradient norm <= tol, a machine-precision value stall, or a
// fully failed backtrack (stagnation, reported in the result).
inline InnerResult projected_gradient(const SmoothProblem& p, Vector x0, double tol,
                                      int max_iters) {
  const double sign = p.sense == Sense::minimize ? 1.0 : -1.0;
  InnerResult res;
  res.x = detail::apply_project(p, std::move(x0));
  res.value = p.value(res.x);
  if (!std::isfinite(res.value))
    throw std::invalid_argument("projected_gradient: start point has non-finite value");
  double step = 1.0;
  double pg0 = -1.0;
  for (int k = 0; k < max_iters; ++k) {
    res.iters = k + 1;
    const Vector g = sign * p.gradient(res.x);  // descent direction is -g
    const Vector pg = res.x - detail::apply_project(p, res.x - g);
    if (pg0 < 0.0) pg0 = pg.norm();
    if (pg.norm() <= tol * (1.0 + pg0)) break;
    bool accepted = false;
    double s = step;
    Vector xn;
    double vn = 0.0;
    for (int bt = 0; bt < detail::kMaxBacktracks; ++bt) {
      xn = detail::apply_project(p, res.x - s * g);
      vn = sign * p.value(xn);
      const double slope = g.dot(xn - res.x);  // <= 0 for a descent move
      if (std::isfinite(vn) && vn <= sign * res.value + detail::kArmijoSlope * slope) {
        accepted = true;
        break;
      }
      s *= detail::kArmijoShrink;
    }
    if (!accepted) {
      res.stagnated = true;
      break;
    }
    const double prev = res.value;
    res.x = xn;
    res.value = sign * vn;
    step = std::min(2.0 * s, 1e12);
    // machine-precision floor on the per-step value change; the tolerance
    // proper is applied to the projected gradient above
    if (std::abs(prev - res.value) <= 1e-15 * std::max(1.0, std::abs(res.value))) break;
  }
  return res;
}

// Backtracking gradient descent that rejects any trial point violating the
// strict constraints c_i(x) > 0 (or driving the objective non-finite).
// Keeps every iterate strictly feasible.
inline InnerResult barrier_descent(const SmoothProblem& p,
                                   const std::vector<std::function<double(const Vector&)>>& strict,
                                   Vector x0, double tol, int max_iters) {
  auto feasible = [&strict](const Vector& x) {
    for (const auto& c : strict)
      if (!(c(x) > 0.0)) return false;
    return true;
  };
  if (!feasible(x0))
    throw std::invalid_argument("barrier_descent: start point violates a strict constraint");
  InnerResult res;
  res.x = std::move(x0);
  res.value = p.value(res.x);
  if (!std::isfinite(res.value))
    throw std::invalid_argument("barrier_descent: start point has non-finite value");
  double step = 1.0;
  double g0 = -1.0;
  for (int k = 0; k < max_iters; ++k) {
    res.iters = k + 1;
    const Vector g = p.gradient(res.x);
    if (g0 < 0.0) g0 = g.norm();
    if (g.norm() <= tol * (1.0 + g0)) break;
    bool accepted = false;
    double s = step;
    Vector xn;
    double vn = 0.0;
    for (int bt = 0; bt < detail::kMaxBacktracks; ++bt) {
      xn = res.x - s * g;
      if (feasible(xn)) {
        vn = p.value(xn);
        if (std::isfinite(vn) &&
            vn <= res.value - detail::kArmijoSlope * s * g.squaredNorm()) {
          accepted = true;
          break;
        }
      }
      s *= detail::kArmijoShrink;
    }
    if (!accepted) {
      res.stagnated = true;
      break;
    }
    const double prev = res.value;
    res.x = xn;
    res.value = vn;
    step = std::min(2.0 * s, 1e12);
    if (std::abs(prev - res.value) <= 1e-15 * std::max(1.0, std::abs(res.value))) break;
  }
  return res;
}

// Central finite differences against the analytic gradient; returns the
// worst relative component error.
inline double check_gradient(const SmoothProblem& p, const Vector& x, double h = 0.0) {
  const Vector g = p.gradient(x);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double hi = h > 0.0 ? h : 1e-6 * (1.0 + std::abs(x[i]));
    Vector xp = x, xm = x;
    xp[i] += hi;
    xm[i] -= hi;
    const double fd = (p.value(xp) - p.value(xm)) / (2.0 * hi);
    const double denom = std::max({1.0, std::abs(g[i]), std::abs(fd)});
    worst = std::max(worst, std::abs(fd - g[i]) / denom);
  }
  return worst;
}

// Reparameterize a problem over the open positive orthant as an
// unconstrained one via x = exp(u); iterates stay strictly feasible.
inline SmoothProblem log_reparam(const SmoothProblem& p) {
  SmoothProblem q;
  q.sense = p.sense;
  q.value = [p](const Vector& u) { return p.value(u.array().exp().matrix()); };
  q.gradient = [p](const Vector& u) {
    const Vector x = u.array().exp().matrix();
    return Vector(p.gradient(x).cwiseProduct(x));
  };
  return q;
}

// Parameterization of a Hermitian positive definite matrix as Z = L L^H
// with L lower triangular and exp-parameterized positive diagonal; the
// chain rule maps a Euclidean Hermitian gradient G on Z to the packed
// parameter gradient (2 G L restricted to the lower triangle).
class HermitianPdParam {
 public:
  explicit HermitianPdParam(Eigen::Index n) : n_(n) {}

  Eigen::Index param_count() const { return n_ * n_; }  // n log-diagonals + n(n-1) re/im

  Vector pack(const CMatrix& z) const {
    Eigen::LLT<CMatrix> llt(((z + z.adjoint()) / 2.0).eval());
    if (llt.info() != Eigen::Success)
      throw std::domain_error("HermitianPdParam::pack: matrix not positive definite");
    CMatrix l = llt.matrixL();
    Vector v(param_count());
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n_; ++i) v[k++] = std::log(std::real(l(i, i)));
    for (Eigen::Index j = 0; j < n_; ++j)
      for (Eigen::Index i = j + 1; i < n_; ++i) {
        v[k++] = std::real(l(i, j));
        v[k++] = std::imag(l(i, j));
      }
    return v;
  }

  CMatrix factor(const Vector& v) const {
    CMatrix l = CMatrix::Zero(n_, n_);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n_; ++i) l(i, i) = std::exp(v[k++]);
    for (Eigen::Index j = 0; j < n_; ++j)
      for (Eigen::Index i = j + 1; i < n_; ++i) {
        l(i, j) = std::complex<double>(v[k], v[k + 1]);
        k += 2;
      }
    return l;
  }

  CMatrix unpack(const Vector& v) const {
    const CMatrix l = factor(v);
    return l * l.adjoint();
  }

  // Gradient of h(Z(v)) given the Hermitian Euclidean gradient G = dh/dZ.
  Vector grad_chain(const Vector& v, const CMatrix& g) const {
    const CMatrix l = factor(v);
    const CMatrix gl = 2.0 * (g * l);
    Vector out(param_count());
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n_; ++i)
      out[k++] = std::real(gl(i, i)) * std::real(l(i, i));  // d/du of exp(u) diagonal
    for (Eigen::Index j = 0; j < n_; ++j)
      for (Eigen::Index i = j + 1; i < n_; ++i) {
        out[k++] = std::real(gl(i, j));
        out[k++] = std::imag(gl(i, j));
      }
    return out;
  }

 private:
  Eigen::Index n_;
};

// Exact-ish minimizers for tiny nonsmooth convex problems (the fair-PCA
// simplex subproblem): golden-section on a segment and a shrinking
// barycentric pattern search on the simplex. Both are deterministic.
inline double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                                 int iters = 180) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int k = 0; k < iters; ++k) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  const double mid = (a + b) / 2.0;
  return mid;
}

namespace detail {

inline void bary_lattice_rec(int k_left, int m_left, std::vector<int>& cur,
                             std::vector<Vector>& out, int m) {
  if (k_left == 1) {
    cur.push_back(m_left);
    Vector v(cur.size());
    for (size_t i = 0; i < cur.size(); ++i) v[static_cast<Eigen::Index>(i)] = double(cur[i]) / m;
    out.push_back(v);
    cur.pop_back();
    return;
  }
  for (int i = 0; i <= m_left; ++i) {
    cur.push_back(i);
    bary_lattice_rec(k_left - 1, m_left - i, cur, out, m);
    cur.pop_back();
  }
}

inline std::vector<Vector> bary_lattice(int dim, int m) {
  std::vector<Vector> out;
  std::vector<int> cur;
  bary_lattice_rec(dim, m, cur, out, m);
  return out;
}

}  // namespace detail

// Minimize a convex function over the probability simplex by evaluating a
// barycentric lattice on a patch around the incumbent and shrinking the
// patch only when no lattice point improves.
inline Vector simplex_pattern_min(const std::function<double(const Vector&)>& f, int dim,
                                  Vector start, int lattice_m = 8, int max_rounds = 220,
                                  double radius_floor = 1e-14) {
  const auto lattice = detail::bary_lattice(dim, lattice_m);
  Vector c = std::move(start);
  double fc = f(c);
  double rho = 1.0;
  const Vector center = Vector::Constant(dim, 1.0 / dim);
  (void)center;
  for (int round = 0; round < max_rounds; ++round) {
    bool improved = false;
    for (const Vector& v : lattice) {
      Vector z = (1.0 - rho) * c + rho * v;
      const double fz = f(z);
      if (fz < fc - 1e-15 * std::max(1.0, std::abs(fc))) {
        fc = fz;
        c = z;
        improved = true;
      }
    }
    if (!improved) {
      rho *= 0.5;
      if (rho < radius_floor) break;
    }
  }
  return c;
}

}  // namespace mm4mm::inner
