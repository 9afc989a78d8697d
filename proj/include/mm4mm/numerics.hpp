#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

// Dense real/complex kernels and constraint-set projections shared by the
// catalog, the MM drivers and the application solvers.

namespace mm4mm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

namespace numerics {

// Relative tolerance for calling a matrix Hermitian / an eigenvalue zero.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdClipTol = 1e-10;

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = kHermitianTol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

namespace detail {

template <typename MatT>
MatT symmetrize(const MatT& m) {
  return ((m + m.adjoint()) / 2.0).eval();
}

inline void require_square(Eigen::Index rows, Eigen::Index cols, const char* op) {
  if (rows != cols)
    throw std::invalid_argument(std::string(op) + ": matrix must be square, got " +
                                std::to_string(rows) + "x" + std::to_string(cols));
}

}  // namespace detail

template <typename MatT>
struct EigResult {
  Vector eigenvalues;   // ascending
  MatT eigenvectors;    // columns orthonormal
};

// Eigendecomposition of a Hermitian(-tagged) matrix. The input is
// symmetrized first so that cone projections stay well-defined under the
// roundoff accumulated by iterative updates.
template <typename MatT>
EigResult<MatT> eig_hermitian(const MatT& m) {
  detail::require_square(m.rows(), m.cols(), "eig_hermitian");
  Eigen::SelfAdjointEigenSolver<MatT> es(detail::symmetrize(m));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eig_hermitian: eigensolver failed to converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

// Matrix square root of a numerically PSD matrix. Eigenvalues in
// [-kPsdClipTol*scale, 0) are clipped to zero; anything more negative is a
// domain error.
template <typename MatT>
MatT matrix_sqrt_psd(const MatT& m) {
  auto eig = eig_hermitian(m);
  const double scale = std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff());
  const double floor = -kPsdClipTol * scale;
  Vector sq(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < sq.size(); ++i) {
    const double lam = eig.eigenvalues[i];
    if (lam < floor)
      throw std::domain_error("matrix_sqrt_psd: matrix is indefinite (lambda_min = " +
                              std::to_string(lam) + ")");
    sq[i] = std::sqrt(std::max(lam, 0.0));
  }
  return eig.eigenvectors * sq.asDiagonal() * eig.eigenvectors.adjoint();
}

// Solve m * X = rhs for Hermitian positive definite m via Cholesky.
template <typename MatT, typename RhsT>
RhsT solve_hpd(const MatT& m, const RhsT& rhs) {
  detail::require_square(m.rows(), m.cols(), "solve_hpd");
  if (m.rows() != rhs.rows())
    throw std::invalid_argument("solve_hpd: dimension mismatch");
  Eigen::LLT<MatT> llt(detail::symmetrize(m));
  if (llt.info() != Eigen::Success) {
    auto eig = eig_hermitian(m);
    throw std::domain_error("solve_hpd: matrix not positive definite (lambda_min = " +
                            std::to_string(eig.eigenvalues.minCoeff()) + ")");
  }
  return llt.solve(rhs);
}

template <typename MatT>
double logdet_hpd(const MatT& m) {
  detail::require_square(m.rows(), m.cols(), "logdet_hpd");
  Eigen::LLT<MatT> llt(detail::symmetrize(m));
  if (llt.info() != Eigen::Success) {
    auto eig = eig_hermitian(m);
    throw std::domain_error("logdet_hpd: matrix not positive definite (lambda_min = " +
                            std::to_string(eig.eigenvalues.minCoeff()) + ")");
  }
  double s = 0.0;
  const MatT& packed = llt.matrixLLT();  // diagonal holds diag(L)
  for (Eigen::Index i = 0; i < m.rows(); ++i) s += std::log(std::real(packed(i, i)));
  return 2.0 * s;
}

// Nearest (Frobenius) PSD matrix: eigenvalues clipped at zero.
template <typename MatT>
MatT project_psd(const MatT& m) {
  auto eig = eig_hermitian(m);
  Vector clipped = eig.eigenvalues.cwiseMax(0.0);
  return eig.eigenvectors * clipped.asDiagonal() * eig.eigenvectors.adjoint();
}

// Euclidean projection onto the probability simplex {z >= 0, 1'z = 1},
// by the usual sort-and-threshold rule.
inline Vector project_simplex(const Vector& v) {
  const Eigen::Index n = v.size();
  if (n < 1) throw std::invalid_argument("project_simplex: empty vector");
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, theta = 0.0;
  Eigen::Index rho = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    css += u[static_cast<size_t>(i)];
    const double t = (css - 1.0) / static_cast<double>(i + 1);
    if (u[static_cast<size_t>(i)] - t > 0) {
      rho = i;
      theta = t;
    }
  }
  (void)rho;
  return (v.array() - theta).cwiseMax(0.0);
}

inline Vector project_box(const Vector& v, double lo, double hi) {
  if (lo > hi) throw std::invalid_argument("project_box: lo > hi");
  return v.cwiseMax(lo).cwiseMin(hi);
}

template <typename MatT>
MatT kron(const MatT& a, const MatT& b) {
  MatT out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace numerics

// Seeded random source. All randomness flows through one of these, passed by
// the caller; gaussians are produced by Box-Muller on the raw engine so
// streams do not depend on the standard library's distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * M_PI * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
  }

  std::complex<double> cgaussian() { return {gaussian(), gaussian()}; }

  int uniform_int(int lo, int hi) {  // inclusive
    const int span = hi - lo + 1;
    if (span <= 0) throw std::invalid_argument("uniform_int: empty range");
    return lo + std::min(span - 1, static_cast<int>(uniform() * span));
  }

  Vector gaussian_vector(Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = gaussian();
    return v;
  }

  CVector cgaussian_vector(Eigen::Index n) {
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = cgaussian();
    return v;
  }

  Matrix gaussian_matrix(Eigen::Index r, Eigen::Index c) {
    Matrix m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
      for (Eigen::Index i = 0; i < r; ++i) m(i, j) = gaussian();
    return m;
  }

  CMatrix cgaussian_matrix(Eigen::Index r, Eigen::Index c) {
    CMatrix m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
      for (Eigen::Index i = 0; i < r; ++i) m(i, j) = cgaussian();
    return m;
  }

  // Random HPD matrix G G^H / n + ridge I.
  Matrix spd_matrix(Eigen::Index n, double ridge = 0.1) {
    Matrix g = gaussian_matrix(n, n);
    return (g * g.transpose() / static_cast<double>(n) + ridge * Matrix::Identity(n, n)).eval();
  }

  CMatrix hpd_matrix(Eigen::Index n, double ridge = 0.1) {
    CMatrix g = cgaussian_matrix(n, n);
    return (g * g.adjoint() / static_cast<double>(n) + ridge * CMatrix::Identity(n, n)).eval();
  }

  // Uniform point on the probability simplex (flat Dirichlet via
  // normalized exponentials).
  Vector dirichlet(Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double u = 0.0;
      do {
        u = uniform();
      } while (u <= 0.0);
      v[i] = -std::log(u);
    }
    return v / v.sum();
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mm4mm
