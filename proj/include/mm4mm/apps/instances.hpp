#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mm4mm/numerics.hpp"

// The ten application problem instances plus seeded synthetic generators.
// Generators are pure functions of their size parameters, the noise level
// and the seed; ground truth is returned where the problem defines one.

namespace mm4mm::apps {

// --- Total variation filtering -------------------------------------------
struct TvInstance {
  Vector y;       // noisy signal, length >= 2
  double lambda;  // > 0

  void validate() const {
    if (y.size() < 2) throw std::invalid_argument("TvInstance: signal length must be >= 2");
    if (!(lambda > 0.0)) throw std::invalid_argument("TvInstance: lambda must be > 0");
  }
};

// --- Phase retrieval under Poisson noise ----------------------------------
struct PoissonPrInstance {
  CMatrix A;  // M x n sampling matrix, rows a_i^H
  Vector y;   // nonnegative counts
  Vector b;   // nonnegative background

  void validate() const {
    if (A.rows() < A.cols()) throw std::invalid_argument("PoissonPrInstance: need M >= n");
    if (y.size() != A.rows() || b.size() != A.rows())
      throw std::invalid_argument("PoissonPrInstance: measurement size mismatch");
    if (y.minCoeff() < 0.0) throw std::invalid_argument("PoissonPrInstance: y must be >= 0");
    if (b.minCoeff() < 0.0) throw std::invalid_argument("PoissonPrInstance: b must be >= 0");
  }
};

// --- Outlier-robust phase retrieval (reverse KL divergence) ---------------
struct RkldInstance {
  CMatrix A;  // M x n
  Vector y;   // strictly positive measurements

  void validate() const {
    if (y.size() != A.rows()) throw std::invalid_argument("RkldInstance: size mismatch");
    if (y.minCoeff() <= 0.0) throw std::invalid_argument("RkldInstance: y must be > 0");
  }
};

// --- RSS-based source localization -----------------------------------------
struct RssInstance {
  Matrix sensors;  // M x n sensor positions (n = 2 or 3)
  Vector p;        // measured powers, dB
  double p0;       // reference power at unit distance
  double alpha;    // path-loss constant

  void validate() const {
    const auto n = sensors.cols();
    if (n != 2 && n != 3) throw std::invalid_argument("RssInstance: dimension must be 2 or 3");
    if (sensors.rows() < n + 1)
      throw std::invalid_argument("RssInstance: need at least n+1 sensors");
    if (p.size() != sensors.rows()) throw std::invalid_argument("RssInstance: power size mismatch");
    for (Eigen::Index i = 0; i < sensors.rows(); ++i)
      for (Eigen::Index j = i + 1; j < sensors.rows(); ++j)
        if ((sensors.row(i) - sensors.row(j)).norm() < 1e-12)
          throw std::invalid_argument("RssInstance: sensors must be distinct");
  }

  // y_i = 10 alpha (p0 - p_i) / log(10)
  Vector log_range_observations() const {
    return (10.0 * alpha / std::log(10.0)) * (Vector::Constant(p.size(), p0) - p);
  }
};

// --- Optimal sensor placement (A-optimal orientation design) ---------------
struct PlacementInstance {
  int M = 0;     // sensor count
  int n = 0;     // dimension, 2 or 3
  Matrix Sigma;  // M x M HPD noise covariance

  void validate() const {
    if (n != 2 && n != 3) throw std::invalid_argument("PlacementInstance: n must be 2 or 3");
    if (M < n) throw std::invalid_argument("PlacementInstance: need M >= n");
    if (Sigma.rows() != M || Sigma.cols() != M)
      throw std::invalid_argument("PlacementInstance: Sigma must be M x M");
  }
};

// --- Independent vector analysis (one fixed-weight inner problem) ----------
struct IvaInstance {
  std::vector<CMatrix> V;  // M weighted covariance matrices, each M x M HPD

  void validate() const {
    const size_t M = V.size();
    if (M < 1) throw std::invalid_argument("IvaInstance: need at least one covariance");
    for (const auto& v : V)
      if (v.rows() != static_cast<Eigen::Index>(M) || v.cols() != static_cast<Eigen::Index>(M))
        throw std::invalid_argument("IvaInstance: each V_k must be M x M");
  }
};

// --- Dual-function radar/communication beamforming -------------------------
struct DfrcInstance {
  std::vector<CVector> steering;  // P transmit steering vectors (length n_T)
  CVector beta;                   // P complex target amplitudes
  CMatrix H;                      // K x n_T channel rows h_k^H (K may be 0)
  Vector Gamma_hat;               // K SINR floors (Gamma_hat_k > 0)
  double sigmaC2 = 1.0;           // communication noise power
  double eT = 1.0;                // transmit energy budget

  int n_T() const { return steering.empty() ? 0 : static_cast<int>(steering[0].size()); }
  int K() const { return static_cast<int>(Gamma_hat.size()); }
  int P() const { return static_cast<int>(steering.size()); }
  // beamformer lives in C^{n_T * max(K,1)}
  int dim() const { return n_T() * std::max(K(), 1); }

  void validate() const {
    if (steering.empty()) throw std::invalid_argument("DfrcInstance: need at least one target");
    for (const auto& a : steering)
      if (a.norm() <= 0.0) throw std::invalid_argument("DfrcInstance: steering must be nonzero");
    if (beta.size() != P()) throw std::invalid_argument("DfrcInstance: beta size mismatch");
    if (!(eT > 0.0)) throw std::invalid_argument("DfrcInstance: eT must be > 0");
    if (K() > 0 && (H.rows() != K() || H.cols() != n_T()))
      throw std::invalid_argument("DfrcInstance: H must be K x n_T");
  }
};

// --- E-optimal experiment design --------------------------------------------
struct EoptInstance {
  Matrix A;  // n x M design matrix, full row rank

  void validate() const {
    if (A.rows() > A.cols()) throw std::invalid_argument("EoptInstance: need M >= n");
    Eigen::JacobiSVD<Matrix> svd(A);
    if (svd.singularValues().minCoeff() < 1e-10)
      throw std::invalid_argument("EoptInstance: A must have full row rank");
  }
};

// --- Quantum state discrimination -------------------------------------------
struct QsdInstance {
  std::vector<CMatrix> rho;  // M PSD density matrices with sum of traces = 1
  Vector p;                  // prior probabilities on the simplex

  void validate() const {
    if (rho.size() < 2) throw std::invalid_argument("QsdInstance: need at least two states");
    double tr = 0.0;
    for (const auto& r : rho) {
      if (r.rows() != r.cols() || r.rows() != rho[0].rows())
        throw std::invalid_argument("QsdInstance: density matrices must share a square shape");
      tr += std::real(r.trace());
    }
    if (std::abs(tr - 1.0) > 1e-10)
      throw std::invalid_argument("QsdInstance: density-matrix traces must sum to 1");
    if (p.size() != static_cast<Eigen::Index>(rho.size()) || p.minCoeff() < -1e-10 ||
        std::abs(p.sum() - 1.0) > 1e-10)
      throw std::invalid_argument("QsdInstance: priors must lie on the simplex");
  }
};

// --- Fair principal component analysis --------------------------------------
struct FairPcaInstance {
  std::vector<Matrix> C;  // K class covariance matrices, n x n PSD
  int r = 1;              // component count, <= n

  void validate() const {
    if (C.empty()) throw std::invalid_argument("FairPcaInstance: need at least one class");
    const auto n = C[0].rows();
    for (const auto& c : C)
      if (c.rows() != n || c.cols() != n)
        throw std::invalid_argument("FairPcaInstance: covariances must share a square shape");
    if (r < 1 || r > n) throw std::invalid_argument("FairPcaInstance: need 1 <= r <= n");
  }
};

// ---------------------------------------------------------------------------
// Seeded generators.
// ---------------------------------------------------------------------------

template <class Inst, class Truth>
struct Generated {
  Inst instance;
  std::optional<Truth> truth;
};

inline Generated<TvInstance, Vector> generate_tv(int n, double lambda, double noise,
                                               std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate_tv: n must be >= 2");
  Rng rng(seed);
  // piecewise-constant signal with a few jumps
  Vector clean(n);
  double level = rng.gaussian();
  for (int i = 0; i < n; ++i) {
    if (i > 0 && rng.uniform() < 0.15) level = rng.gaussian();
    clean[i] = level;
  }
  Vector y = clean;
  for (int i = 0; i < n; ++i) y[i] += noise * rng.gaussian();
  return {{y, lambda}, clean};
}

inline Generated<PoissonPrInstance, CVector> generate_poisson_pr(int n, int M, double noise,
                                                                 std::uint64_t seed) {
  if (M < n) throw std::invalid_argument("generate_poisson_pr: need M >= n");
  Rng rng(seed);
  PoissonPrInstance inst;
  inst.A = rng.cgaussian_matrix(M, n);
  CVector xbar = rng.cgaussian_vector(n);
  inst.b = Vector(M);
  for (int i = 0; i < M; ++i) inst.b[i] = rng.uniform(0.1, 1.0);
  Vector mu = (inst.A * xbar).cwiseAbs2() + inst.b;
  inst.y = mu;
  if (noise > 0.0) {
    // Poisson counts by inversion from the mean intensities
    for (int i = 0; i < M; ++i) {
      const double lam = mu[i];
      double u = rng.uniform();
      double pk = std::exp(-lam), cdf = pk;
      int k = 0;
      while (u > cdf && k < 10000) {
        ++k;
        pk *= lam / k;
        cdf += pk;
      }
      inst.y[i] = k;
    }
  }
  return {std::move(inst), xbar};
}

inline Generated<RkldInstance, CVector> generate_rkld(int n, int M, double noise,
                                                      std::uint64_t seed) {
  Rng rng(seed);
  RkldInstance inst;
  inst.A = rng.cgaussian_matrix(M, n);
  CVector xbar = rng.cgaussian_vector(n);
  inst.y = (inst.A * xbar).cwiseAbs2();
  if (noise > 0.0) {
    // sparse multiplicative outliers
    for (int i = 0; i < M; ++i)
      if (rng.uniform() < 0.2) inst.y[i] *= 1.0 + noise * std::abs(rng.gaussian());
  }
  inst.y = inst.y.cwiseMax(1e-6);
  return {std::move(inst), xbar};
}

inline Generated<RssInstance, Vector> generate_rss(int n, int M, double noise, std::uint64_t seed,
                                                   bool symmetric = false) {
  Rng rng(seed);
  RssInstance inst;
  inst.p0 = 0.0;
  // 10 alpha = log 10 makes the dB model and the log-range observations
  // y_i = 10 alpha (p0 - p_i) / log 10 agree exactly (unit conversion 1).
  inst.alpha = std::log(10.0) / 10.0;
  Vector xbar;
  if (symmetric) {
    if (n != 2 || M != 4)
      throw std::invalid_argument("generate_rss: symmetric layout requires n=2, M=4");
    inst.sensors = Matrix(4, 2);
    inst.sensors << 2, 2, -2, 2, -2, -2, 2, -2;
    xbar = Vector::Zero(2);
  } else {
    xbar = 0.5 * rng.gaussian_vector(n);
    // keep every sensor comfortably in the far field of the source
    inst.sensors = Matrix(M, n);
    for (int i = 0; i < M; ++i) {
      Vector s;
      do {
        s = 4.0 * rng.gaussian_vector(n);
      } while ((s - xbar).norm() <= 1.6);
      inst.sensors.row(i) = s.transpose();
    }
  }
  inst.p = Vector(M);
  const double c = 10.0 * inst.alpha / std::log(10.0);
  for (int i = 0; i < M; ++i) {
    const double d = (xbar - inst.sensors.row(i).transpose()).norm();
    inst.p[i] = inst.p0 - c * std::log(d) + noise * rng.gaussian();
  }
  return {std::move(inst), xbar};
}

inline Generated<PlacementInstance, Vector> generate_placement(int n, int M, double spread,
                                                               std::uint64_t seed) {
  Rng rng(seed);
  PlacementInstance inst;
  inst.n = n;
  inst.M = M;
  if (spread > 0.0) {
    Matrix g = rng.gaussian_matrix(M, M);
    inst.Sigma = Matrix::Identity(M, M) + spread * (g * g.transpose()) / double(M);
  } else {
    inst.Sigma = Matrix::Identity(M, M);
  }
  return {std::move(inst), std::nullopt};
}

inline Generated<IvaInstance, Vector> generate_iva(int M, double spread, std::uint64_t seed) {
  Rng rng(seed);
  IvaInstance inst;
  for (int k = 0; k < M; ++k) {
    CMatrix g = rng.cgaussian_matrix(M, M);
    inst.V.push_back(CMatrix(spread * (g * g.adjoint()) / double(M) +
                             (0.3 + 0.2 * rng.uniform()) * CMatrix::Identity(M, M)));
  }
  return {std::move(inst), std::nullopt};
}

inline Generated<DfrcInstance, Vector> generate_dfrc(int nT, int K, int P, std::uint64_t seed) {
  Rng rng(seed);
  DfrcInstance inst;
  inst.sigmaC2 = 1.0;
  inst.eT = rng.uniform(0.5, 3.0);
  inst.beta = CVector(P);
  for (int p = 0; p < P; ++p) {
    // uniform-linear-array steering at a random angle
    const double theta = rng.uniform(-1.2, 1.2);
    CVector a(nT);
    for (int m = 0; m < nT; ++m)
      a[m] = std::exp(std::complex<double>(0.0, M_PI * m * std::sin(theta)));
    inst.steering.push_back(a);
    inst.beta[p] = 0.5 + rng.uniform() + 0.3 * rng.cgaussian();
  }
  // SINR floors set to a quarter of what the default start achieves, so
  // generated instances are always feasible; channels with a non-positive
  // form at the start are redrawn
  const int dim = nT * std::max(K, 1);
  CVector w0 = CVector::Constant(dim, std::complex<double>(1.0, 0.0));
  w0 *= std::sqrt(inst.eT) / w0.norm();
  inst.H = CMatrix(K, nT);
  inst.Gamma_hat = Vector(K);
  for (int k = 0; k < K; ++k) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      const CVector h = rng.cgaussian_vector(nT);
      inst.H.row(k) = h.adjoint();
      CMatrix lam = -CMatrix::Identity(K, K);  // placeholder ratios, filled below
      lam.setIdentity();
      lam *= -1.0;
      lam(k, k) = 1.0;
      const CMatrix hmat = h * h.adjoint();
      const CMatrix that = numerics::kron(CMatrix(lam), CMatrix(hmat.transpose()));
      const double q = std::real(w0.dot(that * w0));
      if (q > 0.01) {
        inst.Gamma_hat[k] = 0.25 * q / inst.sigmaC2;
        break;
      }
    }
  }
  return {std::move(inst), std::nullopt};
}

inline Generated<EoptInstance, Vector> generate_eopt(int n, int M, std::uint64_t seed) {
  Rng rng(seed);
  EoptInstance inst;
  do {
    inst.A = rng.gaussian_matrix(n, M);
  } while (Eigen::JacobiSVD<Matrix>(inst.A).singularValues().minCoeff() < 1e-6);
  return {std::move(inst), std::nullopt};
}

inline Generated<QsdInstance, Vector> generate_qsd(int n, int M, std::uint64_t seed) {
  Rng rng(seed);
  QsdInstance inst;
  double tr = 0.0;
  for (int i = 0; i < M; ++i) {
    CMatrix g = rng.cgaussian_matrix(n, n);
    CMatrix r = g * g.adjoint();
    inst.rho.push_back(r);
    tr += std::real(r.trace());
  }
  for (auto& r : inst.rho) r /= tr;
  Vector p(M);
  for (int i = 0; i < M; ++i) p[i] = rng.uniform(0.5, 2.0);
  inst.p = p / p.sum();
  return {std::move(inst), std::nullopt};
}

inline Generated<FairPcaInstance, Vector> generate_fair_pca(int n, int K, int r,
                                                            std::uint64_t seed) {
  Rng rng(seed);
  FairPcaInstance inst;
  inst.r = r;
  for (int k = 0; k < K; ++k) {
    Matrix g = rng.gaussian_matrix(n, n);
    inst.C.push_back(Matrix((g * g.transpose()) / double(n)));
  }
  return {std::move(inst), std::nullopt};
}

}  // namespace mm4mm::apps
