#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "mm4mm/apps/apps.hpp"

// JSON schema for application instances:
//   { "app_id": ..., "seed": ..., "sizes": {...}, "noise": ...,
//     "data": { per-app matrices as nested arrays, complex entries as
//               {"re": ..., "im": ...} } }

namespace mm4mm::apps::io {

using nlohmann::json;

inline json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

inline json to_json(const std::complex<double>& c) {
  return json{{"im", c.imag()}, {"re", c.real()}};
}

inline json to_json(const CVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v[i]));
  return a;
}

inline json to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(to_json(m(i, j)));
    rows.push_back(r);
  }
  return rows;
}

inline Vector vector_from_json(const json& a) {
  Vector v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

inline Matrix matrix_from_json(const json& a) {
  const size_t rows = a.size();
  const size_t cols = rows == 0 ? 0 : a[0].size();
  Matrix m(rows, cols);
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a[i][j].get<double>();
  return m;
}

inline std::complex<double> complex_from_json(const json& c) {
  return {c.at("re").get<double>(), c.at("im").get<double>()};
}

inline CVector cvector_from_json(const json& a) {
  CVector v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from_json(a[i]);
  return v;
}

inline CMatrix cmatrix_from_json(const json& a) {
  const size_t rows = a.size();
  const size_t cols = rows == 0 ? 0 : a[0].size();
  CMatrix m(rows, cols);
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          complex_from_json(a[i][j]);
  return m;
}

// ---------------------------------------------------------------------------

inline json instance_to_json(const TvInstance& inst) {
  return json{{"y", to_json(inst.y)}, {"lambda", inst.lambda}};
}
inline TvInstance tv_from_json(const json& j) {
  return {vector_from_json(j.at("y")), j.at("lambda").get<double>()};
}

inline json instance_to_json(const PoissonPrInstance& inst) {
  return json{{"A", to_json(inst.A)}, {"y", to_json(inst.y)}, {"b", to_json(inst.b)}};
}
inline PoissonPrInstance poisson_pr_from_json(const json& j) {
  return {cmatrix_from_json(j.at("A")), vector_from_json(j.at("y")),
          vector_from_json(j.at("b"))};
}

inline json instance_to_json(const RkldInstance& inst) {
  return json{{"A", to_json(inst.A)}, {"y", to_json(inst.y)}};
}
inline RkldInstance rkld_from_json(const json& j) {
  return {cmatrix_from_json(j.at("A")), vector_from_json(j.at("y"))};
}

inline json instance_to_json(const RssInstance& inst) {
  return json{{"sensors", to_json(inst.sensors)},
              {"p", to_json(inst.p)},
              {"p0", inst.p0},
              {"alpha", inst.alpha}};
}
inline RssInstance rss_from_json(const json& j) {
  return {matrix_from_json(j.at("sensors")), vector_from_json(j.at("p")),
          j.at("p0").get<double>(), j.at("alpha").get<double>()};
}

inline json instance_to_json(const PlacementInstance& inst) {
  return json{{"M", inst.M}, {"n", inst.n}, {"Sigma", to_json(inst.Sigma)}};
}
inline PlacementInstance placement_from_json(const json& j) {
  return {j.at("M").get<int>(), j.at("n").get<int>(), matrix_from_json(j.at("Sigma"))};
}

inline json instance_to_json(const IvaInstance& inst) {
  json vs = json::array();
  for (const auto& v : inst.V) vs.push_back(to_json(v));
  return json{{"V", vs}};
}
inline IvaInstance iva_from_json(const json& j) {
  IvaInstance inst;
  for (const auto& v : j.at("V")) inst.V.push_back(cmatrix_from_json(v));
  return inst;
}

inline json instance_to_json(const DfrcInstance& inst) {
  json st = json::array();
  for (const auto& a : inst.steering) st.push_back(to_json(a));
  return json{{"steering", st},          {"beta", to_json(inst.beta)},
              {"H", to_json(inst.H)},    {"Gamma_hat", to_json(inst.Gamma_hat)},
              {"sigmaC2", inst.sigmaC2}, {"eT", inst.eT}};
}
inline DfrcInstance dfrc_from_json(const json& j) {
  DfrcInstance inst;
  for (const auto& a : j.at("steering")) inst.steering.push_back(cvector_from_json(a));
  inst.beta = cvector_from_json(j.at("beta"));
  inst.H = cmatrix_from_json(j.at("H"));
  inst.Gamma_hat = vector_from_json(j.at("Gamma_hat"));
  inst.sigmaC2 = j.at("sigmaC2").get<double>();
  inst.eT = j.at("eT").get<double>();
  return inst;
}

inline json instance_to_json(const EoptInstance& inst) { return json{{"A", to_json(inst.A)}}; }
inline EoptInstance eopt_from_json(const json& j) { return {matrix_from_json(j.at("A"))}; }

inline json instance_to_json(const QsdInstance& inst) {
  json rhos = json::array();
  for (const auto& r : inst.rho) rhos.push_back(to_json(r));
  return json{{"rho", rhos}, {"p", to_json(inst.p)}};
}
inline QsdInstance qsd_from_json(const json& j) {
  QsdInstance inst;
  for (const auto& r : j.at("rho")) inst.rho.push_back(cmatrix_from_json(r));
  inst.p = vector_from_json(j.at("p"));
  return inst;
}

inline json instance_to_json(const FairPcaInstance& inst) {
  json cs = json::array();
  for (const auto& c : inst.C) cs.push_back(to_json(c));
  return json{{"C", cs}, {"r", inst.r}};
}
inline FairPcaInstance fair_pca_from_json(const json& j) {
  FairPcaInstance inst;
  for (const auto& c : j.at("C")) inst.C.push_back(matrix_from_json(c));
  inst.r = j.at("r").get<int>();
  return inst;
}

}  // namespace mm4mm::apps::io
