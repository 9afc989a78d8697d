#pragma once

#include <chrono>
#include <limits>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mm4mm/numerics.hpp"

// Generic MM4MM drivers: the min-max path minimizes the x-surrogate built
// from the closed-form inner maximizer, the max-min path swaps the order and
// alternates a dual ascent with the closed-form primal step. Both record the
// raw objective sequence and guard monotone descent.

namespace mm4mm::engine {

enum class Termination { converged, max_iters, monotonicity_violation };

inline const char* termination_name(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::max_iters: return "max_iters";
    case Termination::monotonicity_violation: return "monotonicity_violation";
  }
  return "?";
}

struct SolverConfig {
  double eta = 1e-7;              // relative-decrease stopping threshold
  int max_outer_iters = 5000;
  int max_inner_iters = 200;
  double inner_tolerance = 1e-9;
  double monotonicity_slack = 1e-9;  // relative, scaled by max(1, |f|)

  void validate() const {
    if (eta <= 0.0) throw std::invalid_argument("SolverConfig: eta must be > 0");
    if (monotonicity_slack < 0.0)
      throw std::invalid_argument("SolverConfig: monotonicity_slack must be >= 0");
    if (max_outer_iters < 1 || max_inner_iters < 1)
      throw std::invalid_argument("SolverConfig: iteration budgets must be >= 1");
  }
};

struct IterationRecord {
  int iter = 0;
  double objective = 0.0;
  int inner_iters = 0;
  double wall_ms = 0.0;
};

struct IterationTrace {
  std::vector<IterationRecord> records;  // objective sequence verbatim, unsmoothed
  Termination termination = Termination::max_iters;
  std::vector<std::string> warnings;
};

// Per-step scratch handed to the callbacks: inner-iteration count and
// warnings flow back into the trace.
struct StepInfo {
  int inner_iters = 0;
  std::vector<std::string> warnings;
};

// Callback bundle for one MM4MM instance. Exactly one of the two paths must
// be populated: Algorithm 1 (min-max) uses primal_step (+ optionally
// surrogate_inner_max for diagnostics), Algorithm 2 (max-min) uses
// dual_ascent followed by surrogate_inner_min.
template <class X, class Z = X>
struct MmProblem {
  std::function<double(const X&)> objective;

  // Algorithm 1: x_{t+1} = argmin_x d(x | x_t), with d built from the
  // closed-form inner maximizer.
  std::function<X(const X& xt, StepInfo&)> primal_step;
  // Closed-form inner maximizer (zhat, g_s value) at (x | x_t); used by
  // majorization diagnostics and tests.
  std::function<std::pair<Z, double>(const X& x, const X& xt)> surrogate_inner_max;

  // Algorithm 2: z_{t+1} = argmax_z h(z | x_t), then x_{t+1} = xtilde(z_{t+1}).
  std::function<Z(const X& xt, StepInfo&)> dual_ascent;
  std::function<X(const Z& z, const X& xt, StepInfo&)> surrogate_inner_min;

  std::function<X(const X&)> feasible_projector;  // optional

  bool has_minmax_path() const { return static_cast<bool>(primal_step); }
  bool has_maxmin_path() const {
    return static_cast<bool>(dual_ascent) && static_cast<bool>(surrogate_inner_min);
  }
};

namespace detail {

inline double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

template <class X, class Z, class StepFn>
std::pair<X, IterationTrace> run_driver(const MmProblem<X, Z>& problem, X x0,
                                        const SolverConfig& cfg, StepFn&& step) {
  cfg.validate();
  if (!problem.objective) throw std::invalid_argument("MmProblem: objective missing");
  if (problem.feasible_projector) x0 = problem.feasible_projector(x0);

  IterationTrace trace;
  X x = std::move(x0);
  double f = problem.objective(x);
  if (!std::isfinite(f))
    throw std::invalid_argument("MmProblem: objective not finite at the start point");
  trace.records.push_back({0, f, 0, 0.0});
  trace.termination = Termination::max_iters;

  for (int t = 1; t <= cfg.max_outer_iters; ++t) {
    StepInfo info;
    const double t0 = now_ms();
    X x_next = step(x, info);
    const double elapsed = now_ms() - t0;
    const double f_next = problem.objective(x_next);
    trace.records.push_back({t, f_next, info.inner_iters, elapsed});
    for (auto& w : info.warnings) trace.warnings.push_back(std::move(w));

    const double slack = cfg.monotonicity_slack * std::max(1.0, std::abs(f));
    if (f_next > f + slack) {
      trace.termination = Termination::monotonicity_violation;
      trace.warnings.push_back("objective increased at iteration " + std::to_string(t) +
                               " by " + std::to_string(f_next - f));
      // keep the pre-violation iterate
      return {std::move(x), std::move(trace)};
    }

    const double decrease = f - f_next;
    x = std::move(x_next);
    f = f_next;
    // Relative criterion, with absolute fallback when |f| is tiny (several
    // applications have objectives crossing zero).
    const double denom = std::abs(f) >= 1e-12 ? std::abs(f) : 1.0;
    if (decrease / denom <= cfg.eta) {
      trace.termination = Termination::converged;
      break;
    }
  }
  return {std::move(x), std::move(trace)};
}

}  // namespace detail

// Algorithm "Min-Max for MM": x_{t+1} = argmin_x d(x | x_t).
template <class X, class Z>
std::pair<X, IterationTrace> run_minmax_mm(const MmProblem<X, Z>& problem, X x0,
                                           const SolverConfig& cfg) {
  if (!problem.has_minmax_path() || problem.has_maxmin_path())
    throw std::invalid_argument("run_minmax_mm: problem must populate exactly the Algorithm-1 path");
  return detail::run_driver(problem, std::move(x0), cfg,
                            [&problem](const X& xt, StepInfo& info) {
                              return problem.primal_step(xt, info);
                            });
}

// Algorithm "Max-Min for MM": z_{t+1} = argmax_z h(z | x_t), then
// x_{t+1} = xtilde(z_{t+1} | x_t).
template <class X, class Z>
std::pair<X, IterationTrace> run_maxmin_mm(const MmProblem<X, Z>& problem, X x0,
                                           const SolverConfig& cfg) {
  if (!problem.has_maxmin_path() || problem.has_minmax_path())
    throw std::invalid_argument("run_maxmin_mm: problem must populate exactly the Algorithm-2 path");
  return detail::run_driver(problem, std::move(x0), cfg,
                            [&problem](const X& xt, StepInfo& info) {
                              Z z = problem.dual_ascent(xt, info);
                              return problem.surrogate_inner_min(z, xt, info);
                            });
}

// Worst-case objective min_x max_k f_k(x) as a simplex-weighted fragment:
// g(x, z) = sum_k z_k f_k(x), with the argmax supported on the maximizing
// components (uniform over ties).
template <class X>
struct WorstCaseFragment {
  std::vector<std::function<double(const X&)>> components;

  double objective(const X& x) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& fk : components) best = std::max(best, fk(x));
    return best;
  }

  double augmented(const X& x, const Vector& z) const {
    if (z.size() != static_cast<Eigen::Index>(components.size()))
      throw std::invalid_argument("WorstCaseFragment: weight size mismatch");
    double s = 0.0;
    for (size_t k = 0; k < components.size(); ++k)
      s += z[static_cast<Eigen::Index>(k)] * components[k](x);
    return s;
  }

  Vector argmax_weights(const X& x) const {
    Vector vals(static_cast<Eigen::Index>(components.size()));
    for (size_t k = 0; k < components.size(); ++k)
      vals[static_cast<Eigen::Index>(k)] = components[k](x);
    const double m = vals.maxCoeff();
    Vector z = Vector::Zero(vals.size());
    int ties = 0;
    for (Eigen::Index i = 0; i < vals.size(); ++i)
      if (vals[i] == m) ++ties;
    for (Eigen::Index i = 0; i < vals.size(); ++i)
      if (vals[i] == m) z[i] = 1.0 / ties;
    return z;
  }
};

template <class X>
WorstCaseFragment<X> worst_case_wrap(std::vector<std::function<double(const X&)>> fks) {
  if (fks.empty()) throw std::invalid_argument("worst_case_wrap: need at least one objective");
  return WorstCaseFragment<X>{std::move(fks)};
}

// Lagrangian fragment g(x, z, q) = f0(x) + z' ftilde(x) + q' fbar(x) with
// z >= 0 free multipliers for inequalities and unconstrained q for
// equalities.
template <class X>
struct LagrangianFragment {
  std::function<double(const X&)> f0;
  std::vector<std::function<double(const X&)>> inequalities;  // <= 0
  std::vector<std::function<double(const X&)>> equalities;    // == 0

  double augmented(const X& x, const Vector& z, const Vector& q) const {
    if (z.size() != static_cast<Eigen::Index>(inequalities.size()) ||
        q.size() != static_cast<Eigen::Index>(equalities.size()))
      throw std::invalid_argument("LagrangianFragment: multiplier size mismatch");
    if (z.size() > 0 && z.minCoeff() < 0.0)
      throw std::invalid_argument("LagrangianFragment: inequality multipliers must be >= 0");
    double s = f0(x);
    for (size_t i = 0; i < inequalities.size(); ++i)
      s += z[static_cast<Eigen::Index>(i)] * inequalities[i](x);
    for (size_t j = 0; j < equalities.size(); ++j)
      s += q[static_cast<Eigen::Index>(j)] * equalities[j](x);
    return s;
  }
};

template <class X>
LagrangianFragment<X> lagrangian_wrap(std::function<double(const X&)> f0,
                                      std::vector<std::function<double(const X&)>> ineq,
                                      std::vector<std::function<double(const X&)>> eq) {
  if (!f0) throw std::invalid_argument("lagrangian_wrap: f0 missing");
  return LagrangianFragment<X>{std::move(f0), std::move(ineq), std::move(eq)};
}

struct SaddleReport {
  double max_left_violation = 0.0;   // max_z g(x*, z) - g(x*, z*)
  double max_right_violation = 0.0;  // g(x*, z*) - min_x g(x, z*)
};

// Numerical saddle certificate: samples feasible z (resp. x) and measures
// how far g(x*, .) rises above (resp. g(., z*) falls below) the center
// value. Both stay <= tolerance at a true saddle.
template <class X, class Z>
SaddleReport certify_saddle(const std::function<double(const X&, const Z&)>& g, const X& x_star,
                            const Z& z_star, const std::function<Z(Rng&)>& sample_z,
                            const std::function<X(Rng&)>& sample_x, Rng& rng, int n_samples) {
  const double center = g(x_star, z_star);
  SaddleReport rep;
  for (int k = 0; k < n_samples; ++k) {
    rep.max_left_violation =
        std::max(rep.max_left_violation, g(x_star, sample_z(rng)) - center);
    rep.max_right_violation =
        std::max(rep.max_right_violation, center - g(sample_x(rng), z_star));
  }
  return rep;
}

}  // namespace mm4mm::engine
