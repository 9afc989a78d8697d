#pragma once

#include <functional>
#include <string>
#include <utility>

#include "mm4mm/engine.hpp"
#include "mm4mm/numerics.hpp"

namespace mm4mm::apps {

using engine::IterationTrace;
using engine::MmProblem;
using engine::SolverConfig;
using engine::StepInfo;

// Descent guard shared by the iterative-inner solvers: when an outer
// candidate fails to improve the objective (inner solve hit its accuracy
// floor), the previous iterate is kept, which lets the driver terminate by
// its convergence criterion instead of reporting a spurious increase.
template <class X>
X guard_step(const std::function<double(const X&)>& objective, const X& current, X candidate,
             StepInfo& info, const char* who) {
  if (objective(candidate) > objective(current)) {
    info.warnings.push_back(std::string(who) +
                            ": inner accuracy floor reached, keeping previous iterate");
    return current;
  }
  return candidate;
}

inline Vector split_complex(const CVector& x) {
  Vector out(2 * x.size());
  out.head(x.size()) = x.real();
  out.tail(x.size()) = x.imag();
  return out;
}

inline CVector join_complex(const Vector& v) {
  const Eigen::Index n = v.size() / 2;
  CVector out(n);
  out.real() = v.head(n);
  out.imag() = v.tail(n);
  return out;
}

}  // namespace mm4mm::apps
