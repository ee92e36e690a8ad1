#pragma once

#include <functional>

#include "nonrad/grid.hpp"

namespace nonrad {

// Descriptor of the nonlinear term F(t, r, u). The bound |F| <= gamma |u|^{7/3}
// and, when as_symmetric is set, F(-t,r,u) = F(t,r,u) and F(t,r,-u) = -F(t,r,u)
// are spot-checked on deterministic probes at construction.
struct Nonlinearity {
  enum class Kind { focusing, defocusing, custom };

  Kind kind = Kind::focusing;
  double gamma = 1.0;
  bool as_symmetric = true;
  std::function<double(double, double, double)> eval;  // (t, r, u) -> F

  double operator()(double t, double r, double u) const { return eval(t, r, u); }

  static Nonlinearity focusing();    // +|u|^{4/3} u
  static Nonlinearity defocusing();  // -|u|^{4/3} u
  static Nonlinearity custom(std::function<double(double, double, double)> fn, double gamma,
                             bool as_symmetric);

  // Probes |u| over several decades at sampled (t, r); throws std::domain_error
  // if the growth bound or a declared symmetry fails.
  void validate(unsigned seed = 1234, int probes = 64) const;
};

}  // namespace nonrad
