#pragma once

#include <map>
#include <string>
#include <utility>

#include "nonrad/freewave.hpp"
#include "nonrad/profile.hpp"

namespace nonrad {

// First and second characteristic numbers of a radial non-radiative solution,
// with the method and fit diagnostics that produced them.
struct CharNumbers {
  double alpha = 0.0;
  double beta = 0.0;
  enum class Method { integral, principal_value, asymptotic_fit };
  Method method = Method::integral;
  std::pair<double, double> fit_window{0.0, 0.0};
  double residual = 0.0;
  std::string reference_tag;  // beta is only defined against a recorded reference
};

// alpha = -int G(s) ds over the whole line.
double alpha_of(const RadialProfile& G);

// beta = int s [G - G_ref](s) ds. The first characteristic numbers must agree
// within tol_alpha, otherwise the integral is meaningless (domain error).
double beta_relative(const RadialProfile& G, const RadialProfile& G_ref,
                     double tol_alpha = 1e-6);

// Principal value int s G(s) ds as the limit of symmetric truncations; valid
// in the (AS) regime where the reference moment vanishes. Stabilization
// requires the last `stabilize_count` truncations to agree within tol.
struct PvResult {
  double value = 0.0;
  double cauchy_tail = 0.0;  // spread of the last truncations
};
PvResult beta_pv(const RadialProfile& G, double tol = 1e-6, int stabilize_count = 3);

// Weighted least squares of u1 against alpha r^-3 over the window, with the
// L2 measure r^4 dr. Residual is the fitted L2 tail norm over the window.
struct FitResult {
  double value = 0.0;
  double residual = 0.0;
};
FitResult alpha_fit(const RadialData& d, std::pair<double, double> window);

// Same for u0 - u0_ref against beta r^-3 in the H^1 metric.
FitResult beta_fit(const RadialData& d, const RadialData& d_ref,
                   std::pair<double, double> window);
// (AS) shortcut: zero reference.
FitResult beta_fit(const RadialData& d, std::pair<double, double> window);

// Least-squares slope of log(norm) vs log(r). Needs >= 5 radii spanning at
// least a decade; nonpositive norms are a domain error.
double decay_rate_fit(const std::map<double, double>& norms);

}  // namespace nonrad
