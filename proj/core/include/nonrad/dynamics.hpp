#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nonrad/charnum.hpp"
#include "nonrad/extsolve.hpp"
#include "nonrad/fixpoint.hpp"

namespace nonrad {

// Characteristic numbers of a time-translated solution, measured against the
// law alpha' = alpha, beta' = beta + alpha t0.
struct TranslationReport {
  double t0 = 0.0;
  double alpha_before = 0.0, alpha_after = 0.0;
  double beta_before = 0.0, beta_after = 0.0;
  double predicted_beta = 0.0;
  double defect = 0.0;  // |beta_after - predicted_beta|
  double alpha_drift = 0.0;
  std::pair<double, double> fit_window{0.0, 0.0};
  std::string reference_tag;
};

// Re-extracts (alpha, beta) from the t0-snapshot of a computed solution,
// treated as new initial data on Omega_{R + |t0|}. The reference supplies
// u^alpha's data at t = 0 for the beta fit. F must be time-independent.
TranslationReport translate_and_measure(const ExteriorSolution& sol, double t0,
                                        const RadialData& reference_data,
                                        std::pair<double, double> fit_window,
                                        const std::string& reference_tag = "");

// Sup over the common exterior grid of |u - v|. Both solutions must carry
// matching characteristic numbers (the theorem's hypothesis); mismatch is a
// domain error.
double uniqueness_check(const ExteriorSolution& sol1, const ExteriorSolution& sol2, double R,
                        double char_tol = 1e-3);

// Explicit static solution W as a function of lambda and r, its analytic
// derivatives, and the residual of Delta W + W^{7/3} = 0.
double ground_state(double lambda, double r);
double ground_state_prime(double lambda, double r);
double ground_state_second(double lambda, double r);
// sup over (0, r_max] (sampled at `step`) of |W'' + (4/r) W' + W^{7/3}|
double ground_state_residual(double lambda, double r_max, double step = 1.0 / 128.0);
// same residual with centered finite-difference derivatives (order check)
double ground_state_residual_fd(double lambda, double r_max, double step);

// Linear span fields u = a t r^-3 + b r^-3: wave-equation residual at grid
// points and exterior energies against the closed form
// sigma4 [3 (a t + b)^2 rho0^-3 + a^2 rho0^-1], rho0 = R + |t|.
struct SpanCheckReport {
  double max_residual = 0.0;
  struct Entry {
    double t, energy, energy_closed_form;
  };
  std::vector<Entry> energies;
};
SpanCheckReport span_nonradiative_check(double a, double b, double R,
                                        const std::vector<double>& t_list,
                                        const SolveConfig& cfg = SolveConfig());

// Overlap consistency of the universal profile: the (alpha, alpha t1) and
// (alpha, alpha t2) runs, time-shifted onto a common frame, must agree on the
// intersection cone { r > R0 + |t - t_apex| }.
struct OverlapReport {
  double t1 = 0.0, t2 = 0.0;
  double R0 = 0.0, t_apex = 0.0;
  double sup_difference = 0.0;
  std::size_t points_compared = 0;
  bool lipschitz_radius_ok = false;  // |R_1 - R_2| <= |t1 - t2| on the used radii
  std::vector<std::tuple<double, double, double>> heatmap;  // (t, r, diff)
};
OverlapReport universal_profile_consistency(const ExteriorSolution& run_t1,
                                            const ExteriorSolution& run_t2, double t1, double t2);

// ||f||_{L2(r0 < |x| < 2 r0)} / (r0 ||f||_{H1(|x| > r0)}) for a sampled field;
// Hardy's inequality in the exterior region bounds this by an absolute constant.
double hardy_ratio(const RadialData& d, double r0);

// rho^{-3/2} vs rho^{-7/2} separation behind the soliton-rigidity argument:
// returns (lower bound of the model H1 norm, upper bound of the remainder)
// at radius rho c^{1/2} |beta|^{2/3}.
std::pair<double, double> soliton_separation(double rho, double c, double beta);

}  // namespace nonrad
