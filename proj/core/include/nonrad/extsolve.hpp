#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nonrad/freewave.hpp"
#include "nonrad/grid.hpp"
#include "nonrad/nonlinearity.hpp"
#include "nonrad/profile.hpp"

namespace nonrad {

// Numerics of an exterior solve on Omega_R = { r > R + |t| }.
struct SolveConfig {
  double R = 1.0;
  double T = 4.0;
  double dt = 1.0 / 64.0;
  double step = 1.0 / 128.0;
  double r_max = 128.0;
  int picard_iters = 2;

  enum class Mask { sharp, smooth };
  Mask mask = Mask::sharp;
  double mask_width = 0.25;  // transition width of the smooth mask

  double snapshot_stride_time = 0.25;  // snapshots at multiples of this
  double y_warn_threshold = 0.5;       // warn when the linear part exceeds this in Y
  double blowup_guard = 1.0e6;

  void validate() const;
  std::size_t steps_per_direction() const;
  GridSpec solver_sgrid() const;  // [-(r_max+T), r_max+T] at `step`
  RadialGrid rgrid() const { return RadialGrid(r_max, step); }
};

// One stored time slice; arrays are zero below first_active (inside the cone).
struct Snapshot {
  double t = 0.0;
  std::size_t first_active = 0;
  std::vector<double> u, ut, ur;
};

// Space-time record of an exterior solution plus its accumulated Duhamel
// source profiles (H_- at t = -T, H_+ at t = +T). The Duhamel part of the
// solution at the horizon ends equals the free wave with those profiles, so
// they carry the scattering content exactly.
struct ExteriorSolution {
  SolveConfig cfg;
  double R = 0.0;
  RadialGrid rgrid;
  RadialProfile data_profile;  // full-line profile of the initial data (solver grid)
  std::vector<Snapshot> snaps;  // ordered by t, covering [-T, T]
  RadialProfile duhamel_backward, duhamel_forward;

  // diagnostics
  double linear_y_norm = 0.0;
  bool small_data_warning = false;
  double picard_contraction_max = 0.0;
  double z_norm_backward = 0.0, z_norm_forward = 0.0;  // ||chi_R F||_Z per direction
  std::vector<std::pair<double, double>> slice_l2_trace;  // (t_mid, ||f(t_mid)||_{L2(R^5)})

  // Far-field closure coefficients: u ~ (tail_beta + tail_alpha t) r^-3,
  // u_t ~ tail_alpha r^-3 beyond r_max. Set for constructed runs.
  std::optional<double> tail_alpha, tail_beta;

  const Snapshot& at_time(double t) const;  // throws if t is not a stored time
  bool has_time(double t) const;

  // Snapshot repackaged as initial data (analytic derivative from the stored u_r).
  RadialData data_at(double t) const;
};

// Duhamel exterior solver: the linear part propagates exactly through the
// data's radiation profile; each masked source slice chi_R F dt' becomes an
// even source profile, is time-translated and accumulated. A per-step Picard
// sub-iteration with the half-step position correction resolves the implicit
// midpoint source.
ExteriorSolution solve_exterior(const RadialData& d, const Nonlinearity& F, double R, double T,
                                double dt);
ExteriorSolution solve_exterior(const RadialData& d, const Nonlinearity& F, SolveConfig cfg);

// Same solver entered directly with the full-line data profile.
ExteriorSolution solve_exterior_profile(const RadialProfile& G_full, const Nonlinearity& F,
                                        SolveConfig cfg);

// Lockstep pair: marches `G_full` (mask at cfg.R) together with a frozen
// reference profile `G_ref` (mask at R_ref) and returns both solutions.
// Used by the second construction, whose Duhamel bookkeeping is the
// difference of the two accumulations.
std::pair<ExteriorSolution, ExteriorSolution> solve_exterior_pair(const RadialProfile& G_full,
                                                                  const RadialProfile& G_ref,
                                                                  double R_ref,
                                                                  const Nonlinearity& F,
                                                                  SolveConfig cfg);

// Independent oracle: leapfrog on v = r^2 u, v_tt = v_rr - 2 v / r^2 + r^2 chi_R F,
// with v(0) = 0 at the axis and an outgoing v_t + v_r = 0 edge. Never feeds the
// constructions. Requires dt <= step (CFL).
ExteriorSolution fd_oracle_solve(const RadialData& d, const Nonlinearity& F, double R, double T,
                                 double dt);
ExteriorSolution fd_oracle_solve(const RadialData& d, const Nonlinearity& F, SolveConfig cfg);

// sigma4 int_{R+|t|}^inf (u_r^2 + u_t^2) rho^4 drho at a stored time, closed
// past r_max with the solution's tail coefficients when present.
double exterior_energy(const ExteriorSolution& sol, double t);

// Mixed-norm L_t^{7/3} L_x^{14/3} of |u| over {rho > r + |t|}, truncated to the
// computed window [-T, T] (quadrature over stored snapshot times).
double y_norm_tail(const ExteriorSolution& sol, double r);

// Analytic record of the span field u = a t r^-3 + b r^-3 (for anchor tests).
ExteriorSolution make_span_solution(double a, double b, double R, double T,
                                    const SolveConfig& cfg);

}  // namespace nonrad
