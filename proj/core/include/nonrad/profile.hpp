#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "nonrad/grid.hpp"

namespace nonrad {

// One-sided values at a node where the profile jumps. The stored sample at
// such a node is the midpoint (left + right) / 2; quadrature cells on either
// side see the one-sided value, which keeps box-like closed-form examples
// exactly integrable.
struct ProfileJump {
  std::size_t idx = 0;
  double left = 0.0;   // limit from below
  double right = 0.0;  // limit from above
};

// Radiation profile G(s) sampled on a uniform grid. Between nodes the profile
// is the piecewise-linear reconstruction of its samples, with one-sided values
// at registered jump nodes; outside the grid it is zero. All quadrature
// integrates that reconstruction exactly.
struct RadialProfile {
  GridSpec grid;
  std::vector<double> values;
  std::vector<ProfileJump> jumps;  // sorted by idx, at most one per node

  RadialProfile() : values(grid.size(), 0.0) {}
  explicit RadialProfile(GridSpec g) : grid(g), values(grid.size(), 0.0) {}
  RadialProfile(GridSpec g, std::vector<double> v);

  std::size_t size() const { return values.size(); }

  // Effective endpoint values of cell i = [node_i, node_{i+1}].
  std::pair<double, double> cell_values(std::size_t i) const;

  // Piecewise-linear value; the midpoint sample at a jump node; 0 outside.
  double value_at(double s) const;

  // Largest |s| carrying a nonzero sample or jump side; 0 for the zero profile.
  double support_radius() const;

  void check_finite() const;

  RadialProfile& operator+=(const RadialProfile& o);
  RadialProfile& operator-=(const RadialProfile& o);
  RadialProfile& operator*=(double c);
  friend RadialProfile operator+(RadialProfile a, const RadialProfile& b) { return a += b; }
  friend RadialProfile operator-(RadialProfile a, const RadialProfile& b) { return a -= b; }
  friend RadialProfile operator*(double c, RadialProfile a) { return a *= c; }

  // Resample onto another grid. Identity (jumps preserved) when the grids
  // match; otherwise plain value sampling, which smears jumps over one cell.
  RadialProfile resampled(const GridSpec& g) const;

  void set_jump(std::size_t idx, double left, double right);
  const ProfileJump* jump_at(std::size_t idx) const;
};

// Builders ------------------------------------------------------------------

// Samples fn at the nodes (no jump metadata).
RadialProfile sampled_profile(const GridSpec& g, const std::function<double(double)>& fn);

// fn restricted to [a, b] with jump metadata at the node-aligned cut points.
RadialProfile truncated_profile(const GridSpec& g, double a, double b,
                                const std::function<double(double)>& fn);

// Indicator of [a, b] scaled by amplitude; jump locations must sit on nodes.
RadialProfile indicator_profile(const GridSpec& g, double a, double b, double amplitude = 1.0);

// Quadrature ----------------------------------------------------------------
// All take arbitrary real limits, clipped to the grid; +-infinity maps to the
// grid ends. Finite limits beyond the grid extent raise std::domain_error.

// int_a^b G(s) ds
double moment0(const RadialProfile& G, double a, double b);
// int_a^b s G(s) ds
double moment1(const RadialProfile& G, double a, double b);
// (int_{|s|>r} G^2 ds)^{1/2}, r >= 0
double l2_tail(const RadialProfile& G, double r);
// (int G^2 ds)^{1/2} over the whole grid
double l2_norm(const RadialProfile& G);

// Pointwise decomposition G = G1 + G2 with G1 on nodes |s| <= r1, G2 on
// |s| > r1. A jump exactly at |s| = r1 splits into its interior-facing and
// exterior-facing sides (node samples still add up to G's).
std::pair<RadialProfile, RadialProfile> split_at(const RadialProfile& G, double r1);

// s -> G(s + t0) resampled on the same grid. Throws std::domain_error when
// the content shifted off the grid carries more than negligible L2 mass.
// Exact (jumps preserved) when t0 is a whole number of steps.
RadialProfile translate(const RadialProfile& G, double t0);

// sup_{r >= R} r^exponent * l2_tail(G1 - G2, r), sup over node radii plus R itself.
double weighted_distance(const RadialProfile& G1, const RadialProfile& G2, double R,
                         double exponent);

// Two-regime distance of the second construction: weights |beta|^{-7/3} r^{7/2}
// below the crossover radius |beta|/|alpha| and |alpha|^{-4/3} |beta|^{-1} r^{13/6}
// above it. alpha = 0 means the crossover is +infinity.
double weighted_distance_second(const RadialProfile& G1, const RadialProfile& G2, double R,
                                double alpha, double beta);

}  // namespace nonrad
