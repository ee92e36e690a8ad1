#pragma once

#include <optional>
#include <vector>

#include "nonrad/grid.hpp"
#include "nonrad/profile.hpp"

namespace nonrad {

// Radial initial data (u0, u1) in the energy space, sampled on (0, r_max].
//
// u0p holds the analytic radial derivative of u0 when the data was produced
// from a known profile; generic data (e.g. loaded from CSV) leaves it empty
// and consumers fall back to centered finite differences.
//
// tail_c0/tail_c1 describe the exact far field u0 ~ c0 r^-3, u1 ~ c1 r^-3
// beyond tail_radius; exterior norms use them to close integrals past r_max.
struct RadialData {
  RadialGrid grid;
  std::vector<double> u0;
  std::vector<double> u1;
  std::vector<double> u0p;  // optional, same length as u0 when present
  std::optional<double> tail_c0;
  std::optional<double> tail_c1;
  double tail_radius = 0.0;

  RadialData() = default;
  RadialData(RadialGrid g, std::vector<double> a, std::vector<double> b);

  std::size_t size() const { return u0.size(); }
  bool has_analytic_derivative() const { return !u0p.empty(); }

  // u0' at node i: analytic when available, otherwise centered differences
  // (one-sided at the ends).
  double u0_prime(std::size_t i) const;
};

// Free radial wave in 5D determined by its radiation profile in the negative
// time direction:
//   u(r,t)   = r^-3 int_{t-r}^{t+r} (s - t) G(s) ds
//   u_t(r,t) = [G(t+r) + G(t-r)] / r^2  -  r^-3 int_{t-r}^{t+r} G(s) ds
//   u_r(r,t) = -3 u / r + [G(t+r) - G(t-r)] / r^2
// Prefix moments of the reconstruction make each evaluation O(1).
class FreeWave {
 public:
  explicit FreeWave(RadialProfile G);

  double u(double r, double t) const;
  double ut(double r, double t) const;
  double ur(double r, double t) const;

  const RadialProfile& profile() const { return profile_; }

 private:
  double m0_upto(double x) const;  // int_{s_min}^{x} G
  double m1_upto(double x) const;  // int_{s_min}^{x} s G

  RadialProfile profile_;
  std::vector<double> m0_, m1_;  // prefix integrals at nodes
};

// u(r,t) of the free wave with profile G; r > 0 required.
double evolve_free(const RadialProfile& G, double r, double t);

// Initial data of the free wave with profile G, on the given radial grid.
// Fills the analytic derivative and the far-field tail coefficients.
RadialData data_from_profile(const RadialProfile& G, const RadialGrid& rg = RadialGrid());

// Inverse map. Odd part comes from 3 r u0 + r^2 u0'; the even part from
// r^2 u1 plus the cumulative moment of u1, normalized so the profile decays
// at the outer grid edge (data is assumed profile-generated with support
// essentially inside the grid). Returns G on the symmetric grid [-r_max, r_max].
RadialProfile profile_from_data(const RadialData& d);

// Radiation profile of data (0, f): the even profile
//   G_f(r) = (r^2 f(r) + int_0^r s f(s) ds + C) / 2,
// with C fixed so G_f vanishes at the outer edge. f is given by samples on rg.
RadialProfile source_profile(const std::vector<double>& f, const RadialGrid& rg,
                             const GridSpec& out_grid);

// Exterior energy norm (sigma4 int_r^inf (u0'^2 + u1^2) rho^4 drho)^{1/2},
// closed past r_max with the data's r^-3 tail coefficients when present.
double energy_norm(const RadialData& d, double r);

// Relative defect of the radial isometry identity
//   ||(u0,u1)||^2_{H1 x L2} = 2 sigma4 ||G||^2_{L2(R)}.
// Defined as 0 for the zero profile.
double isometry_defect(const RadialProfile& G, const RadialGrid& rg = RadialGrid());

}  // namespace nonrad
