#include "nonrad/freewave.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nonrad {

RadialData::RadialData(RadialGrid g, std::vector<double> a, std::vector<double> b)
    : grid(g), u0(std::move(a)), u1(std::move(b)) {
  if (u0.size() != grid.size() || u1.size() != grid.size())
    throw std::domain_error("RadialData: sample count does not match grid");
  for (std::size_t i = 0; i < u0.size(); ++i)
    if (!std::isfinite(u0[i]) || !std::isfinite(u1[i]))
      throw std::domain_error("RadialData: non-finite sample");
}

double RadialData::u0_prime(std::size_t i) const {
  if (!u0p.empty()) return u0p[i];
  const double h = grid.step;
  const std::size_t n = size();
  if (n < 3) throw std::domain_error("RadialData: too few nodes for differentiation");
  if (i == 0) return (-3.0 * u0[0] + 4.0 * u0[1] - u0[2]) / (2.0 * h);
  if (i == n - 1) return (3.0 * u0[n - 1] - 4.0 * u0[n - 2] + u0[n - 3]) / (2.0 * h);
  return (u0[i + 1] - u0[i - 1]) / (2.0 * h);
}

FreeWave::FreeWave(RadialProfile G) : profile_(std::move(G)) {
  const GridSpec& g = profile_.grid;
  const std::size_t n = profile_.size();
  m0_.assign(n, 0.0);
  m1_.assign(n, 0.0);
  const double h = g.step;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto [v0, v1] = profile_.cell_values(i);
    const double x0 = g.node(i), x1 = x0 + h;
    m0_[i + 1] = m0_[i] + 0.5 * h * (v0 + v1);
    m1_[i + 1] = m1_[i] + h / 6.0 * (x0 * (2.0 * v0 + v1) + x1 * (v0 + 2.0 * v1));
  }
}

double FreeWave::m0_upto(double x) const {
  const GridSpec& g = profile_.grid;
  if (x <= g.s_min) return 0.0;
  if (x >= g.s_max) return m0_.back();
  const double p = (x - g.s_min) / g.step;
  const auto i = static_cast<std::size_t>(p);
  const double x0 = g.node(i);
  const auto [v0, v1] = profile_.cell_values(i);
  const double vx = v0 + (v1 - v0) * (x - x0) / g.step;
  return m0_[i] + 0.5 * (x - x0) * (v0 + vx);
}

double FreeWave::m1_upto(double x) const {
  const GridSpec& g = profile_.grid;
  if (x <= g.s_min) return 0.0;
  if (x >= g.s_max) return m1_.back();
  const double p = (x - g.s_min) / g.step;
  const auto i = static_cast<std::size_t>(p);
  const double x0 = g.node(i);
  const auto [v0, v1] = profile_.cell_values(i);
  const double vx = v0 + (v1 - v0) * (x - x0) / g.step;
  return m1_[i] + (x - x0) / 6.0 * (x0 * (2.0 * v0 + vx) + x * (v0 + 2.0 * vx));
}

double FreeWave::u(double r, double t) const {
  if (!(r > 0.0)) throw std::domain_error("FreeWave::u: r must be > 0");
  const double M1 = m1_upto(t + r) - m1_upto(t - r);
  const double M0 = m0_upto(t + r) - m0_upto(t - r);
  return (M1 - t * M0) / (r * r * r);
}

double FreeWave::ut(double r, double t) const {
  if (!(r > 0.0)) throw std::domain_error("FreeWave::ut: r must be > 0");
  const double M0 = m0_upto(t + r) - m0_upto(t - r);
  return (profile_.value_at(t + r) + profile_.value_at(t - r)) / (r * r) - M0 / (r * r * r);
}

double FreeWave::ur(double r, double t) const {
  if (!(r > 0.0)) throw std::domain_error("FreeWave::ur: r must be > 0");
  return -3.0 * u(r, t) / r +
         (profile_.value_at(t + r) - profile_.value_at(t - r)) / (r * r);
}

double evolve_free(const RadialProfile& G, double r, double t) { return FreeWave(G).u(r, t); }

RadialData data_from_profile(const RadialProfile& G, const RadialGrid& rg) {
  FreeWave w(G);
  const std::size_t n = rg.size();
  std::vector<double> u0(n), u1(n), u0p(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = rg.node(i);
    u0[i] = w.u(r, 0.0);
    u1[i] = w.ut(r, 0.0);
    u0p[i] = w.ur(r, 0.0);
  }
  RadialData d(rg, std::move(u0), std::move(u1));
  d.u0p = std::move(u0p);
  d.tail_c0 = moment1(G, -INFINITY, INFINITY);
  d.tail_c1 = -moment0(G, -INFINITY, INFINITY);
  d.tail_radius = G.support_radius();
  return d;
}

RadialProfile profile_from_data(const RadialData& d) {
  const RadialGrid& rg = d.grid;
  const std::size_t n = rg.size();
  if (n < 3) throw std::domain_error("profile_from_data: grid too small");
  const double h = rg.step;

  // Cumulative J(r) = int_r^{r_max} s u1(s) ds by trapezoid, top down; the
  // piece below the first node closes with the integrand vanishing at r = 0.
  std::vector<double> J(n, 0.0);
  for (std::size_t i = n - 1; i-- > 0;) {
    const double a = rg.node(i) * d.u1[i];
    const double b = rg.node(i + 1) * d.u1[i + 1];
    J[i] = J[i + 1] + 0.5 * h * (a + b);
  }
  const double J_below_first = 0.5 * h * (0.0 + rg.node(0) * d.u1[0]);

  const double rmax = rg.node(n - 1);
  const double edge = rmax * rmax * d.u1[n - 1];

  // centered differences for u0' (one-sided at the ends); the inversion always
  // differentiates the samples, whatever the data carries
  auto u0p_fd = [&](std::size_t i) {
    if (i == 0) return (-3.0 * d.u0[0] + 4.0 * d.u0[1] - d.u0[2]) / (2.0 * h);
    if (i == n - 1) return (3.0 * d.u0[n - 1] - 4.0 * d.u0[n - 2] + d.u0[n - 3]) / (2.0 * h);
    return (d.u0[i + 1] - d.u0[i - 1]) / (2.0 * h);
  };

  GridSpec sg(-rmax, rmax, h);
  RadialProfile G(sg);
  const auto zero_idx = static_cast<std::size_t>(sg.node_index(0.0));

  // even(r) = r^2 u1(r) - edge - int_r^{rmax} s u1;  odd(r) = 3 r u0 + r^2 u0'
  for (std::size_t i = 0; i < n; ++i) {
    const double r = rg.node(i);
    const double even = r * r * d.u1[i] - edge - J[i];
    const double odd = 3.0 * r * d.u0[i] + r * r * u0p_fd(i);
    G.values[zero_idx + (i + 1)] = 0.5 * (even + odd);
    G.values[zero_idx - (i + 1)] = 0.5 * (even - odd);
  }
  G.values[zero_idx] = 0.5 * (-edge - J[0] - J_below_first);
  return G;
}

RadialProfile source_profile(const std::vector<double>& f, const RadialGrid& rg,
                             const GridSpec& out_grid) {
  const std::size_t n = rg.size();
  if (f.size() != n) throw std::domain_error("source_profile: sample count mismatch");
  const double h = rg.step;

  // K(r) = int_0^r s f(s) ds, trapezoid with the integrand zero at r = 0.
  std::vector<double> K(n, 0.0);
  K[0] = 0.5 * h * (0.0 + rg.node(0) * f[0]);
  for (std::size_t i = 1; i < n; ++i) {
    const double a = rg.node(i - 1) * f[i - 1];
    const double b = rg.node(i) * f[i];
    K[i] = K[i - 1] + 0.5 * h * (a + b);
  }
  const double rmax = rg.node(n - 1);
  const double C = -(rmax * rmax * f[n - 1] + K[n - 1]);

  RadialProfile G(out_grid);
  for (std::size_t i = 0; i < G.size(); ++i) {
    const double s = std::abs(out_grid.node(i));
    double val;
    if (s <= 1e-15) {
      val = 0.5 * C;
    } else if (s >= rmax) {
      val = 0.5 * (K[n - 1] + C);  // f treated as 0 beyond the radial grid
    } else {
      const double p = s / h;  // node(i) = (i+1) h
      double fi, Ki;
      if (p < 1.0) {
        fi = f[0] * p;  // f interpolated to 0 at r = 0 for sub-first-node radii
        Ki = 0.5 * s * (0.0 + s * fi);
      } else {
        const auto j = static_cast<std::size_t>(p - 1.0);
        const std::size_t j1 = std::min(j + 1, n - 1);
        const double w = p - 1.0 - static_cast<double>(j);
        fi = f[j] * (1.0 - w) + f[j1] * w;
        const double a = rg.node(j) * f[j];
        Ki = K[j] + 0.5 * (s - rg.node(j)) * (a + s * fi);
      }
      val = 0.5 * (s * s * fi + Ki + C);
    }
    G.values[i] = val;
  }
  return G;
}

double energy_norm(const RadialData& d, double r) {
  if (r < 0.0) throw std::domain_error("energy_norm: r must be >= 0");
  const RadialGrid& rg = d.grid;
  const std::size_t n = rg.size();
  const double h = rg.step;
  if (r > rg.r_max + 1e-12) throw std::domain_error("energy_norm: r beyond grid");

  auto integrand = [&](std::size_t i) {
    const double rho = rg.node(i);
    const double up = d.u0_prime(i);
    return (up * up + d.u1[i] * d.u1[i]) * rho * rho * rho * rho;
  };

  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double x0 = rg.node(i), x1 = rg.node(i + 1);
    if (x1 <= r) continue;
    const double f0 = integrand(i), f1 = integrand(i + 1);
    if (x0 >= r) {
      acc += 0.5 * h * (f0 + f1);
    } else {
      const double w = (r - x0) / h;
      const double fr = f0 * (1.0 - w) + f1 * w;
      acc += 0.5 * (x1 - r) * (fr + f1);
    }
  }
  // piece between r and the first node (integrand ~ rho^4 near the axis)
  if (r < rg.node(0)) acc += 0.5 * (rg.node(0) - r) * integrand(0);

  if (d.tail_c0.has_value() && d.tail_c1.has_value()) {
    const double rmax = rg.node(n - 1);
    const double c0 = *d.tail_c0, c1 = *d.tail_c1;
    acc += 3.0 * c0 * c0 / (rmax * rmax * rmax) + c1 * c1 / rmax;
  }
  return std::sqrt(kSigma4 * std::max(0.0, acc));
}

double isometry_defect(const RadialProfile& G, const RadialGrid& rg) {
  const double g2 = l2_norm(G);
  if (g2 == 0.0) return 0.0;
  const double rhs = 2.0 * kSigma4 * g2 * g2;
  const double e = energy_norm(data_from_profile(G, rg), 0.0);
  return std::abs(e * e - rhs) / rhs;
}

}  // namespace nonrad
