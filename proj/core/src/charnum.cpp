#include "nonrad/charnum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "nonrad/errors.hpp"

namespace nonrad {

double alpha_of(const RadialProfile& G) { return -moment0(G, -INFINITY, INFINITY); }

double beta_relative(const RadialProfile& G, const RadialProfile& G_ref, double tol_alpha) {
  const double a = alpha_of(G), ar = alpha_of(G_ref);
  if (std::abs(a - ar) > tol_alpha * std::max(1.0, std::max(std::abs(a), std::abs(ar))))
    throw std::domain_error("beta_relative: first characteristic numbers differ");
  RadialProfile D = (G.grid == G_ref.grid) ? G - G_ref : G - G_ref.resampled(G.grid);
  return moment1(D, -INFINITY, INFINITY);
}

PvResult beta_pv(const RadialProfile& G, double tol, int stabilize_count) {
  const GridSpec& g = G.grid;
  const double r_hi = std::min(std::abs(g.s_min), g.s_max);
  // geometric ladder of truncation radii up to the grid edge
  std::vector<double> radii;
  const double r_lo = std::max(4.0 * g.step, r_hi / 1024.0);
  for (double r = r_lo; r < r_hi; r *= 1.25) radii.push_back(r);
  radii.push_back(r_hi);

  std::vector<double> trunc;
  trunc.reserve(radii.size());
  for (double r : radii) trunc.push_back(moment1(G, -r, r));

  const auto k = static_cast<std::size_t>(stabilize_count);
  if (trunc.size() < k) throw ConvergenceError("beta_pv: too few truncation radii");
  double lo = trunc.back(), hi = trunc.back();
  for (std::size_t i = trunc.size() - k; i < trunc.size(); ++i) {
    lo = std::min(lo, trunc[i]);
    hi = std::max(hi, trunc[i]);
  }
  PvResult out;
  out.value = trunc.back();
  out.cauchy_tail = hi - lo;
  const double scale = std::max(1.0, std::abs(out.value));
  if (out.cauchy_tail > tol * scale)
    throw ConvergenceError("beta_pv: truncations did not stabilize (spread " +
                           std::to_string(out.cauchy_tail) + ")");
  return out;
}

namespace {

struct WindowQuad {
  const RadialGrid& rg;
  std::size_t i_lo, i_hi;  // node range [i_lo, i_hi]

  WindowQuad(const RadialGrid& g, std::pair<double, double> w) : rg(g) {
    if (!(w.first < w.second)) throw std::domain_error("fit window: need r_lo < r_hi");
    if (w.first < rg.node(0) - 1e-12 || w.second > rg.r_max + 1e-12)
      throw std::domain_error("fit window outside grid");
    i_lo = 0;
    while (rg.node(i_lo) < w.first - 1e-12) ++i_lo;
    i_hi = rg.size() - 1;
    while (rg.node(i_hi) > w.second + 1e-12) --i_hi;
    if (i_hi <= i_lo + 2) throw std::domain_error("fit window too narrow");
  }

  template <typename F>
  double integrate(F f) const {
    double acc = 0.0;
    for (std::size_t i = i_lo; i < i_hi; ++i)
      acc += 0.5 * rg.step * (f(i) + f(i + 1));
    return acc;
  }
};

}  // namespace

FitResult alpha_fit(const RadialData& d, std::pair<double, double> window) {
  WindowQuad q(d.grid, window);
  auto model = [&](std::size_t i) { return std::pow(d.grid.node(i), -3.0); };
  const double num = q.integrate([&](std::size_t i) {
    const double r = d.grid.node(i);
    return d.u1[i] * model(i) * r * r * r * r;
  });
  const double den = q.integrate([&](std::size_t i) {
    const double r = d.grid.node(i);
    return model(i) * model(i) * r * r * r * r;
  });
  FitResult out;
  out.value = num / den;
  const double res2 = q.integrate([&](std::size_t i) {
    const double r = d.grid.node(i);
    const double e = d.u1[i] - out.value * model(i);
    return e * e * r * r * r * r;
  });
  out.residual = std::sqrt(kSigma4 * std::max(0.0, res2));
  return out;
}

FitResult beta_fit(const RadialData& d, const RadialData& d_ref,
                   std::pair<double, double> window) {
  if (d.grid != d_ref.grid) throw std::domain_error("beta_fit: grids differ");
  WindowQuad q(d.grid, window);
  auto dprime = [&](std::size_t i) { return d.u0_prime(i) - d_ref.u0_prime(i); };
  auto mprime = [&](std::size_t i) { return -3.0 * std::pow(d.grid.node(i), -4.0); };
  const double num = q.integrate([&](std::size_t i) {
    const double r = d.grid.node(i);
    return dprime(i) * mprime(i) * r * r * r * r;
  });
  const double den = q.integrate([&](std::size_t i) {
    const double r = d.grid.node(i);
    return mprime(i) * mprime(i) * r * r * r * r;
  });
  FitResult out;
  out.value = num / den;
  const double res2 = q.integrate([&](std::size_t i) {
    const double r = d.grid.node(i);
    const double e = dprime(i) - out.value * mprime(i);
    return e * e * r * r * r * r;
  });
  out.residual = std::sqrt(kSigma4 * std::max(0.0, res2));
  return out;
}

FitResult beta_fit(const RadialData& d, std::pair<double, double> window) {
  RadialData zero(d.grid, std::vector<double>(d.size(), 0.0),
                  std::vector<double>(d.size(), 0.0));
  zero.u0p.assign(d.size(), 0.0);
  return beta_fit(d, zero, window);
}

double decay_rate_fit(const std::map<double, double>& norms) {
  if (norms.size() < 5) throw std::domain_error("decay_rate_fit: need >= 5 sample radii");
  const double r_min = norms.begin()->first;
  const double r_max = norms.rbegin()->first;
  if (!(r_min > 0.0) || r_max / r_min < 10.0)
    throw std::domain_error("decay_rate_fit: radii must span at least a decade");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [r, v] : norms) {
    if (!(v > 0.0)) throw std::domain_error("decay_rate_fit: norms must be positive");
    const double x = std::log(r), y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const auto n = static_cast<double>(norms.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace nonrad
