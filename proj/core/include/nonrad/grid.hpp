#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace nonrad {

// Surface area of the unit 4-sphere, 8*pi^2/3.
inline constexpr double kSigma4 = 26.318945069571622497;

// Uniform grid on [s_min, s_max] for radiation profiles G(s).
struct GridSpec {
  double s_min = -64.0;
  double s_max = 64.0;
  double step = 1.0 / 128.0;
  double sigma4 = kSigma4;  // kept as data so file formats can carry it

  GridSpec() = default;
  GridSpec(double lo, double hi, double h, double sig = kSigma4)
      : s_min(lo), s_max(hi), step(h), sigma4(sig) {
    validate();
  }

  static GridSpec symmetric(double extent, double h) { return GridSpec(-extent, extent, h); }

  void validate() const {
    if (!(s_min < s_max)) throw std::domain_error("GridSpec: s_min must be < s_max");
    if (!(step > 0.0)) throw std::domain_error("GridSpec: step must be positive");
    const double n = (s_max - s_min) / step;
    if (std::abs(n - std::round(n)) > 1e-8 * std::max(1.0, n))
      throw std::domain_error("GridSpec: (s_max - s_min)/step must be an integer");
    if (std::abs(sigma4 - kSigma4) > 1e-12 * kSigma4)
      throw std::domain_error("GridSpec: sigma4 must equal 8*pi^2/3");
  }

  std::size_t size() const {
    return static_cast<std::size_t>(std::llround((s_max - s_min) / step)) + 1;
  }
  double node(std::size_t i) const { return s_min + static_cast<double>(i) * step; }

  // Index of the nearest node; -1 if s is not a node to within tolerance.
  long long node_index(double s, double tol = 1e-9) const {
    const double x = (s - s_min) / step;
    const long long i = std::llround(x);
    if (i < 0 || i >= static_cast<long long>(size())) return -1;
    return (std::abs(x - static_cast<double>(i)) <= tol) ? i : -1;
  }

  bool contains(double s) const { return s >= s_min - 1e-12 && s <= s_max + 1e-12; }

  bool operator==(const GridSpec& o) const {
    return s_min == o.s_min && s_max == o.s_max && step == o.step;
  }
  bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

// Uniform radial grid on (0, r_max]; the first node sits at r = step.
struct RadialGrid {
  double r_max = 128.0;
  double step = 1.0 / 128.0;

  RadialGrid() = default;
  RadialGrid(double rmax, double h) : r_max(rmax), step(h) {
    if (!(r_max > 0.0) || !(step > 0.0)) throw std::domain_error("RadialGrid: need r_max, step > 0");
    const double n = r_max / step;
    if (std::abs(n - std::round(n)) > 1e-8 * std::max(1.0, n))
      throw std::domain_error("RadialGrid: r_max/step must be an integer");
  }

  std::size_t size() const { return static_cast<std::size_t>(std::llround(r_max / step)); }
  double node(std::size_t i) const { return static_cast<double>(i + 1) * step; }

  bool operator==(const RadialGrid& o) const { return r_max == o.r_max && step == o.step; }
  bool operator!=(const RadialGrid& o) const { return !(*this == o); }
};

}  // namespace nonrad
