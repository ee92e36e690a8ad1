#include "nonrad/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace nonrad {

RadialProfile::RadialProfile(GridSpec g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size())
    throw std::domain_error("RadialProfile: sample count does not match grid");
  check_finite();
}

void RadialProfile::check_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) throw std::domain_error("RadialProfile: non-finite sample");
  for (const auto& j : jumps)
    if (!std::isfinite(j.left) || !std::isfinite(j.right))
      throw std::domain_error("RadialProfile: non-finite jump value");
}

const ProfileJump* RadialProfile::jump_at(std::size_t idx) const {
  for (const auto& j : jumps)
    if (j.idx == idx) return &j;
  return nullptr;
}

void RadialProfile::set_jump(std::size_t idx, double left, double right) {
  if (idx >= values.size()) throw std::domain_error("set_jump: index out of range");
  values[idx] = 0.5 * (left + right);
  for (auto& j : jumps) {
    if (j.idx == idx) {
      j.left = left;
      j.right = right;
      return;
    }
  }
  jumps.push_back({idx, left, right});
  std::sort(jumps.begin(), jumps.end(),
            [](const ProfileJump& a, const ProfileJump& b) { return a.idx < b.idx; });
}

std::pair<double, double> RadialProfile::cell_values(std::size_t i) const {
  double vl = values[i], vr = values[i + 1];
  if (const ProfileJump* j = jump_at(i)) vl = j->right;
  if (const ProfileJump* j = jump_at(i + 1)) vr = j->left;
  return {vl, vr};
}

double RadialProfile::value_at(double s) const {
  if (s < grid.s_min || s > grid.s_max) return 0.0;
  const double x = (s - grid.s_min) / grid.step;
  auto i = static_cast<std::size_t>(x);
  if (i >= values.size() - 1) return values.back();
  const double w = x - static_cast<double>(i);
  if (w <= 1e-9) return values[i];
  if (w >= 1.0 - 1e-9) return values[i + 1];
  const auto [vl, vr] = cell_values(i);
  return vl * (1.0 - w) + vr * w;
}

double RadialProfile::support_radius() const {
  double r = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] != 0.0) r = std::max(r, std::abs(grid.node(i)));
  for (const auto& j : jumps)
    if (j.left != 0.0 || j.right != 0.0) r = std::max(r, std::abs(grid.node(j.idx)));
  return r;
}

namespace {

// merged jump list for a pointwise combination of two profiles
std::vector<ProfileJump> merge_jumps(const RadialProfile& a, const RadialProfile& b,
                                     double sb) {
  std::map<std::size_t, std::pair<double, double>> m;
  for (const auto& j : a.jumps) m[j.idx] = {j.left, j.right};
  for (const auto& j : b.jumps) {
    auto it = m.find(j.idx);
    if (it == m.end()) {
      const double va = a.values[j.idx];
      m[j.idx] = {va + sb * j.left, va + sb * j.right};
    } else {
      it->second.first += sb * j.left;
      it->second.second += sb * j.right;
    }
  }
  // nodes where only `a` jumps still need b's plain sample folded in
  for (const auto& j : a.jumps) {
    if (!b.jump_at(j.idx)) {
      m[j.idx].first += sb * b.values[j.idx];
      m[j.idx].second += sb * b.values[j.idx];
    }
  }
  std::vector<ProfileJump> out;
  for (const auto& [idx, lr] : m)
    if (lr.first != lr.second) out.push_back({idx, lr.first, lr.second});
  return out;
}

}  // namespace

RadialProfile& RadialProfile::operator+=(const RadialProfile& o) {
  if (grid != o.grid) throw std::domain_error("profile grids differ");
  std::vector<ProfileJump> merged = merge_jumps(*this, o, 1.0);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
  jumps = std::move(merged);
  return *this;
}

RadialProfile& RadialProfile::operator-=(const RadialProfile& o) {
  if (grid != o.grid) throw std::domain_error("profile grids differ");
  std::vector<ProfileJump> merged = merge_jumps(*this, o, -1.0);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
  jumps = std::move(merged);
  return *this;
}

RadialProfile& RadialProfile::operator*=(double c) {
  for (double& v : values) v *= c;
  for (auto& j : jumps) {
    j.left *= c;
    j.right *= c;
  }
  return *this;
}

RadialProfile RadialProfile::resampled(const GridSpec& g) const {
  if (g == grid) return *this;
  RadialProfile out(g);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = value_at(g.node(i));
  return out;
}

RadialProfile sampled_profile(const GridSpec& g, const std::function<double(double)>& fn) {
  RadialProfile out(g);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = fn(g.node(i));
  out.check_finite();
  return out;
}

RadialProfile truncated_profile(const GridSpec& g, double a, double b,
                                const std::function<double(double)>& fn) {
  if (!(a < b)) throw std::domain_error("truncated_profile: need a < b");
  const long long ia = g.node_index(a), ib = g.node_index(b);
  if (ia < 0 || ib < 0)
    throw std::domain_error("truncated_profile: cut points must be grid nodes");
  RadialProfile out(g);
  for (long long i = ia + 1; i < ib; ++i)
    out.values[static_cast<std::size_t>(i)] = fn(g.node(static_cast<std::size_t>(i)));
  out.set_jump(static_cast<std::size_t>(ia), 0.0, fn(a));
  out.set_jump(static_cast<std::size_t>(ib), fn(b), 0.0);
  out.check_finite();
  return out;
}

RadialProfile indicator_profile(const GridSpec& g, double a, double b, double amplitude) {
  return truncated_profile(g, a, b, [amplitude](double) { return amplitude; });
}

namespace {

enum class Kind { Plain, WeightedS, Square };

// exact integral over [lo, hi] inside cell [x0, x0 + h] with endpoint values
double piece(Kind kind, double x0, double h, double v0, double v1, double lo, double hi) {
  auto vat = [&](double x) { return v0 + (v1 - v0) * (x - x0) / h; };
  const double va = vat(lo), vb = vat(hi), w = hi - lo;
  switch (kind) {
    case Kind::Plain: return w * 0.5 * (va + vb);
    case Kind::WeightedS: return w / 6.0 * (lo * (2.0 * va + vb) + hi * (va + 2.0 * vb));
    case Kind::Square: return w / 3.0 * (va * va + va * vb + vb * vb);
  }
  return 0.0;
}

double integrate_recon(const RadialProfile& G, double a, double b, Kind kind) {
  const GridSpec& g = G.grid;
  if (std::isinf(a)) a = a < 0 ? g.s_min : g.s_max;
  if (std::isinf(b)) b = b < 0 ? g.s_min : g.s_max;
  if (!(a <= b)) throw std::domain_error("quadrature: need a <= b");
  if (a < g.s_min - 1e-9 || b > g.s_max + 1e-9)
    throw std::domain_error("quadrature: interval outside grid");
  a = std::max(a, g.s_min);
  b = std::min(b, g.s_max);
  if (a >= b) return 0.0;

  const double h = g.step;
  const auto n = static_cast<long long>(G.size());
  auto cell_of = [&](double x) {
    auto c = static_cast<long long>((x - g.s_min) / h);
    return std::clamp(c, 0LL, n - 2);
  };
  const long long ca = cell_of(a);
  const long long cb = cell_of(b);

  double acc = 0.0;
  for (long long c = ca; c <= cb; ++c) {
    const double x0 = g.node(static_cast<std::size_t>(c));
    const double lo = std::max(a, x0);
    const double hi = std::min(b, x0 + h);
    if (hi <= lo) continue;
    const auto [v0, v1] = G.cell_values(static_cast<std::size_t>(c));
    acc += piece(kind, x0, h, v0, v1, lo, hi);
  }
  return acc;
}

}  // namespace

double moment0(const RadialProfile& G, double a, double b) {
  return integrate_recon(G, a, b, Kind::Plain);
}

double moment1(const RadialProfile& G, double a, double b) {
  return integrate_recon(G, a, b, Kind::WeightedS);
}

double l2_tail(const RadialProfile& G, double r) {
  if (r < 0.0) throw std::domain_error("l2_tail: r must be >= 0");
  const GridSpec& g = G.grid;
  double acc = 0.0;
  if (-r > g.s_min) acc += integrate_recon(G, g.s_min, std::min(-r, g.s_max), Kind::Square);
  if (r < g.s_max) acc += integrate_recon(G, std::max(r, g.s_min), g.s_max, Kind::Square);
  return std::sqrt(std::max(0.0, acc));
}

double l2_norm(const RadialProfile& G) { return l2_tail(G, 0.0); }

std::pair<RadialProfile, RadialProfile> split_at(const RadialProfile& G, double r1) {
  if (!(r1 > 0.0)) throw std::domain_error("split_at: r1 must be > 0");
  RadialProfile inner(G.grid), outer(G.grid);
  const double tol = 1e-9 * G.grid.step;
  for (std::size_t i = 0; i < G.size(); ++i) {
    if (std::abs(G.grid.node(i)) <= r1 + tol)
      inner.values[i] = G.values[i];
    else
      outer.values[i] = G.values[i];
  }
  for (const auto& j : G.jumps) {
    const double s = G.grid.node(j.idx);
    if (std::abs(std::abs(s) - r1) <= tol) {
      // the cut runs through this jump: interior-facing side stays inner
      if (s > 0) {
        inner.set_jump(j.idx, j.left, 0.0);
        outer.set_jump(j.idx, 0.0, j.right);
      } else {
        inner.set_jump(j.idx, 0.0, j.right);
        outer.set_jump(j.idx, j.left, 0.0);
      }
    } else if (std::abs(s) < r1) {
      inner.set_jump(j.idx, j.left, j.right);
    } else {
      outer.set_jump(j.idx, j.left, j.right);
    }
  }
  return {inner, outer};
}

RadialProfile translate(const RadialProfile& G, double t0) {
  const GridSpec& g = G.grid;
  if (t0 == 0.0) return G;
  // reject shifts that push non-negligible L2 mass off the grid
  const double total = l2_norm(G);
  double lost = 0.0;
  if (t0 > 0.0)
    lost = std::sqrt(std::max(
        0.0, integrate_recon(G, g.s_min, std::min(g.s_min + t0, g.s_max), Kind::Square)));
  else
    lost = std::sqrt(std::max(
        0.0, integrate_recon(G, std::max(g.s_max + t0, g.s_min), g.s_max, Kind::Square)));
  if (lost > std::max(1e-6 * total, 1e-14))
    throw std::domain_error("translate: shifted support leaves the grid");

  RadialProfile out(g);
  const double x = t0 / g.step;
  const auto k = static_cast<long long>(std::llround(x));
  const auto n = static_cast<long long>(G.size());
  if (std::abs(x - static_cast<double>(k)) < 1e-9) {
    for (long long i = 0; i < n; ++i) {
      const long long j = i + k;
      out.values[static_cast<std::size_t>(i)] =
          (j >= 0 && j < n) ? G.values[static_cast<std::size_t>(j)] : 0.0;
    }
    for (const auto& j : G.jumps) {
      const long long idx = static_cast<long long>(j.idx) - k;
      if (idx >= 0 && idx < n)
        out.set_jump(static_cast<std::size_t>(idx), j.left, j.right);
    }
  } else {
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = G.value_at(g.node(i) + t0);
  }
  return out;
}

namespace {

double sup_weighted_tail(const RadialProfile& D, double R,
                         const std::function<double(double)>& weight) {
  const GridSpec& g = D.grid;
  const std::size_t n = D.size();
  std::vector<double> cell_sq(n - 1);
  for (std::size_t c = 0; c + 1 < n; ++c) {
    const auto [v0, v1] = D.cell_values(c);
    cell_sq[c] = piece(Kind::Square, g.node(c), g.step, v0, v1, g.node(c), g.node(c) + g.step);
  }
  // tail_above[i] = int_{node_i}^{s_max} D^2, tail_below[i] = int_{s_min}^{node_i} D^2
  std::vector<double> tail_above(n, 0.0), tail_below(n, 0.0);
  for (std::size_t i = n - 1; i-- > 0;) tail_above[i] = tail_above[i + 1] + cell_sq[i];
  for (std::size_t i = 1; i < n; ++i) tail_below[i] = tail_below[i - 1] + cell_sq[i - 1];

  auto tail_sq_at = [&](double r) {
    double acc = 0.0;
    if (-r > g.s_min) acc += integrate_recon(D, g.s_min, std::min(-r, g.s_max), Kind::Square);
    if (r < g.s_max) acc += integrate_recon(D, std::max(r, g.s_min), g.s_max, Kind::Square);
    return acc;
  };

  double best = weight(R) * std::sqrt(std::max(0.0, tail_sq_at(R)));
  for (std::size_t i = 0; i < n; ++i) {
    const double s = g.node(i);
    if (s < R) continue;
    double sq = tail_above[i];
    const long long j = g.node_index(-s);
    if (j >= 0)
      sq += tail_below[static_cast<std::size_t>(j)];
    else if (-s > g.s_min)
      sq += integrate_recon(D, g.s_min, -s, Kind::Square);
    const double v = weight(s) * std::sqrt(std::max(0.0, sq));
    best = std::max(best, v);
  }
  return best;
}

}  // namespace

double weighted_distance(const RadialProfile& G1, const RadialProfile& G2, double R,
                         double exponent) {
  if (!(R > 0.0)) throw std::domain_error("weighted_distance: R must be > 0");
  RadialProfile D = G1 - G2;
  return sup_weighted_tail(D, R, [exponent](double r) { return std::pow(r, exponent); });
}

double weighted_distance_second(const RadialProfile& G1, const RadialProfile& G2, double R,
                                double alpha, double beta) {
  if (!(R > 0.0)) throw std::domain_error("weighted_distance_second: R must be > 0");
  if (beta == 0.0) return weighted_distance(G1, G2, R, 13.0 / 6.0);
  RadialProfile D = G1 - G2;
  const double ab = std::abs(beta), aa = std::abs(alpha);
  const double crossover = (aa == 0.0) ? std::numeric_limits<double>::infinity() : ab / aa;
  const double w_inner = std::pow(ab, -7.0 / 3.0);
  const double w_outer = (aa == 0.0) ? 0.0 : std::pow(aa, -4.0 / 3.0) / ab;
  return sup_weighted_tail(D, R, [=](double r) {
    if (r <= crossover) return w_inner * std::pow(r, 3.5);
    return w_outer * std::pow(r, 13.0 / 6.0);
  });
}

}  // namespace nonrad
