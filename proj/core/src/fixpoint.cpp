#include "nonrad/fixpoint.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nonrad/charnum.hpp"
#include "nonrad/errors.hpp"

namespace nonrad {

namespace {

double snap_up_to_node(double R, double step) {
  const auto k = static_cast<long long>(std::ceil(R / step - 1e-9));
  return static_cast<double>(std::max(k, 1LL)) * step;
}

void require_node(const GridSpec& g, double R, const char* who) {
  if (g.node_index(R) < 0 || g.node_index(-R) < 0)
    throw std::domain_error(std::string(who) + ": R must sit on a grid node");
}

// Interior fill a + b s (+ bump) restricted to [-R, R], with jump metadata at
// +-R so the fill's discrete moments match the continuum exactly.
RadialProfile filled_interior(const GridSpec& g, double R, double a, double b, double bump) {
  return truncated_profile(g, -R, R, [=](double s) {
    return a + b * s + ((bump != 0.0) ? bump * std::cos(M_PI * s / R) : 0.0);
  });
}

}  // namespace

double FixpointConfig::recipe_radius(ConstructionOrder order) const {
  const double r1 = std::pow(c, 1.5) * alpha * alpha;
  if (order == ConstructionOrder::first) return r1;
  return std::max(r1, std::sqrt(c) * std::pow(std::abs(beta), 2.0 / 3.0));
}

double FixpointConfig::effective_radius(ConstructionOrder order) const {
  const double raw = (R_override > 0.0) ? R_override : recipe_radius(order);
  return snap_up_to_node(raw, solve.step);
}

RadialProfile extend_profile_first(const RadialProfile& G_tail, double alpha, double R,
                                   double interior_bump) {
  if (!(R > 0.0)) throw std::domain_error("extend_profile_first: R must be > 0");
  require_node(G_tail.grid, R, "extend_profile_first");
  const double tail_int =
      moment0(G_tail, -INFINITY, -R) + moment0(G_tail, R, INFINITY);
  RadialProfile bump =
      (interior_bump != 0.0) ? filled_interior(G_tail.grid, R, 0.0, 0.0, interior_bump)
                             : RadialProfile(G_tail.grid);
  const double bump_int = (interior_bump != 0.0) ? moment0(bump, -INFINITY, INFINITY) : 0.0;
  const double a = -(alpha + tail_int + bump_int) / (2.0 * R);
  RadialProfile out = G_tail;
  RadialProfile fill = filled_interior(G_tail.grid, R, a, 0.0, 0.0);
  out += fill;
  out += bump;
  return out;
}

RadialProfile extend_profile_second(const RadialProfile& G_tail, double beta, double R,
                                    double interior_bump) {
  if (!(R > 0.0)) throw std::domain_error("extend_profile_second: R must be > 0");
  require_node(G_tail.grid, R, "extend_profile_second");
  const double i0 = moment0(G_tail, -INFINITY, -R) + moment0(G_tail, R, INFINITY);
  const double i1 = moment1(G_tail, -INFINITY, -R) + moment1(G_tail, R, INFINITY);
  RadialProfile bump =
      (interior_bump != 0.0) ? filled_interior(G_tail.grid, R, 0.0, 0.0, interior_bump)
                             : RadialProfile(G_tail.grid);
  const double b0 = (interior_bump != 0.0) ? moment0(bump, -INFINITY, INFINITY) : 0.0;
  const double b1 = (interior_bump != 0.0) ? moment1(bump, -INFINITY, INFINITY) : 0.0;
  const double a = -(i0 + b0) / (2.0 * R);
  const double b = 3.0 * (beta - i1 - b1) / (2.0 * R * R * R);
  RadialProfile out = G_tail;
  out += filled_interior(G_tail.grid, R, a, b, 0.0);
  out += bump;
  return out;
}

ScatterProfiles extract_scatter_profiles(const ExteriorSolution& sol, double R,
                                         double crosscheck_tol) {
  const GridSpec& g = sol.duhamel_backward.grid;
  const double T = sol.cfg.T;
  ScatterProfiles out;
  out.g_minus = RadialProfile(g);
  out.g_plus = RadialProfile(g);
  out.g_minus_sampled = RadialProfile(g);
  out.g_plus_sampled = RadialProfile(g);

  for (std::size_t i = 0; i < g.size(); ++i) {
    const double s = g.node(i);
    if (s <= R) continue;
    out.g_minus.values[i] = sol.duhamel_backward.value_at(s);
    out.g_plus.values[i] = sol.duhamel_forward.value_at(-s);
  }
  // one-sided limits at s = R (the accumulated profiles are continuous there)
  const long long iR = g.node_index(R);
  if (iR >= 0) {
    out.g_minus.set_jump(static_cast<std::size_t>(iR), 0.0,
                         sol.duhamel_backward.value_at(R));
    out.g_plus.set_jump(static_cast<std::size_t>(iR), 0.0,
                        sol.duhamel_forward.value_at(-R));
  }

  // Large-time sampling: past the horizon the Duhamel part continues as the
  // free wave of the accumulated profile, so the lemma's limit can be read at
  // t_s >> T; the r^2 u_t sample converges to the profile like 1/t_s.
  const double t_sample = 4.0 * T;
  FreeWave wb(sol.duhamel_backward), wf(sol.duhamel_forward);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double s = g.node(i);
    if (s <= R) continue;
    const double r = s + t_sample;
    out.g_minus_sampled.values[i] = r * r * wb.ut(r, -t_sample);
    out.g_plus_sampled.values[i] = r * r * wf.ut(r, +t_sample);
  }

  const double s_hi = g.s_max;
  auto l2_on = [&](const RadialProfile& p, double lo, double hi) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      const double x0 = g.node(i), x1 = g.node(i + 1);
      if (x0 < lo || x1 > hi) continue;
      acc += 0.5 * g.step *
             (p.values[i] * p.values[i] + p.values[i + 1] * p.values[i + 1]);
    }
    return std::sqrt(acc);
  };
  RadialProfile diff_m = out.g_minus - out.g_minus_sampled;
  RadialProfile diff_p = out.g_plus - out.g_plus_sampled;
  const double ref = std::max(l2_on(out.g_minus, R, s_hi), l2_on(out.g_plus, R, s_hi));
  const double dis = std::max(l2_on(diff_m, R, s_hi), l2_on(diff_p, R, s_hi));
  out.crosscheck_rel = (ref > 0.0) ? dis / ref : 0.0;

  const double gm_norm = l2_on(out.g_minus, R, g.s_max);
  const double gp_norm = l2_on(out.g_plus, R, g.s_max);
  out.bound_constant_minus =
      (sol.z_norm_backward > 0.0) ? gm_norm / sol.z_norm_backward : 0.0;
  out.bound_constant_plus = (sol.z_norm_forward > 0.0) ? gp_norm / sol.z_norm_forward : 0.0;

  if (ref > 0.0 && out.crosscheck_rel > crosscheck_tol)
    throw ExtractionError("extract_scatter_profiles: methods disagree (rel " +
                          std::to_string(out.crosscheck_rel) + "); T_extract too small?");
  return out;
}

namespace {

RadialProfile tail_from_scatter(const ScatterProfiles& sc, const GridSpec& g, double R) {
  RadialProfile tail(g);
  const double tol = 1e-9 * g.step;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double s = g.node(i);
    if (s > R + tol)
      tail.values[i] = -sc.g_minus.value_at(s);
    else if (s < -R - tol)
      tail.values[i] = -sc.g_plus.value_at(-s);
  }
  // genuine discontinuities of the tail map at +-R (one-sided limits carried
  // by the scatter profiles' jump metadata when present)
  auto limit_above = [&](const RadialProfile& p) {
    const long long i = p.grid.node_index(R);
    if (i >= 0)
      if (const ProfileJump* j = p.jump_at(static_cast<std::size_t>(i))) return j->right;
    return p.value_at(R);
  };
  const long long ip = g.node_index(R), im = g.node_index(-R);
  if (ip >= 0) tail.set_jump(static_cast<std::size_t>(ip), 0.0, -limit_above(sc.g_minus));
  if (im >= 0) tail.set_jump(static_cast<std::size_t>(im), -limit_above(sc.g_plus), 0.0);
  return tail;
}

}  // namespace

ApplyResult apply_T(const RadialProfile& G_tail, const FixpointConfig& cfg,
                    const Nonlinearity& F, ConstructionOrder order) {
  const double R = cfg.effective_radius(order);
  SolveConfig scfg = cfg.solve;
  scfg.R = R;
  scfg.T = cfg.T_extract;
  const GridSpec sg = scfg.solver_sgrid();
  RadialProfile tail = (G_tail.grid == sg) ? G_tail : G_tail.resampled(sg);

  ApplyResult out;
  if (order == ConstructionOrder::first) {
    RadialProfile full = extend_profile_first(tail, cfg.alpha, R, cfg.interior_bump);
    out.sol = solve_exterior_profile(full, F, scfg);
    out.scatter = extract_scatter_profiles(out.sol, R, cfg.extract_crosscheck_tol);
    out.tail = tail_from_scatter(out.scatter, sg, R);
  } else {
    if (!cfg.reference.has_value())
      throw std::domain_error("apply_T: second construction needs a reference run");
    const ReferenceRun& ref = *cfg.reference;
    RadialProfile ext = extend_profile_second(tail, cfg.beta, R, cfg.interior_bump);
    RadialProfile full = ext + ref.G_full.resampled(sg);
    auto [sol_u, sol_ref] = solve_exterior_pair(full, ref.G_full, ref.R, F, scfg);
    // w_NL = u - u^alpha - w_L has accumulation H_u - H_ref in each direction.
    ExteriorSolution wpart = sol_u;
    wpart.duhamel_backward = sol_u.duhamel_backward - sol_ref.duhamel_backward;
    wpart.duhamel_forward = sol_u.duhamel_forward - sol_ref.duhamel_forward;
    wpart.z_norm_backward = sol_u.z_norm_backward + sol_ref.z_norm_backward;
    wpart.z_norm_forward = sol_u.z_norm_forward + sol_ref.z_norm_forward;
    out.scatter = extract_scatter_profiles(wpart, R, cfg.extract_crosscheck_tol);
    out.tail = tail_from_scatter(out.scatter, sg, R);
    out.sol = std::move(sol_u);
  }
  return out;
}

std::string FixpointResult::tag() const {
  std::ostringstream os;
  os << (order == ConstructionOrder::first ? "first" : "second") << ":alpha=" << alpha;
  if (order == ConstructionOrder::second) os << ",beta=" << beta;
  os << ",R=" << R << ",c=" << c << ",step=" << sol.cfg.step << ",dt=" << sol.cfg.dt;
  if (!reference_tag.empty()) os << ",ref={" << reference_tag << "}";
  return os.str();
}

ReferenceRun as_reference(const FixpointResult& r) {
  if (r.order != ConstructionOrder::first)
    throw std::domain_error("as_reference: reference runs come from the first construction");
  ReferenceRun ref;
  ref.tag = r.tag();
  ref.alpha = r.alpha;
  ref.R = r.R;
  ref.G_full = r.full;
  return ref;
}

FixpointResult iterate_to_fixed_point(FixpointConfig cfg, const Nonlinearity& F,
                                      ConstructionOrder order) {
  if (order == ConstructionOrder::second && !cfg.reference.has_value()) {
    FixpointConfig ref_cfg = cfg;
    ref_cfg.beta = 0.0;
    ref_cfg.R_override = -1.0;
    ref_cfg.interior_bump = 0.0;
    FixpointResult ref_run = iterate_to_fixed_point(ref_cfg, F, ConstructionOrder::first);
    cfg.reference = as_reference(ref_run);
  }

  const double R = cfg.effective_radius(order);
  SolveConfig scfg = cfg.solve;
  scfg.R = R;
  scfg.T = cfg.T_extract;
  const GridSpec sg = scfg.solver_sgrid();

  FixpointResult res;
  res.order = order;
  res.alpha = cfg.alpha;
  res.beta = (order == ConstructionOrder::second) ? cfg.beta : 0.0;
  res.R = R;
  res.c = cfg.c;
  if (cfg.reference.has_value()) res.reference_tag = cfg.reference->tag;

  auto distance = [&](const RadialProfile& A, const RadialProfile& B) {
    if (order == ConstructionOrder::first) return weighted_distance(A, B, R, 7.0 / 6.0);
    return weighted_distance_second(A, B, R, cfg.alpha, cfg.beta);
  };

  RadialProfile G(sg);
  bool converged = false;
  int k = 0;
  for (; k < cfg.max_iters; ++k) {
    ApplyResult ap = apply_T(G, cfg, F, order);
    const double d = distance(ap.tail, G);
    res.distances.push_back(d);
    res.tail_norms.push_back(l2_tail(ap.tail, R));
    res.picard_contraction_max =
        std::max(res.picard_contraction_max, ap.sol.picard_contraction_max);
    res.extract_crosscheck_rel =
        std::max(res.extract_crosscheck_rel, ap.scatter.crosscheck_rel);
    if (k > 0) {
      const double prev = res.distances[static_cast<std::size_t>(k) - 1];
      if (prev > 0.0) {
        const double ratio = d / prev;
        res.ratios.push_back(ratio);
        if (ratio >= 1.0 && d > 10.0 * cfg.tol)
          throw NonContractionError(
              "iterate_to_fixed_point: measured ratio >= 1; increase c (got ratio " +
                  std::to_string(ratio) + ")",
              ratio);
      }
    }
    G = std::move(ap.tail);
    if (d < cfg.tol) {
      converged = true;
      ++k;
      break;
    }
  }
  if (!converged)
    throw NonContractionError("iterate_to_fixed_point: max_iters exceeded",
                              res.ratios.empty() ? 0.0 : res.ratios.back());

  res.converged = true;
  res.iters = k;
  res.tail = G;
  res.full = (order == ConstructionOrder::first)
                 ? extend_profile_first(G, cfg.alpha, R, cfg.interior_bump)
                 : extend_profile_second(G, cfg.beta, R, cfg.interior_bump) +
                       cfg.reference->G_full.resampled(sg);

  // final solve of the converged profile, with far-field closure coefficients
  if (order == ConstructionOrder::first) {
    res.sol = solve_exterior_profile(res.full, F, scfg);
  } else {
    auto [su, sref] = solve_exterior_pair(res.full, cfg.reference->G_full,
                                          cfg.reference->R, F, scfg);
    res.sol = std::move(su);
  }
  res.sol.tail_alpha = cfg.alpha;
  res.sol.tail_beta = res.beta;
  for (const auto& s : res.sol.snaps)
    res.energy_trace.emplace_back(s.t, exterior_energy(res.sol, s.t));

  res.recovered_alpha = alpha_of(res.full);
  if (order == ConstructionOrder::second)
    res.recovered_beta =
        beta_relative(res.full, cfg.reference->G_full.resampled(sg), 1e-6);
  return res;
}

}  // namespace nonrad
