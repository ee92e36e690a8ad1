#include "nonrad/extsolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nonrad/errors.hpp"

namespace nonrad {

void SolveConfig::validate() const {
  if (R < 0.0) throw std::domain_error("SolveConfig: R must be >= 0");
  if (!(T > 0.0) || !(dt > 0.0) || !(step > 0.0) || !(r_max > 0.0))
    throw std::domain_error("SolveConfig: T, dt, step, r_max must be positive");
  const double n = T / dt;
  if (std::abs(n - std::round(n)) > 1e-8)
    throw std::domain_error("SolveConfig: T must be a whole number of steps dt");
  const double m = snapshot_stride_time / dt;
  if (std::abs(m - std::round(m)) > 1e-8 || m < 1.0 - 1e-8)
    throw std::domain_error("SolveConfig: snapshot stride must be a multiple of dt");
  if (picard_iters < 1) throw std::domain_error("SolveConfig: picard_iters must be >= 1");
}

std::size_t SolveConfig::steps_per_direction() const {
  return static_cast<std::size_t>(std::llround(T / dt));
}

GridSpec SolveConfig::solver_sgrid() const {
  const double extent = std::ceil((r_max + T) / step) * step;
  return GridSpec(-extent, extent, step);
}

const Snapshot& ExteriorSolution::at_time(double t) const {
  for (const auto& s : snaps)
    if (std::abs(s.t - t) <= 1e-9) return s;
  throw std::domain_error("ExteriorSolution: time not on the stored snapshot grid");
}

bool ExteriorSolution::has_time(double t) const {
  for (const auto& s : snaps)
    if (std::abs(s.t - t) <= 1e-9) return true;
  return false;
}

RadialData ExteriorSolution::data_at(double t) const {
  const Snapshot& s = at_time(t);
  RadialData d(rgrid, s.u, s.ut);
  d.u0p = s.ur;
  if (tail_alpha.has_value() && tail_beta.has_value()) {
    d.tail_c0 = *tail_beta + *tail_alpha * t;
    d.tail_c1 = *tail_alpha;
    d.tail_radius = rgrid.r_max;
  }
  return d;
}

namespace {

double smoothstep01(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * (3.0 - 2.0 * x);
}

double mask_weight(const SolveConfig& cfg, double mask_R, double r, double abs_t) {
  const double edge = mask_R + abs_t;
  if (cfg.mask == SolveConfig::Mask::sharp) return (r >= edge - 1e-9) ? 1.0 : 0.0;
  return smoothstep01((r - edge) / cfg.mask_width);
}

// H(s) += weight * Gamma(s - shift); content pushed past the grid is dropped
// (it can never re-enter an evaluation window inside the horizon).
void shift_add(RadialProfile& H, const RadialProfile& gamma, double shift, double weight) {
  const GridSpec& g = H.grid;
  const double x = shift / g.step;
  const auto k = static_cast<long long>(std::llround(x));
  const auto n = static_cast<long long>(H.size());
  if (std::abs(x - static_cast<double>(k)) < 1e-9) {
    for (long long i = 0; i < n; ++i) {
      const long long j = i - k;
      if (j >= 0 && j < n)
        H.values[static_cast<std::size_t>(i)] +=
            weight * gamma.values[static_cast<std::size_t>(j)];
    }
  } else {
    for (long long i = 0; i < n; ++i)
      H.values[static_cast<std::size_t>(i)] +=
          weight * gamma.value_at(g.node(static_cast<std::size_t>(i)) - shift);
  }
}

double l2_r5_norm(const std::vector<double>& f, const RadialGrid& rg) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    const double r0 = rg.node(i), r1 = rg.node(i + 1);
    const double a = f[i] * f[i] * r0 * r0 * r0 * r0;
    const double b = f[i + 1] * f[i + 1] * r1 * r1 * r1 * r1;
    acc += 0.5 * rg.step * (a + b);
  }
  return std::sqrt(kSigma4 * acc);
}

struct Channel {
  FreeWave lin;
  const Nonlinearity* F;
  double mask_R;
  RadialProfile H;
  std::vector<Snapshot> snaps;
  double picard_max = 0.0;
  double z_bwd = 0.0, z_fwd = 0.0;
  std::vector<std::pair<double, double>> slice_trace;

  Channel(RadialProfile G_full, const Nonlinearity* nl, double mR, const GridSpec& sg)
      : lin(std::move(G_full)), F(nl), mask_R(mR), H(sg) {}
};

std::size_t first_active_index(const RadialGrid& rg, double mask_R, double abs_t) {
  const double edge = mask_R + abs_t;
  const double p = edge / rg.step - 1.0;  // node(i) = (i+1) step
  auto i = static_cast<long long>(std::ceil(p - 1e-9));
  return static_cast<std::size_t>(std::clamp(i, 0LL, static_cast<long long>(rg.size())));
}

Snapshot take_snapshot(const Channel& ch, const FreeWave& wave, const RadialGrid& rg, double t) {
  Snapshot s;
  s.t = t;
  s.first_active = first_active_index(rg, ch.mask_R, std::abs(t));
  const std::size_t n = rg.size();
  s.u.assign(n, 0.0);
  s.ut.assign(n, 0.0);
  s.ur.assign(n, 0.0);
  for (std::size_t i = s.first_active; i < n; ++i) {
    const double r = rg.node(i);
    s.u[i] = ch.lin.u(r, t) + wave.u(r, t);
    s.ut[i] = ch.lin.ut(r, t) + wave.ut(r, t);
    s.ur[i] = ch.lin.ur(r, t) + wave.ur(r, t);
  }
  return s;
}

// Advance every channel from t = 0 to dir * T. Channels evolve independently;
// lockstep only synchronizes their time grids.
void march(std::vector<Channel>& chs, int dir, const SolveConfig& cfg) {
  const RadialGrid rg = cfg.rgrid();
  const std::size_t nsteps = cfg.steps_per_direction();
  const std::size_t nr = rg.size();
  const double dt = cfg.dt;
  const double weight = dir * dt;
  const auto snap_every = static_cast<std::size_t>(std::llround(cfg.snapshot_stride_time / dt));

  std::vector<double> base(nr), f_cur(nr), f_prev(nr), w(nr);
  for (std::size_t n = 0; n < nsteps; ++n) {
    const double t_mid = dir * (static_cast<double>(n) + 0.5) * dt;
    const double t_next = dir * static_cast<double>(n + 1) * dt;
    const double abs_tm = std::abs(t_mid);

    for (auto& ch : chs) {
      const FreeWave wave(ch.H);
      const std::size_t i0 = first_active_index(rg, ch.mask_R, abs_tm);
      for (std::size_t i = i0; i < nr; ++i) {
        const double r = rg.node(i);
        base[i] = ch.lin.u(r, t_mid) + wave.u(r, t_mid);
        w[i] = mask_weight(cfg, ch.mask_R, r, abs_tm);
      }

      // Picard on the implicit midpoint source. The provisional slice feeds
      // back into u(t_mid) only through the half-step position term dt^2/8 f.
      std::fill(f_prev.begin(), f_prev.end(), 0.0);
      std::fill(f_cur.begin(), f_cur.end(), 0.0);
      double delta_prev = -1.0;
      double max_abs_u = 0.0;
      for (int k = 0; k < cfg.picard_iters; ++k) {
        double delta = 0.0;
        max_abs_u = 0.0;
        for (std::size_t i = i0; i < nr; ++i) {
          const double corr = (k == 0) ? 0.0 : dt * dt / 8.0 * f_prev[i];
          const double u = base[i] + corr;
          if (!std::isfinite(u) || std::abs(u) > cfg.blowup_guard)
            throw SolverDivergenceError("solve_exterior: field blew up at t_mid = " +
                                        std::to_string(t_mid));
          max_abs_u = std::max(max_abs_u, std::abs(u));
          const double fv = w[i] * (*ch.F)(t_mid, rg.node(i), u);
          delta = std::max(delta, std::abs(fv - f_prev[i]));
          f_cur[i] = fv;
        }
        if (k >= 2 && delta_prev > 0.0 && delta / delta_prev >= 1.0 && delta > 1e-14)
          throw SolverDivergenceError("solve_exterior: Picard sub-iteration not contracting");
        delta_prev = delta;
        std::swap(f_prev, f_cur);
      }
      // Per-step contraction bound of the sub-iteration (reported, and the
      // divergence signal for the large-data regime).
      const double contraction =
          dt * dt / 8.0 * (7.0 / 3.0) * ch.F->gamma * std::pow(max_abs_u, 4.0 / 3.0);
      ch.picard_max = std::max(ch.picard_max, contraction);
      if (contraction >= 1.0)
        throw SolverDivergenceError("solve_exterior: contraction factor >= 1 (large data)");

      // zero out below the active window before building the slice profile
      std::fill(f_prev.begin(), f_prev.begin() + static_cast<long>(i0), 0.0);
      const RadialProfile gamma = source_profile(f_prev, rg, ch.H.grid);
      shift_add(ch.H, gamma, t_mid, weight);

      const double slice_norm = l2_r5_norm(f_prev, rg);
      ch.slice_trace.emplace_back(t_mid, slice_norm);
      if (dir > 0)
        ch.z_fwd += dt * slice_norm;
      else
        ch.z_bwd += dt * slice_norm;
    }

    if ((n + 1) % snap_every == 0) {
      for (auto& ch : chs) {
        const FreeWave wave(ch.H);
        ch.snaps.push_back(take_snapshot(ch, wave, rg, t_next));
      }
    }
  }
}

ExteriorSolution finalize(Channel&& ch, const SolveConfig& cfg, RadialProfile&& H_bwd,
                          RadialProfile&& H_fwd) {
  ExteriorSolution sol;
  sol.cfg = cfg;
  sol.R = ch.mask_R;
  sol.rgrid = cfg.rgrid();
  sol.data_profile = ch.lin.profile();
  sol.duhamel_backward = std::move(H_bwd);
  sol.duhamel_forward = std::move(H_fwd);
  std::sort(ch.snaps.begin(), ch.snaps.end(),
            [](const Snapshot& a, const Snapshot& b) { return a.t < b.t; });
  sol.snaps = std::move(ch.snaps);
  sol.picard_contraction_max = ch.picard_max;
  sol.z_norm_backward = ch.z_bwd;
  sol.z_norm_forward = ch.z_fwd;
  std::sort(ch.slice_trace.begin(), ch.slice_trace.end());
  sol.slice_l2_trace = std::move(ch.slice_trace);
  return sol;
}

// Y norm of the linear part over the window, for the small-data warning.
double linear_y_norm(const FreeWave& lin, const SolveConfig& cfg) {
  const RadialGrid rg = cfg.rgrid();
  const std::size_t nr = rg.size();
  std::vector<double> inner;
  std::vector<double> ts;
  for (double t = -cfg.T; t <= cfg.T + 1e-12; t += cfg.snapshot_stride_time) {
    const std::size_t i0 = first_active_index(rg, cfg.R, std::abs(t));
    double acc = 0.0;
    for (std::size_t i = i0; i + 1 < nr; ++i) {
      const double r0 = rg.node(i), r1 = rg.node(i + 1);
      const double a = std::pow(std::abs(lin.u(r0, t)), 14.0 / 3.0) * r0 * r0 * r0 * r0;
      const double b = std::pow(std::abs(lin.u(r1, t)), 14.0 / 3.0) * r1 * r1 * r1 * r1;
      acc += 0.5 * rg.step * (a + b);
    }
    inner.push_back(std::pow(kSigma4 * acc, (3.0 / 14.0) * (7.0 / 3.0)));
    ts.push_back(t);
  }
  double acc_t = 0.0;
  for (std::size_t j = 0; j + 1 < ts.size(); ++j)
    acc_t += 0.5 * (ts[j + 1] - ts[j]) * (inner[j] + inner[j + 1]);
  return std::pow(acc_t, 3.0 / 7.0);
}

}  // namespace

ExteriorSolution solve_exterior_profile(const RadialProfile& G_full, const Nonlinearity& F,
                                        SolveConfig cfg) {
  cfg.validate();
  const GridSpec sg = cfg.solver_sgrid();
  const RadialGrid rg = cfg.rgrid();
  RadialProfile G = (G_full.grid == sg) ? G_full : G_full.resampled(sg);

  Channel fwd(G, &F, cfg.R, sg);
  const double lin_y = linear_y_norm(fwd.lin, cfg);

  // t = 0 snapshot comes from the linear part alone (H = 0 there).
  fwd.snaps.push_back(take_snapshot(fwd, FreeWave(fwd.H), rg, 0.0));

  std::vector<Channel> cf;
  cf.push_back(std::move(fwd));
  march(cf, +1, cfg);
  RadialProfile H_fwd = cf[0].H;

  Channel bwd(G, &F, cfg.R, sg);
  std::vector<Channel> cb;
  cb.push_back(std::move(bwd));
  march(cb, -1, cfg);
  RadialProfile H_bwd = cb[0].H;

  // merge backward-channel results into the forward channel record
  Channel& main = cf[0];
  for (auto& s : cb[0].snaps) main.snaps.push_back(std::move(s));
  main.picard_max = std::max(main.picard_max, cb[0].picard_max);
  main.z_bwd = cb[0].z_bwd;
  for (auto& p : cb[0].slice_trace) main.slice_trace.push_back(p);

  ExteriorSolution sol = finalize(std::move(main), cfg, std::move(H_bwd), std::move(H_fwd));
  sol.linear_y_norm = lin_y;
  sol.small_data_warning = lin_y > cfg.y_warn_threshold;
  return sol;
}

ExteriorSolution solve_exterior(const RadialData& d, const Nonlinearity& F, SolveConfig cfg) {
  return solve_exterior_profile(profile_from_data(d), F, cfg);
}

ExteriorSolution solve_exterior(const RadialData& d, const Nonlinearity& F, double R, double T,
                                double dt) {
  SolveConfig cfg;
  cfg.R = R;
  cfg.T = T;
  cfg.dt = dt;
  cfg.step = d.grid.step;
  cfg.r_max = d.grid.r_max;
  return solve_exterior(d, F, cfg);
}

std::pair<ExteriorSolution, ExteriorSolution> solve_exterior_pair(const RadialProfile& G_full,
                                                                  const RadialProfile& G_ref,
                                                                  double R_ref,
                                                                  const Nonlinearity& F,
                                                                  SolveConfig cfg) {
  cfg.validate();
  const GridSpec sg = cfg.solver_sgrid();
  const RadialGrid rg = cfg.rgrid();
  RadialProfile G = (G_full.grid == sg) ? G_full : G_full.resampled(sg);
  RadialProfile Gr = (G_ref.grid == sg) ? G_ref : G_ref.resampled(sg);

  auto run_direction = [&](int dir, std::vector<Channel>& chs) { march(chs, dir, cfg); };

  std::vector<Channel> cf;
  cf.emplace_back(G, &F, cfg.R, sg);
  cf.emplace_back(Gr, &F, R_ref, sg);
  const double lin_y = linear_y_norm(cf[0].lin, cfg);
  cf[0].snaps.push_back(take_snapshot(cf[0], FreeWave(cf[0].H), rg, 0.0));
  cf[1].snaps.push_back(take_snapshot(cf[1], FreeWave(cf[1].H), rg, 0.0));
  run_direction(+1, cf);
  RadialProfile Hf_main = cf[0].H, Hf_ref = cf[1].H;

  std::vector<Channel> cb;
  cb.emplace_back(G, &F, cfg.R, sg);
  cb.emplace_back(Gr, &F, R_ref, sg);
  run_direction(-1, cb);

  for (int c = 0; c < 2; ++c) {
    for (auto& s : cb[static_cast<std::size_t>(c)].snaps)
      cf[static_cast<std::size_t>(c)].snaps.push_back(std::move(s));
    cf[static_cast<std::size_t>(c)].picard_max = std::max(
        cf[static_cast<std::size_t>(c)].picard_max, cb[static_cast<std::size_t>(c)].picard_max);
    cf[static_cast<std::size_t>(c)].z_bwd = cb[static_cast<std::size_t>(c)].z_bwd;
    for (auto& p : cb[static_cast<std::size_t>(c)].slice_trace)
      cf[static_cast<std::size_t>(c)].slice_trace.push_back(p);
  }

  RadialProfile Hb_main = cb[0].H, Hb_ref = cb[1].H;
  SolveConfig cfg_ref = cfg;
  cfg_ref.R = R_ref;
  ExteriorSolution main =
      finalize(std::move(cf[0]), cfg, std::move(Hb_main), std::move(Hf_main));
  main.linear_y_norm = lin_y;
  main.small_data_warning = lin_y > cfg.y_warn_threshold;
  ExteriorSolution ref = finalize(std::move(cf[1]), cfg_ref, std::move(Hb_ref), std::move(Hf_ref));
  ref.R = R_ref;
  return {std::move(main), std::move(ref)};
}

ExteriorSolution fd_oracle_solve(const RadialData& d, const Nonlinearity& F, SolveConfig cfg) {
  cfg.validate();
  if (cfg.dt > cfg.step + 1e-12)
    throw std::domain_error("fd_oracle_solve: CFL requires dt <= step");
  if (d.grid != cfg.rgrid()) throw std::domain_error("fd_oracle_solve: data grid mismatch");

  const RadialGrid rg = cfg.rgrid();
  const std::size_t n = rg.size();
  const double h = rg.step, dt = cfg.dt;
  const auto nsteps = cfg.steps_per_direction();
  const auto snap_every = static_cast<std::size_t>(std::llround(cfg.snapshot_stride_time / dt));

  ExteriorSolution sol;
  sol.cfg = cfg;
  sol.R = cfg.R;
  sol.rgrid = rg;
  sol.duhamel_backward = RadialProfile(cfg.solver_sgrid());
  sol.duhamel_forward = RadialProfile(cfg.solver_sgrid());

  auto snapshot_from = [&](double t, const std::vector<double>& v,
                           const std::vector<double>& vt) {
    Snapshot s;
    s.t = t;
    s.first_active = first_active_index(rg, cfg.R, std::abs(t));
    s.u.assign(n, 0.0);
    s.ut.assign(n, 0.0);
    s.ur.assign(n, 0.0);
    for (std::size_t i = s.first_active; i < n; ++i) {
      const double r = rg.node(i);
      s.u[i] = v[i] / (r * r);
      s.ut[i] = vt[i] / (r * r);
    }
    for (std::size_t i = s.first_active; i < n; ++i) {
      double du;
      if (i == 0)
        du = (s.u[1] - s.u[0]) / h;
      else if (i == n - 1)
        du = (s.u[n - 1] - s.u[n - 2]) / h;
      else if (i == s.first_active)
        du = (s.u[i + 1] - s.u[i]) / h;
      else
        du = (s.u[i + 1] - s.u[i - 1]) / (2.0 * h);
      s.ur[i] = du;
    }
    return s;
  };

  auto rhs = [&](double t, const std::vector<double>& v, std::vector<double>& out) {
    for (std::size_t i = 0; i < n; ++i) {
      const double r = rg.node(i);
      const double vm = (i == 0) ? 0.0 : v[i - 1];  // v(0) = 0 at the axis
      const double vp = (i == n - 1) ? v[i] : v[i + 1];
      const double vrr = (vp - 2.0 * v[i] + vm) / (h * h);
      const double u = v[i] / (r * r);
      const double w = mask_weight(cfg, cfg.R, r, std::abs(t));
      out[i] = vrr - 2.0 * v[i] / (r * r) + w * r * r * F(t, r, u);
    }
  };

  auto march_fd = [&](int dir) {
    std::vector<double> v(n), vt0(n), acc(n), v_prev(n), v_next(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = rg.node(i);
      v[i] = d.u0[i] * r * r;
      vt0[i] = d.u1[i] * r * r;
    }
    const double sdt = dir * dt;
    rhs(0.0, v, acc);
    for (std::size_t i = 0; i < n; ++i) v_next[i] = v[i] + sdt * vt0[i] + 0.5 * sdt * sdt * acc[i];
    v_prev = v;
    v = v_next;

    for (std::size_t m = 1; m <= nsteps; ++m) {
      const double t = dir * static_cast<double>(m) * dt;
      // outgoing edge: v_t + v_r = 0, first-order upwind
      v[n - 1] = v_prev[n - 1] - std::abs(sdt) / h * (v_prev[n - 1] - v_prev[n - 2]);

      if (m % snap_every == 0 || m == nsteps) {
        // centered velocity needs v at t + dt; compute it first
        rhs(t, v, acc);
        for (std::size_t i = 0; i + 1 < n; ++i)
          v_next[i] = 2.0 * v[i] - v_prev[i] + sdt * sdt * acc[i];
        v_next[n - 1] = v[n - 1] - std::abs(sdt) / h * (v[n - 1] - v[n - 2]);
        std::vector<double> vt(n);
        for (std::size_t i = 0; i < n; ++i) vt[i] = (v_next[i] - v_prev[i]) / (2.0 * sdt);
        if (m % snap_every == 0) sol.snaps.push_back(snapshot_from(t, v, vt));
        if (m == nsteps) break;
        v_prev = v;
        v = v_next;
      } else {
        rhs(t, v, acc);
        for (std::size_t i = 0; i + 1 < n; ++i)
          v_next[i] = 2.0 * v[i] - v_prev[i] + sdt * sdt * acc[i];
        v_next[n - 1] = 0.0;  // overwritten by the edge update next step
        std::swap(v_prev, v);
        std::swap(v, v_next);
      }
      for (double x : v)
        if (!std::isfinite(x)) throw SolverDivergenceError("fd_oracle_solve: blow-up");
    }
  };

  {
    Snapshot s0;
    s0.t = 0.0;
    s0.first_active = first_active_index(rg, cfg.R, 0.0);
    s0.u.assign(n, 0.0);
    s0.ut.assign(n, 0.0);
    s0.ur.assign(n, 0.0);
    for (std::size_t i = s0.first_active; i < n; ++i) {
      s0.u[i] = d.u0[i];
      s0.ut[i] = d.u1[i];
      s0.ur[i] = d.u0_prime(i);
    }
    sol.snaps.push_back(std::move(s0));
  }
  march_fd(+1);
  march_fd(-1);
  std::sort(sol.snaps.begin(), sol.snaps.end(),
            [](const Snapshot& a, const Snapshot& b) { return a.t < b.t; });
  return sol;
}

ExteriorSolution fd_oracle_solve(const RadialData& d, const Nonlinearity& F, double R, double T,
                                 double dt) {
  SolveConfig cfg;
  cfg.R = R;
  cfg.T = T;
  cfg.dt = dt;
  cfg.step = d.grid.step;
  cfg.r_max = d.grid.r_max;
  return fd_oracle_solve(d, F, cfg);
}

double exterior_energy(const ExteriorSolution& sol, double t) {
  const Snapshot& s = sol.at_time(t);
  const RadialGrid& rg = sol.rgrid;
  const std::size_t n = rg.size();
  const double edge = sol.R + std::abs(t);

  auto integrand = [&](std::size_t i) {
    const double rho = rg.node(i);
    return (s.ur[i] * s.ur[i] + s.ut[i] * s.ut[i]) * rho * rho * rho * rho;
  };

  double acc = 0.0;
  for (std::size_t i = std::max<std::size_t>(s.first_active, 1) - 1; i + 1 < n; ++i) {
    const double x0 = rg.node(i), x1 = rg.node(i + 1);
    if (x1 <= edge) continue;
    if (i < s.first_active) {
      // partial cell between the cone boundary and the first active node
      acc += (x1 - std::max(edge, x0)) * integrand(i + 1);
      continue;
    }
    acc += 0.5 * rg.step * (integrand(i) + integrand(i + 1));
  }
  if (sol.tail_alpha.has_value() && sol.tail_beta.has_value()) {
    const double a = *sol.tail_alpha;
    const double cu = *sol.tail_beta + a * t;
    const double rmax = rg.node(n - 1);
    acc += 3.0 * cu * cu / (rmax * rmax * rmax) + a * a / rmax;
  }
  return kSigma4 * std::max(0.0, acc);
}

double y_norm_tail(const ExteriorSolution& sol, double r) {
  if (r < sol.R - 1e-12) throw std::domain_error("y_norm_tail: r must be >= R");
  const RadialGrid& rg = sol.rgrid;
  const std::size_t n = rg.size();
  std::vector<double> ts, inner;
  for (const auto& s : sol.snaps) {
    const double edge = r + std::abs(s.t);
    double acc = 0.0;
    for (std::size_t i = std::max(s.first_active, first_active_index(rg, r, std::abs(s.t)));
         i + 1 < n; ++i) {
      const double r0 = rg.node(i), r1 = rg.node(i + 1);
      if (r1 <= edge) continue;
      const double a = std::pow(std::abs(s.u[i]), 14.0 / 3.0) * r0 * r0 * r0 * r0;
      const double b = std::pow(std::abs(s.u[i + 1]), 14.0 / 3.0) * r1 * r1 * r1 * r1;
      acc += 0.5 * rg.step * (a + b);
    }
    if (sol.tail_alpha.has_value() && sol.tail_beta.has_value()) {
      const double cu = std::abs(*sol.tail_beta + *sol.tail_alpha * s.t);
      const double rmax = rg.node(n - 1);
      acc += std::pow(cu, 14.0 / 3.0) * std::pow(rmax, -9.0) / 9.0;
    }
    ts.push_back(s.t);
    inner.push_back(std::pow(kSigma4 * acc, 0.5));  // ||u||_{14/3}^{7/3} = (sigma4 I)^{1/2}
  }
  double acc_t = 0.0;
  for (std::size_t j = 0; j + 1 < ts.size(); ++j)
    acc_t += 0.5 * (ts[j + 1] - ts[j]) * (inner[j] + inner[j + 1]);
  return std::pow(acc_t, 3.0 / 7.0);
}

ExteriorSolution make_span_solution(double a, double b, double R, double T,
                                    const SolveConfig& cfg_in) {
  SolveConfig cfg = cfg_in;
  cfg.R = R;
  cfg.T = T;
  cfg.validate();
  const RadialGrid rg = cfg.rgrid();
  const std::size_t n = rg.size();

  ExteriorSolution sol;
  sol.cfg = cfg;
  sol.R = R;
  sol.rgrid = rg;
  sol.duhamel_backward = RadialProfile(cfg.solver_sgrid());
  sol.duhamel_forward = RadialProfile(cfg.solver_sgrid());
  sol.tail_alpha = a;
  sol.tail_beta = b;

  for (double t = -T; t <= T + 1e-12; t += cfg.snapshot_stride_time) {
    Snapshot s;
    s.t = t;
    s.first_active = first_active_index(rg, R, std::abs(t));
    s.u.assign(n, 0.0);
    s.ut.assign(n, 0.0);
    s.ur.assign(n, 0.0);
    for (std::size_t i = s.first_active; i < n; ++i) {
      const double r = rg.node(i);
      const double r3 = r * r * r;
      s.u[i] = (a * t + b) / r3;
      s.ut[i] = a / r3;
      s.ur[i] = -3.0 * (a * t + b) / (r3 * r);
    }
    sol.snaps.push_back(std::move(s));
  }
  return sol;
}

}  // namespace nonrad
