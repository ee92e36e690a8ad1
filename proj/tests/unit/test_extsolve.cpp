#include <cmath>

#include "doctest.h"
#include "nonrad/errors.hpp"
#include "nonrad/extsolve.hpp"
#include "nonrad/freewave.hpp"

using namespace nonrad;

namespace {

SolveConfig small_cfg() {
  SolveConfig cfg;
  cfg.R = 1.0;
  cfg.T = 2.0;
  cfg.dt = 1.0 / 128;  // also CFL-safe for the leapfrog oracle
  cfg.step = 1.0 / 64;
  cfg.r_max = 24.0;
  cfg.snapshot_stride_time = 0.25;
  return cfg;
}

RadialProfile small_bump(const GridSpec& g, double amp = 0.05) {
  return sampled_profile(g, [amp](double s) { return amp * std::exp(-s * s / 4.0); });
}

}  // namespace

TEST_SUITE("nonlinearity") {
  TEST_CASE("builtin kinds satisfy the growth bound and (AS)") {
    CHECK_NOTHROW(Nonlinearity::focusing().validate());
    CHECK_NOTHROW(Nonlinearity::defocusing().validate());
    const double u = -0.7;
    CHECK(Nonlinearity::focusing()(0.0, 1.0, u) ==
          doctest::Approx(-std::pow(0.7, 7.0 / 3.0)));
  }

  TEST_CASE("violating the declared bound is rejected") {
    CHECK_THROWS_AS(
        Nonlinearity::custom([](double, double, double u) { return u; }, 1.0, false),
        std::domain_error);
    CHECK_THROWS_AS(Nonlinearity::custom(
                        [](double t, double, double u) {
                          return (1.0 + 0.5 * std::tanh(t)) * std::pow(std::abs(u), 4.0 / 3.0) * u;
                        },
                        2.0, true),  // time-dependent, so (AS) must fail
                    std::domain_error);
  }
}

TEST_SUITE("solve_exterior") {
  TEST_CASE("zero nonlinearity reproduces the free wave") {
    const SolveConfig cfg = small_cfg();
    const GridSpec sg = cfg.solver_sgrid();
    const RadialProfile G = small_bump(sg, 0.3);
    const Nonlinearity off = Nonlinearity::custom(
        [](double, double, double) { return 0.0; }, 0.0, true);
    const ExteriorSolution sol = solve_exterior_profile(G, off, cfg);
    const FreeWave w(G);
    double err = 0.0;
    for (const auto& s : sol.snaps)
      for (std::size_t i = s.first_active; i < s.u.size(); ++i)
        err = std::max(err, std::abs(s.u[i] - w.u(sol.rgrid.node(i), s.t)));
    CHECK(err < 1e-10);
    CHECK(l2_norm(sol.duhamel_forward) == 0.0);
    CHECK(l2_norm(sol.duhamel_backward) == 0.0);
  }

  TEST_CASE("t = 0 snapshot matches the supplied data") {
    const SolveConfig cfg = small_cfg();
    const RadialGrid rg = cfg.rgrid();
    const GridSpec sg(-24.0, 24.0, cfg.step);
    const RadialData d = data_from_profile(small_bump(sg), rg);
    const ExteriorSolution sol = solve_exterior(d, Nonlinearity::focusing(), cfg);
    const Snapshot& s0 = sol.at_time(0.0);
    double err = 0.0;
    for (std::size_t i = s0.first_active; i < s0.u.size(); ++i) {
      err = std::max(err, std::abs(s0.u[i] - d.u0[i]));
      err = std::max(err, std::abs(s0.ut[i] - d.u1[i]));
    }
    CHECK(err < 1e-6);
  }

  TEST_CASE("ground state stays static under the focusing flow") {
    SolveConfig cfg = small_cfg();
    cfg.r_max = 48.0;
    const RadialGrid rg = cfg.rgrid();
    std::vector<double> w(rg.size()), zero(rg.size(), 0.0);
    for (std::size_t i = 0; i < rg.size(); ++i)
      w[i] = std::pow(1.0 + rg.node(i) * rg.node(i) / 15.0, -1.5);
    const RadialData d(rg, w, zero);
    const ExteriorSolution sol = solve_exterior(d, Nonlinearity::focusing(), cfg);
    double err = 0.0;
    for (const auto& s : sol.snaps)
      for (std::size_t i = s.first_active; i < s.u.size(); ++i)
        err = std::max(err, std::abs(s.u[i] - w[i]));
    CHECK(err < 2e-3);
  }

  TEST_CASE("agrees with the finite-difference oracle on small data") {
    const SolveConfig cfg = small_cfg();
    const RadialGrid rg = cfg.rgrid();
    const GridSpec sg(-24.0, 24.0, cfg.step);
    const RadialData d = data_from_profile(small_bump(sg), rg);
    const ExteriorSolution a = solve_exterior(d, Nonlinearity::focusing(), cfg);
    const ExteriorSolution b = fd_oracle_solve(d, Nonlinearity::focusing(), cfg);
    double err = 0.0;
    for (const auto& sa : a.snaps) {
      if (!b.has_time(sa.t)) continue;
      const Snapshot& sb = b.at_time(sa.t);
      for (std::size_t i = std::max(sa.first_active, sb.first_active); i < sa.u.size(); ++i) {
        if (rg.node(i) > 12.0) break;
        err = std::max(err, std::abs(sa.u[i] - sb.u[i]));
      }
    }
    CHECK(err < 5e-3);
  }

  TEST_CASE("finite speed: interior data changes with equal moments are invisible") {
    SolveConfig cfg = small_cfg();
    const GridSpec sg = cfg.solver_sgrid();
    RadialProfile G1 = small_bump(sg, 0.2);
    // add a zero-moment wiggle strictly inside |s| < R = 1
    RadialProfile wiggle =
        truncated_profile(sg, -1.0, 1.0, [](double s) { return 0.05 * std::cos(M_PI * s); });
    // cos(pi s) on [-1,1] has zero integral; s cos(pi s) is odd, zero as well
    RadialProfile G2 = G1 + wiggle;
    const Nonlinearity F = Nonlinearity::focusing();
    const ExteriorSolution s1 = solve_exterior_profile(G1, F, cfg);
    const ExteriorSolution s2 = solve_exterior_profile(G2, F, cfg);
    double err = 0.0;
    for (const auto& sa : s1.snaps) {
      const Snapshot& sb = s2.at_time(sa.t);
      for (std::size_t i = sa.first_active; i < sa.u.size(); ++i)
        err = std::max(err, std::abs(sa.u[i] - sb.u[i]));
    }
    CHECK(err < 1e-6);
  }

  TEST_CASE("small-data bound: ||chi_r u||_Y <= 2 ||chi_r u_L||_Y") {
    const SolveConfig cfg = small_cfg();
    const GridSpec sg = cfg.solver_sgrid();
    const RadialProfile G = small_bump(sg, 0.2);
    const Nonlinearity off =
        Nonlinearity::custom([](double, double, double) { return 0.0; }, 0.0, true);
    const ExteriorSolution nl = solve_exterior_profile(G, Nonlinearity::focusing(), cfg);
    const ExteriorSolution lin = solve_exterior_profile(G, off, cfg);
    for (double r : {1.0, 2.0, 4.0}) {
      CHECK(y_norm_tail(nl, r) <= 2.0 * y_norm_tail(lin, r));
    }
  }

  TEST_CASE("large data raises the divergence error") {
    SolveConfig cfg = small_cfg();
    cfg.T = 4.0;
    const GridSpec sg = cfg.solver_sgrid();
    const RadialProfile G = small_bump(sg, 60.0);
    CHECK_THROWS_AS(solve_exterior_profile(G, Nonlinearity::focusing(), cfg),
                    SolverDivergenceError);
  }

  TEST_CASE("smooth mask option masks a transition band") {
    SolveConfig cfg = small_cfg();
    cfg.mask = SolveConfig::Mask::smooth;
    cfg.mask_width = 0.5;
    const GridSpec sg = cfg.solver_sgrid();
    const ExteriorSolution sol =
        solve_exterior_profile(small_bump(sg, 0.2), Nonlinearity::focusing(), cfg);
    CHECK(sol.snaps.size() > 3);
  }
}

TEST_SUITE("fd oracle") {
  TEST_CASE("CFL violation is a domain error") {
    const SolveConfig cfg = small_cfg();
    const RadialGrid rg = cfg.rgrid();
    const RadialData d(rg, std::vector<double>(rg.size(), 0.0),
                       std::vector<double>(rg.size(), 0.0));
    CHECK_THROWS_AS(fd_oracle_solve(d, Nonlinearity::focusing(), cfg.R, cfg.T, cfg.step * 2),
                    std::domain_error);
  }

  TEST_CASE("zero data stays zero") {
    const SolveConfig cfg = small_cfg();
    const RadialGrid rg = cfg.rgrid();
    const RadialData d(rg, std::vector<double>(rg.size(), 0.0),
                       std::vector<double>(rg.size(), 0.0));
    const ExteriorSolution sol = fd_oracle_solve(d, Nonlinearity::focusing(), cfg);
    for (const auto& s : sol.snaps)
      for (double v : s.u) CHECK(v == 0.0);
  }

  TEST_CASE("linear case matches evolve_free at 2nd order") {
    auto err_at = [](double step) {
      SolveConfig cfg = small_cfg();
      cfg.step = step;
      cfg.dt = step / 2.0;
      const RadialGrid rg = cfg.rgrid();
      const GridSpec sg(-24.0, 24.0, step);
      const RadialProfile G = small_bump(sg, 1.0);
      const RadialData d = data_from_profile(G, rg);
      const Nonlinearity off =
          Nonlinearity::custom([](double, double, double) { return 0.0; }, 0.0, true);
      const ExteriorSolution sol = fd_oracle_solve(d, off, cfg);
      const FreeWave w(G);
      double err = 0.0;
      for (const auto& s : sol.snaps)
        for (std::size_t i = s.first_active; i < s.u.size(); ++i) {
          if (rg.node(i) > 12.0) break;
          err = std::max(err, std::abs(s.u[i] - w.u(rg.node(i), s.t)));
        }
      return err;
    };
    const double e1 = err_at(1.0 / 32), e2 = err_at(1.0 / 64);
    CHECK(e1 / e2 > 3.0);
  }
}

TEST_SUITE("exterior functionals") {
  TEST_CASE("span-field energies against the closed form") {
    SolveConfig cfg;
    cfg.T = 4.0;
    const ExteriorSolution st = make_span_solution(0.0, 1.0, 0.0, 4.0, cfg);
    CHECK(exterior_energy(st, 2.0) == doctest::Approx(3.0 * kSigma4 / 8.0).epsilon(1e-4));
    const ExteriorSolution tr = make_span_solution(1.0, 0.0, 0.0, 4.0, cfg);
    CHECK(exterior_energy(tr, 4.0) == doctest::Approx(kSigma4).epsilon(1e-4));
    const ExteriorSolution zero = make_span_solution(0.0, 0.0, 0.0, 4.0, cfg);
    CHECK(exterior_energy(zero, 2.0) == 0.0);
    CHECK_THROWS_AS(exterior_energy(st, 3.1416), std::domain_error);
  }

  TEST_CASE("y_norm_tail: closed-form anchor and monotonicity") {
    // u = r^{-3} on { r > 1 + |t| }, window [-1, 1]:
    // Y = ( (sigma4/9)^{1/2} * (4/7) * (1 - 2^{-7/2}) )^{3/7}
    SolveConfig cfg;
    cfg.R = 1.0;
    cfg.T = 1.0;
    cfg.dt = 1.0 / 64;
    cfg.snapshot_stride_time = 1.0 / 64;
    ExteriorSolution sol = make_span_solution(0.0, 1.0, 1.0, 1.0, cfg);
    const double want = std::pow(
        std::sqrt(kSigma4 / 9.0) * (4.0 / 7.0) * (1.0 - std::pow(2.0, -3.5)), 3.0 / 7.0);
    const double got = y_norm_tail(sol, 1.0);
    CHECK(got == doctest::Approx(want).epsilon(2e-3));

    const ExteriorSolution z = make_span_solution(0.0, 0.0, 0.0, 1.0, cfg);
    CHECK(y_norm_tail(z, 0.0) == 0.0);
    CHECK(y_norm_tail(sol, 2.0) <= y_norm_tail(sol, 1.0));
    CHECK(y_norm_tail(sol, 4.0) <= y_norm_tail(sol, 2.0));
  }
}
