#include <cmath>
#include <random>

#include "doctest.h"
#include "nonrad/freewave.hpp"
#include "nonrad/profile.hpp"

using namespace nonrad;

namespace {
const GridSpec kGrid(-16.0, 16.0, 1.0 / 128);
const RadialGrid kRGrid(32.0, 1.0 / 128);
}  // namespace

TEST_SUITE("evolve_free") {
  TEST_CASE("odd integrand symmetries of the box") {
    const RadialProfile box = indicator_profile(kGrid, -1.0, 1.0);
    CHECK(evolve_free(box, 2.0, 0.0) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(evolve_free(box, 0.5, 0.0) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK_THROWS_AS(evolve_free(box, -1.0, 0.0), std::domain_error);
  }

  TEST_CASE("s box at (r,t) = (2,0): (1/8) int_{-1}^{1} s^2 ds = 1/12") {
    const RadialProfile sbox = truncated_profile(kGrid, -1.0, 1.0, [](double s) { return s; });
    CHECK(evolve_free(sbox, 2.0, 0.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
  }

  TEST_CASE("satisfies the radial wave equation away from jumps") {
    const RadialProfile g = sampled_profile(kGrid, [](double s) { return std::exp(-s * s); });
    const FreeWave w(g);
    const double h = 1.0 / 256;
    for (double r : {1.0, 2.5}) {
      for (double t : {0.0, 0.8}) {
        const double utt =
            (w.u(r, t + h) - 2.0 * w.u(r, t) + w.u(r, t - h)) / (h * h);
        const double urr =
            (w.u(r + h, t) - 2.0 * w.u(r, t) + w.u(r - h, t)) / (h * h);
        const double ur = (w.u(r + h, t) - w.u(r - h, t)) / (2.0 * h);
        CHECK(std::abs(utt - urr - 4.0 / r * ur) < 2e-3);
      }
    }
  }

  TEST_CASE("analytic ut and ur match finite differences") {
    const RadialProfile g =
        sampled_profile(kGrid, [](double s) { return std::exp(-(s - 1.0) * (s - 1.0)); });
    const FreeWave w(g);
    const double h = 1.0 / 1024;
    for (double r : {0.7, 2.2}) {
      for (double t : {-0.9, 0.4}) {
        CHECK(w.ut(r, t) ==
              doctest::Approx((w.u(r, t + h) - w.u(r, t - h)) / (2 * h)).epsilon(1e-4));
        CHECK(w.ur(r, t) ==
              doctest::Approx((w.u(r + h, t) - w.u(r - h, t)) / (2 * h)).epsilon(1e-4));
      }
    }
  }
}

TEST_SUITE("data_from_profile") {
  TEST_CASE("even profile gives u0 = 0") {
    const RadialProfile g = sampled_profile(kGrid, [](double s) { return std::exp(-s * s); });
    const RadialData d = data_from_profile(g, kRGrid);
    for (double v : d.u0) CHECK(std::abs(v) < 1e-9);
  }

  TEST_CASE("unit box: u1 = 0 inside, -2 r^{-3} outside, -1/4 at r = 2") {
    const RadialProfile box = indicator_profile(kGrid, -1.0, 1.0);
    const RadialData d = data_from_profile(box, kRGrid);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double r = kRGrid.node(i);
      if (r < 1.0 - 1e-9) CHECK(std::abs(d.u1[i]) < 1e-13);
      if (r > 1.0 + 2.0 * kRGrid.step)
        CHECK(d.u1[i] == doctest::Approx(-2.0 * std::pow(r, -3.0)).epsilon(1e-12));
    }
    const auto i2 = static_cast<std::size_t>(2.0 / kRGrid.step) - 1;
    CHECK(kRGrid.node(i2) == doctest::Approx(2.0));
    CHECK(d.u1[i2] == doctest::Approx(-0.25).epsilon(1e-12));
  }

  TEST_CASE("unit box energy: ||(u0,u1)||^2 = 4 sigma4") {
    const RadialProfile box = indicator_profile(kGrid, -1.0, 1.0);
    const RadialData d = data_from_profile(box, kRGrid);
    const double e = energy_norm(d, 0.0);
    CHECK(e * e == doctest::Approx(4.0 * kSigma4).epsilon(2e-3));
  }

  TEST_CASE("compact support forces the r^{-3} span outside") {
    // u0 = c1 r^{-3}, u1 = c2 r^{-3} with c1 = moment1, c2 = -moment0
    const RadialProfile g = sampled_profile(
        kGrid, [](double s) { return std::abs(s) < 2.0 ? std::exp(-s * s) * (1 + s) : 0.0; });
    const RadialData d = data_from_profile(g, kRGrid);
    const double c1 = moment1(g, -2.0, 2.0), c2 = -moment0(g, -2.0, 2.0);
    for (double r : {3.0, 5.0, 10.0}) {
      const auto i = static_cast<std::size_t>(std::llround(r / kRGrid.step)) - 1;
      CHECK(d.u0[i] == doctest::Approx(c1 * std::pow(r, -3.0)).epsilon(1e-10));
      CHECK(d.u1[i] == doctest::Approx(c2 * std::pow(r, -3.0)).epsilon(1e-10));
    }
    CHECK(d.tail_c0.value() == doctest::Approx(c1));
    CHECK(d.tail_c1.value() == doctest::Approx(c2));
  }
}

TEST_SUITE("profile_from_data") {
  TEST_CASE("roundtrip on a smooth bump converges at 2nd order") {
    auto err_at = [](double h) {
      const GridSpec g(-16.0, 16.0, h);
      const RadialGrid rg(16.0, h);
      const RadialProfile p =
          sampled_profile(g, [](double s) { return std::exp(-s * s / 4.0) * (1.0 + 0.5 * s); });
      const RadialProfile back = profile_from_data(data_from_profile(p, rg));
      double err = 0.0;
      for (std::size_t i = 0; i < back.size(); ++i)
        err = std::max(err, std::abs(back.values[i] - p.value_at(back.grid.node(i))));
      return err;
    };
    const double e1 = err_at(1.0 / 64), e2 = err_at(1.0 / 128);
    CHECK(e2 < 5e-5);
    CHECK(e1 / e2 >= 3.0);
  }

  TEST_CASE("the box roundtrips up to O(step) smearing at the jumps") {
    const RadialProfile box = indicator_profile(kGrid, -1.0, 1.0);
    const RadialProfile back = profile_from_data(data_from_profile(box, kRGrid));
    for (double s : {-1.5, -0.5, 0.0, 0.5, 1.5}) {
      CHECK(back.value_at(s) == doctest::Approx(box.value_at(s)).epsilon(5e-3));
    }
    // near the jump the recovered profile interpolates the two states
    CHECK(back.value_at(1.0) == doctest::Approx(0.5).epsilon(0.1));
  }

  TEST_CASE("data (0, f) recovers the even profile with edge normalization") {
    // f = -2 r^{-3} 1_{r>1} is the u1 of the unit box; the inversion must
    // return the box itself, constants fixed by decay at the outer edge
    const std::size_t n = kRGrid.size();
    std::vector<double> u0(n, 0.0), u1(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = kRGrid.node(i);
      u1[i] = r > 1.0 ? -2.0 * std::pow(r, -3.0) : (r == 1.0 ? -1.0 : 0.0);
    }
    const RadialData d(kRGrid, u0, u1);
    const RadialProfile back = profile_from_data(d);
    CHECK(back.value_at(0.0) == doctest::Approx(1.0).epsilon(2e-2));
    CHECK(back.value_at(0.5) == doctest::Approx(1.0).epsilon(2e-2));
    CHECK(back.value_at(3.0) == doctest::Approx(0.0).epsilon(1e-4));
  }
}

TEST_SUITE("source_profile") {
  TEST_CASE("zero source gives the zero profile") {
    const std::vector<double> f(kRGrid.size(), 0.0);
    const RadialProfile g = source_profile(f, kRGrid, kGrid);
    CHECK(l2_norm(g) == 0.0);
  }

  TEST_CASE("evolve_free(source_profile(f)) has data (0, f)") {
    std::vector<double> f(kRGrid.size());
    for (std::size_t i = 0; i < kRGrid.size(); ++i) {
      const double r = kRGrid.node(i);
      f[i] = std::exp(-(r - 2.0) * (r - 2.0));
    }
    const GridSpec wide(-32.0, 32.0, 1.0 / 128);
    const RadialProfile g = source_profile(f, kRGrid, wide);
    const FreeWave w(g);
    for (double r : {0.5, 1.5, 2.0, 3.0, 6.0}) {
      const auto i = static_cast<std::size_t>(std::llround(r / kRGrid.step)) - 1;
      CHECK(w.u(r, 0.0) == doctest::Approx(0.0).epsilon(1e-8));
      CHECK(w.ut(r, 0.0) == doctest::Approx(f[i]).epsilon(1e-3));
    }
  }

  TEST_CASE("f = r^{-3} beyond 1: profile is -1/2 inside s<1, 0 outside") {
    // the isometry pins this: || (0,f) ||^2 = sigma4 = 2 sigma4 ||G||^2
    // with ||G||^2 = 1/2
    std::vector<double> f(kRGrid.size(), 0.0);
    for (std::size_t i = 0; i < kRGrid.size(); ++i) {
      const double r = kRGrid.node(i);
      f[i] = r > 1.0 ? std::pow(r, -3.0) : (r == 1.0 ? 0.5 : 0.0);
    }
    const RadialProfile g = source_profile(f, kRGrid, kGrid);
    CHECK(g.value_at(0.0) == doctest::Approx(-0.5).epsilon(2e-2));
    CHECK(g.value_at(0.5) == doctest::Approx(-0.5).epsilon(2e-2));
    CHECK(g.value_at(2.0) == doctest::Approx(0.0).epsilon(1e-3));
    CHECK(2.0 * kSigma4 * l2_norm(g) * l2_norm(g) == doctest::Approx(kSigma4).epsilon(2e-2));
  }
}

TEST_SUITE("energy and isometry") {
  TEST_CASE("closed-form exterior norms") {
    const std::size_t n = kRGrid.size();
    std::vector<double> p3(n), zero(n, 0.0), p3p(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = kRGrid.node(i);
      p3[i] = std::pow(r, -3.0);
      p3p[i] = -3.0 * std::pow(r, -4.0);
    }
    RadialData dh(kRGrid, p3, zero);
    dh.u0p = p3p;
    dh.tail_c0 = 1.0;
    dh.tail_c1 = 0.0;
    CHECK(energy_norm(dh, 1.0) == doctest::Approx(std::sqrt(3.0 * kSigma4)).epsilon(1e-4));

    RadialData dl(kRGrid, zero, p3);
    dl.u0p.assign(n, 0.0);
    dl.tail_c0 = 0.0;
    dl.tail_c1 = 1.0;
    CHECK(energy_norm(dl, 1.0) == doctest::Approx(std::sqrt(kSigma4)).epsilon(1e-4));

    RadialData dz(kRGrid, zero, zero);
    CHECK(energy_norm(dz, 0.0) == 0.0);
  }

  TEST_CASE("isometry defect small for smooth profiles, exactly 0 for zero") {
    CHECK(isometry_defect(RadialProfile(kGrid), kRGrid) == 0.0);
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> c(-2.0, 2.0);
    for (int trial = 0; trial < 5; ++trial) {
      const double a = c(rng), b = c(rng);
      const RadialProfile g = sampled_profile(kGrid, [&](double s) {
        return a * std::exp(-s * s / 4.0) + b * s * std::exp(-s * s / 6.0);
      });
      if (l2_norm(g) < 1e-6) continue;
      CHECK(isometry_defect(g, kRGrid) < 1e-4);
    }
  }

  TEST_CASE("box profile: both sides of the isometry equal 4 sigma4") {
    const RadialProfile box = indicator_profile(kGrid, -1.0, 1.0);
    CHECK(isometry_defect(box, kRGrid) < 5e-3);
  }
}
