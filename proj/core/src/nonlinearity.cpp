#include "nonrad/nonlinearity.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace nonrad {

namespace {
double power_law(double u) { return std::pow(std::abs(u), 4.0 / 3.0) * u; }
}  // namespace

Nonlinearity Nonlinearity::focusing() {
  Nonlinearity F;
  F.kind = Kind::focusing;
  F.gamma = 1.0;
  F.as_symmetric = true;
  F.eval = [](double, double, double u) { return power_law(u); };
  return F;
}

Nonlinearity Nonlinearity::defocusing() {
  Nonlinearity F;
  F.kind = Kind::defocusing;
  F.gamma = 1.0;
  F.as_symmetric = true;
  F.eval = [](double, double, double u) { return -power_law(u); };
  return F;
}

Nonlinearity Nonlinearity::custom(std::function<double(double, double, double)> fn, double gamma,
                                  bool as_symmetric) {
  Nonlinearity F;
  F.kind = Kind::custom;
  F.gamma = gamma;
  F.as_symmetric = as_symmetric;
  F.eval = std::move(fn);
  F.validate();
  return F;
}

void Nonlinearity::validate(unsigned seed, int probes) const {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> logu(-6.0, 2.0), sgn(-1.0, 1.0);
  std::uniform_real_distribution<double> tdist(-8.0, 8.0), rdist(0.1, 64.0);
  for (int k = 0; k < probes; ++k) {
    const double u = std::copysign(std::pow(10.0, logu(rng)), sgn(rng));
    const double t = tdist(rng), r = rdist(rng);
    const double fu = eval(t, r, u);
    const double bound = gamma * std::pow(std::abs(u), 7.0 / 3.0);
    if (std::abs(fu) > bound * (1.0 + 1e-12) + 1e-300)
      throw std::domain_error("Nonlinearity: growth bound gamma |u|^{7/3} violated");
    if (as_symmetric) {
      if (std::abs(eval(-t, r, u) - fu) > 1e-12 * (std::abs(fu) + 1e-300))
        throw std::domain_error("Nonlinearity: (AS) time symmetry violated");
      if (std::abs(eval(t, r, -u) + fu) > 1e-12 * (std::abs(fu) + 1e-300))
        throw std::domain_error("Nonlinearity: (AS) oddness in u violated");
    }
  }
}

}  // namespace nonrad
