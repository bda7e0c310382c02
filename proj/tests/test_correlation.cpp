#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ringqed/correlation.hpp"
#include "ringqed/errors.hpp"
#include "ringqed/experiment.hpp"
#include "ringqed/fitting.hpp"
#include "ringqed/oracles.hpp"

using namespace ringqed;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<double> grid(double t1, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) t[k] = t1 * double(k) / double(n - 1);
  return t;
}

struct Resonant {
  SystemParams p;
  SteadyOutcome ss;
  LindbladGenerator gen;
};

Resonant resonant_run(double J, double phi) {
  SystemParams p;
  p.J = J;
  p.phi = phi;
  SteadyOutcome ss = full_steady_state(p, 3, false);
  const auto s = ss.rho.layout();
  return {p, std::move(ss), LindbladGenerator(full_hamiltonian(p, s), collapse_operators(p, s))};
}

}  // namespace

TEST_SUITE("correlation") {

TEST_CASE("coherent light is uncorrelated") {
  const std::size_t n_max = 6;
  const SpaceLayout l({{Factor::modeCW, n_max + 1}, {Factor::modeCCW, n_max + 1}});
  const ComplexMatrix a = l.lift(Factor::modeCW, annihilation(n_max));
  const ComplexMatrix b = l.lift(Factor::modeCCW, annihilation(n_max));
  const Operator h(l, -0.2 * a.adjoint() * a + 0.05 * (a + a.adjoint()));
  const JumpList j{{Operator(l, a), 1.0}, {Operator(l, b), 1.0}};
  const DensityMatrix rho = steady_state(h, j);
  const G2Series g = g2_numeric(h, j, rho, Mode::CW, grid(5.0, 51));
  CHECK(g.tau.front() == 0.0);
  for (double v : g.values) CHECK(std::abs(v - 1.0) <= 1e-6);
  CHECK(std::abs(g2_zero(rho, Mode::CW) - 1.0) <= 1e-6);
  CHECK_THROWS_AS(g2_numeric(h, j, rho, Mode::CCW, grid(1.0, 5)), UnmeasurableModeError);
  CHECK_THROWS_AS(g2_numeric(h, j, rho, Mode::CW, {0.5, 1.0}), ValidationError);
}

TEST_CASE("default delay grid") {
  const auto t = default_tau_grid();
  CHECK(t.size() == 400);
  CHECK(t.front() == 0.0);
  CHECK(t.back() == doctest::Approx(12.0));
}

TEST_CASE("bunching and oscillation at phi = pi, J = 2") {
  const Resonant r = resonant_run(2.0, pi);
  const auto tau = grid(20.0, 801);
  const G2Series cw = g2_numeric(r.gen, r.ss.rho, Mode::CW, tau);
  const G2Series ccw = g2_numeric(r.gen, r.ss.rho, Mode::CCW, tau);
  CHECK(std::abs(cw.values.front() - 65.0) <= 0.1 * 65.0);
  CHECK(std::abs(g2_zero(r.ss.rho, Mode::CW) - cw.values.front()) <= 1e-6 * cw.values.front());
  double worst = 0.0;
  for (std::size_t k = 0; k < tau.size(); ++k) {
    worst = std::max(worst, std::abs(cw.values[k] - ccw.values[k]));
    CHECK(cw.values[k] >= 0.0);
  }
  CHECK(worst <= 1e-8);
  CHECK(std::abs(cw.values.back() - 1.0) <= 0.02);
  const TwoTermFit fit = fit_two_term(std::span(cw.tau).first(400), std::span(cw.values).first(400), 2.0 * r.p.J);
  CHECK(std::abs(fit.omega - 2.0 * r.p.J) <= 0.02 * 2.0 * r.p.J);
  // Peaks away from the fast monotone decay.
  const double spacing = mean_peak_spacing(std::span(cw.tau).subspan(160, 320), std::span(cw.values).subspan(160, 320));
  CHECK(std::abs(spacing - pi / r.p.J) <= tau[1]);
}

}  // TEST_SUITE

TEST_SUITE("correlation_slow") {

TEST_CASE("agreement with the resonant closed form") {
  const auto tau = grid(10.0, 401);
  for (double J : {1.0, 2.0, 5.0}) {
    for (double phi : {pi / 2.0, 3.0 * pi / 4.0, pi}) {
      CAPTURE(J);
      CAPTURE(phi);
      const Resonant r = resonant_run(J, phi);
      const G2Series g = g2_numeric(r.gen, r.ss.rho, Mode::CW, tau);
      double worst = 0.0;
      for (std::size_t k = 0; k < tau.size(); ++k) {
        const double o = oracle::g2_resonant(r.p, tau[k]);
        // Scaled by the uncorrelated level where the oracle dips towards zero.
        worst = std::max(worst, std::abs(g.values[k] - o) / std::max(o, 1.0));
      }
      CHECK(worst <= 0.1);
    }
  }
}

}  // TEST_SUITE
