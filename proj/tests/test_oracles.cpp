#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "ringqed/errors.hpp"
#include "ringqed/oracles.hpp"

using namespace ringqed;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

SystemParams params(double J, double phi, double delta) {
  SystemParams p;
  p.J = J;
  p.phi = phi;
  p.delta = delta;
  return p;
}

ComplexMatrix test_rho_ext() {
  ComplexMatrix r(2, 2);
  r << 0.7, Complex(0.2, 0.1), Complex(0.2, -0.1), 0.3;
  return r;
}

}  // namespace

TEST_SUITE("oracles") {

TEST_CASE("n0") {
  SystemParams p;
  CHECK(oracle::n0(p) == Approx(0.005).epsilon(1e-14));
  CHECK(oracle::omega_eff(p) == Approx(std::sqrt(2.0) * 0.05).epsilon(1e-14));
  p.delta = -5.0;
  CHECK(oracle::n0(p) == Approx(4.95049504950495e-05).epsilon(1e-13));
  double last = oracle::n0(params(0, 0, 0));
  for (double d : {1.0, 10.0, 100.0, 1e4}) {
    const double n = oracle::n0(params(0, 0, d));
    CHECK(n < last);
    last = n;
  }
  CHECK(last < 1e-9);
  SystemParams q;
  const double base = oracle::n0(q);
  q.Omega *= 2.0;
  CHECK(oracle::n0(q) == Approx(4.0 * base).epsilon(1e-14));
  q.kappa = 0.0;
  CHECK_THROWS_AS(oracle::n0(q), SingularityError);
}

TEST_CASE("steady photon number") {
  for (double phi : {0.0, 1.0, 2.5, pi}) CHECK(oracle::n_tot_steady(params(0, phi, 0)) == Approx(0.005).epsilon(1e-14));
  CHECK(oracle::n_tot_steady(params(5, pi, 0)) == Approx(0.005 / 401.0).epsilon(1e-13));
  CHECK(oracle::n_tot_steady(params(1, pi / 2, 0)) == Approx(0.002647058823529413).epsilon(1e-13));
  CHECK(oracle::n_tot_steady(params(5, 2.5, -3)) == Approx(2.3740267453340738e-05).epsilon(1e-13));
  const double phi = 1.3;
  const SystemParams big = params(1e6, phi, 0);
  CHECK(oracle::n_tot_steady(big) == Approx(oracle::n0(big) * std::pow(std::cos(phi / 2), 2)).epsilon(1e-10));
  const SystemParams any = params(1.7, 0.0, -0.4);
  CHECK(oracle::n_tot_steady(any) == oracle::n0(any));
  const SystemParams at_pi = params(1.7, pi, -0.4);
  CHECK(oracle::n_tot_steady(at_pi) ==
        Approx(oracle::n0(at_pi) / (1.0 + 4.0 * 1.7 * 1.7 / (0.16 + 0.25))).epsilon(1e-14));
}

TEST_CASE("resonant correlation") {
  CHECK(oracle::g2_resonant(params(5, pi, 0), 0.0) == Approx(401.0).epsilon(1e-14));
  CHECK(oracle::g2_resonant(params(2, pi, 0), 0.0) == Approx(65.0).epsilon(1e-14));
  CHECK(oracle::g2_closed(params(5, pi, 0), 0.0) == Approx(401.0).epsilon(1e-10));
  CHECK(oracle::g2_resonant(params(2, 3 * pi / 4, 0), 0.7) == Approx(1.2407855478724814).epsilon(1e-13));
  CHECK(oracle::g2_resonant(params(0.5, pi / 2, 0), 1.3) == Approx(1.0861725860438407).epsilon(1e-13));
  CHECK(oracle::g2_resonant(params(2, 1.0, 0), 80.0) == Approx(1.0).epsilon(1e-14));
  // Off resonance the undamped motional beat at 2J survives the photon decay.
  CHECK(oracle::g2_closed(params(2, 1.0, 0.5), 80.0) == Approx(oracle::g2_closed(params(2, 1.0, 0.5), 80.0 + pi / 2.0)).epsilon(1e-12));
  CHECK(oracle::g2_resonant(params(2, 0.0, 0), 0.0) == 1.0);
  CHECK(oracle::g2_closed(params(2, 0.0, 0.3), 0.0) == 1.0);
}

TEST_CASE("general-detuning correlation") {
  CHECK(oracle::g2_closed(params(2, pi / 2, 1.5), 0.0) == Approx(1.0907029478458055).epsilon(1e-10));
  CHECK(oracle::g2_closed(params(2, pi / 2, 1.5), 0.3) == Approx(0.8757524098812451).epsilon(1e-10));
  CHECK(oracle::g2_closed(params(2, pi / 2, 1.5), 0.7) == Approx(0.6506011590208794).epsilon(1e-10));
  CHECK(oracle::g2_closed(params(1, 2.0, -3.0), 0.5) == Approx(0.9904016060709464).epsilon(1e-10));
  CHECK(oracle::g2_closed(params(5, pi / 5, -5.0), 0.0) == Approx(1.0017199576037819).epsilon(1e-10));
}

TEST_CASE("general form reduces to the resonant form") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> J(0.1, 6.0), phi(0.2, 2 * pi - 0.2), tau(0.0, 12.0);
  for (int k = 0; k < 200; ++k) {
    const SystemParams p = params(J(rng), phi(rng), 0.0);
    const double t = tau(rng);
    const double a = oracle::g2_closed(p, t);
    const double b = oracle::g2_resonant(p, t);
    CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b)));
  }
}

TEST_CASE("rates") {
  const oracle::RateSet zero = oracle::rates(params(3, 0.0, 1.0));
  CHECK(zero.J_plus == 0.0);
  CHECK(zero.J_minus == 0.0);
  CHECK(zero.Gamma_plus == 0.0);
  CHECK(zero.Gamma_minus == 0.0);

  const oracle::RateSet r = oracle::rates(params(5, pi, 0));
  CHECK(r.Gamma == Approx(2.4937655860349125e-05).epsilon(1e-12));
  CHECK(r.Gamma_plus == Approx(r.Gamma_minus).epsilon(1e-14));
  CHECK(r.J_plus == Approx(-0.00012468827930174563).epsilon(1e-12));
  CHECK(r.J_prime == Approx(5.000124688279302).epsilon(1e-14));

  const oracle::RateSet s = oracle::rates(params(5, pi / 5, -5));
  CHECK(s.Gamma_plus == Approx(5.299195494590803e-07).epsilon(1e-12));
  CHECK(s.Gamma_minus == Approx(4.727302119431995e-06).epsilon(1e-12));
  CHECK(s.J_minus == Approx(2.3636510597159973e-05).epsilon(1e-12));
  CHECK(s.J_prime == Approx(5.0000157926519195).epsilon(1e-14));
  CHECK(s.Gamma == s.Gamma_plus + s.Gamma_minus);

  const oracle::RateSet t = oracle::rates(params(2, pi / 4, 2));
  CHECK(t.Gamma == Approx(4.812241526143946e-05).epsilon(1e-12));

  const oracle::RateSet u = oracle::rates(params(5, pi, -5));
  const double shift = (u.J_prime - 5.0) / 5.0;
  CHECK(std::abs(shift) > 1e-6);
  CHECK(std::abs(shift) < 1e-4);
}

TEST_CASE("adiabatic fields") {
  const oracle::AdiabaticFields f = oracle::adiabatic_fields(params(2, 1.1, -1.3), test_rho_ext());
  CHECK(f.n_S == Approx(0.00046829771953143574).epsilon(1e-12));
  CHECK(f.n_A == Approx(2.2022763582334888e-05).epsilon(1e-12));
  CHECK(f.n_CW == Approx(0.00021433370683253985).epsilon(1e-12));
  CHECK(f.n_CCW == Approx(0.00027598677628123085).epsilon(1e-12));
  CHECK(f.n_CW + f.n_CCW == Approx(f.n_S + f.n_A).epsilon(1e-12));
  CHECK(std::norm(f.alpha_S) == Approx(f.n_S).epsilon(1e-14));

  const ComplexMatrix mixed = 0.5 * ComplexMatrix::Identity(2, 2);
  const oracle::AdiabaticFields g = oracle::adiabatic_fields(params(2, 0.0, 0.7), mixed);
  CHECK(g.n_A == 0.0);
  CHECK(g.n_CW == Approx(g.n_CCW).epsilon(1e-15));

  const oracle::AdiabaticFields h = oracle::adiabatic_fields(params(2, pi, 0.7), test_rho_ext());
  CHECK(std::abs(h.alpha_S) < 1e-17);
  CHECK(std::abs(h.n_CW - h.n_CCW) < 1e-18);

  SystemParams sing = params(1, 1.0, 2.0);
  sing.kappa = 0.0;
  CHECK_THROWS_AS(oracle::adiabatic_fields(sing, mixed), SingularityError);
  CHECK_THROWS_AS(oracle::adiabatic_fields(params(1, 1, 0), ComplexMatrix::Identity(3, 3)), DimensionError);
}

TEST_CASE("directionality follows the motional coherence") {
  const SystemParams p = params(5, pi / 5, -5);
  const double t = pi / 4 / (2.0 * oracle::rates(p).J_prime);
  const oracle::MotionalState m = oracle::motional_solution(p, t);
  const oracle::AdiabaticFields f = oracle::adiabatic_fields(p, m.rho_ext);
  CHECK(std::abs(f.n_CW - f.n_CCW) > 0.0);
  CHECK(f.n_CW - f.n_CCW == Approx(oracle::n0(p) * (oracle::directionality_factor(p) * m.rho_ext(1, 0)).imag()).epsilon(1e-12));
  const Complex d0(p.delta, 0.5), k = 4.0 * p.J * p.delta * std::sin(p.phi) / ((d0 + 2.0 * p.J) * std::conj(d0 - 2.0 * p.J));
  CHECK(std::abs(oracle::directionality_factor(p) - k) < 1e-15);
}

TEST_CASE("motional solution") {
  const SystemParams p = params(5, pi / 5, -5);
  const oracle::MotionalState start = oracle::motional_solution(p, 0.0);
  CHECK(start.sx == 1.0);
  CHECK(start.sy == 0.0);
  CHECK(start.sz == 0.0);
  const oracle::MotionalState late = oracle::motional_solution(p, 1e9);
  CHECK(late.sz == Approx(100.0 / 125.25).epsilon(1e-12));
  CHECK(std::abs(late.sx) < 1e-12);
  const oracle::RateSet r = oracle::rates(p);
  for (double t : {0.3, 17.0, 4e4}) {
    const oracle::MotionalState m = oracle::motional_solution(p, t);
    CHECK(m.sx * m.sx + m.sy * m.sy == Approx(std::exp(-r.Gamma * t)).epsilon(1e-13));
    CHECK(m.rho_ext.trace().real() == Approx(1.0));
  }
  const oracle::MotionalState frozen = oracle::motional_solution(params(5, 0.0, 0), 3.0);
  CHECK(frozen.sz == 0.0);
  CHECK(frozen.sx == Approx(std::cos(30.0)).epsilon(1e-14));
}

TEST_CASE("perturbative steady state") {
  const oracle::PerturbativeSS a = oracle::perturbative_ss(params(2, 1.0, 0));
  CHECK(a.P_plus == 0.5);
  CHECK(a.P_minus == 0.5);
  const SystemParams p = params(5, pi / 5, -5);
  const oracle::PerturbativeSS b = oracle::perturbative_ss(p);
  CHECK(b.P_plus == Approx(0.8992015968063872).epsilon(1e-14));
  CHECK(b.P_plus + b.P_minus == Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(b.c00p) == 1.0);
  CHECK(std::abs(b.c00m) == 1.0);
  for (const SystemParams& q : {p, params(2, 1.1, -1.3), params(0.5, 2.8, 0.9)}) {
    const oracle::PerturbativeSS c = oracle::perturbative_ss(q);
    const double n_pert = c.P_plus * std::norm(c.c01m) + c.P_minus * std::norm(c.c01p);
    ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
    rho(0, 0) = c.P_plus;
    rho(1, 1) = c.P_minus;
    const double n_a = oracle::adiabatic_fields(q, rho).n_A;
    CHECK(std::abs(n_pert - n_a) <= 1e-10 * n_a);
  }
}

TEST_CASE("population imbalance agrees with the motional steady value") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> J(0.1, 6.0), phi(0.2, 2 * pi - 0.2), delta(-8.0, 8.0);
  for (int k = 0; k < 100; ++k) {
    const SystemParams p = params(J(rng), phi(rng), delta(rng));
    const oracle::PerturbativeSS c = oracle::perturbative_ss(p);
    const oracle::MotionalState m = oracle::motional_solution(p, 1e12);
    CHECK(std::abs((c.P_plus - c.P_minus) - m.sz) <= 1e-12);
  }
}

TEST_CASE("photon generation balances the rates") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> J(0.1, 6.0), phi(0.0, 2 * pi), delta(-8.0, 8.0), t(0.0, 5e4);
  for (int k = 0; k < 100; ++k) {
    const SystemParams p = params(J(rng), phi(rng), delta(rng));
    const oracle::MotionalState m = oracle::motional_solution(p, t(rng));
    const oracle::RateSet r = oracle::rates(p);
    const double lhs = p.kappa * oracle::adiabatic_fields(p, m.rho_ext).n_A;
    const double rhs = r.Gamma_plus * m.rho_ext(0, 0).real() + r.Gamma_minus * m.rho_ext(1, 1).real();
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(lhs, 1e-300));
  }
}

TEST_CASE("steady photon number is the long-time limit of the adiabatic fields") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> J(0.1, 6.0), phi(0.2, 2 * pi - 0.2), delta(-8.0, 8.0);
  for (int k = 0; k < 50; ++k) {
    const SystemParams p = params(J(rng), phi(rng), delta(rng));
    const oracle::AdiabaticFields f = oracle::adiabatic_fields(p, oracle::motional_solution(p, 1e12).rho_ext);
    const double n = oracle::n_tot_steady(p);
    CHECK(std::abs(f.n_S + f.n_A - n) <= 1e-10 * n);
  }
}

}  // TEST_SUITE
