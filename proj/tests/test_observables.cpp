#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "ringqed/errors.hpp"
#include "ringqed/experiment.hpp"
#include "ringqed/lindblad.hpp"
#include "ringqed/observables.hpp"
#include "ringqed/oracles.hpp"

using namespace ringqed;

namespace {

constexpr double pi = std::numbers::pi;

ComplexMatrix random_density(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = Complex(normal(rng), normal(rng));
  ComplexMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

// Unitary swapping CW and CCW in the full layout.
ComplexMatrix mode_swap(const SpaceLayout& s) {
  const std::size_t d = s.factor_dim(Factor::modeCW);
  const auto n = static_cast<Eigen::Index>(s.dim());
  ComplexMatrix u = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t x = 0; x < 2; ++x)
      for (std::size_t n1 = 0; n1 < d; ++n1)
        for (std::size_t n2 = 0; n2 < d; ++n2)
          u(static_cast<Eigen::Index>(basis_index(s, i, x, n2, n1)), static_cast<Eigen::Index>(basis_index(s, i, x, n1, n2))) = 1.0;
  return u;
}

}  // namespace

TEST_SUITE("observables") {

TEST_CASE("vacuum has no photons") {
  const auto s = build_space(ModelKind::full_lab, 2);
  const PhotonNumbers n = photon_numbers(initial_left(s));
  CHECK(n.n_CW == 0.0);
  CHECK(n.n_CCW == 0.0);
  CHECK(n.n_S == 0.0);
  CHECK(n.n_A == 0.0);
  CHECK(n.n_tot == 0.0);
}

TEST_CASE("driven cavity is coherent") {
  const std::size_t n_max = 8;
  const SpaceLayout l({{Factor::modeCW, n_max + 1}, {Factor::modeCCW, n_max + 1}});
  const ComplexMatrix a = l.lift(Factor::modeCW, annihilation(n_max));
  const ComplexMatrix b = l.lift(Factor::modeCCW, annihilation(n_max));
  const Operator h(l, -0.3 * a.adjoint() * a + 0.1 * (a + a.adjoint()));
  const JumpList j{{Operator(l, a), 1.0}, {Operator(l, b), 1.0}};
  const DensityMatrix rho = steady_state(h, j);
  const PhotonNumbers n = photon_numbers(rho);
  const FieldAmplitudes f = field_amplitudes(rho);
  CHECK(std::abs(n.n_CW - std::norm(f.alpha_CW)) < 1e-10);
  CHECK(std::abs(n.n_CCW) < 1e-12);
  CHECK(std::abs(f.alpha_S - (f.alpha_CW + f.alpha_CCW) / std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("full-model photon number at a fringe point") {
  SystemParams p;
  p.J = 5.0;
  p.phi = pi / 2.0;
  const SteadyOutcome ss = full_steady_state(p, 2, false);
  const double ratio = photon_numbers(ss.rho).n_tot / oracle::n0(p);
  CHECK(std::abs(ratio - (0.5 + 0.5 / 401.0)) <= 0.05 * (0.5 + 0.5 / 401.0));
}

TEST_CASE("photon number is basis invariant for arbitrary matrices") {
  std::mt19937_64 rng(17);
  for (auto kind : {ModelKind::full_lab, ModelKind::effective_sa}) {
    const auto s = build_space(kind, 2);
    const DensityMatrix rho(s, random_density(s.dim(), rng));
    const PhotonNumbers n = photon_numbers(rho);
    CHECK(std::abs(n.n_CW + n.n_CCW - n.n_S - n.n_A) < 1e-12);
  }
}

TEST_CASE("directionality") {
  const auto s = build_space(ModelKind::full_lab, 2);
  std::mt19937_64 rng(19);
  const ComplexMatrix m = random_density(s.dim(), rng);
  const ComplexMatrix u = mode_swap(s);
  const DensityMatrix rho(s, m);
  const DensityMatrix swapped(s, u * m * u.adjoint());
  CHECK(std::abs(directionality(rho, 1.0) + directionality(swapped, 1.0)) < 1e-12);
  const DensityMatrix sym(s, 0.5 * (m + u * m * u.adjoint()));
  CHECK(std::abs(directionality(sym, 1.0)) < 1e-12);
  CHECK_THROWS_AS(directionality(rho, 0.0), ValidationError);

  SystemParams p;
  p.phi = 1.0;
  const SteadyOutcome ss = full_steady_state(p, 2, false);
  CHECK(std::abs(directionality(ss.rho, oracle::n0(p))) < 1e-8);
}

TEST_CASE("directionality vanishes at phi = pi") {
  SystemParams p;
  p.J = 5.0;
  p.delta = -5.0;
  p.phi = pi;
  const auto s = build_space(ModelKind::full_lab, 2);
  std::vector<double> t;
  for (int k = 0; k <= 40; ++k) t.push_back(0.25 * k);
  const Trajectory tr = evolve(initial_left(s), full_hamiltonian(p, s), collapse_operators(p, s), EvolutionSpec{t});
  double worst = 0.0;
  for (const auto& r : tr.states) worst = std::max(worst, std::abs(directionality(r, oracle::n0(p))));
  CHECK(worst < 1e-8);
}

TEST_CASE("directionality follows the adiabatic fields of the motional solution") {
  SystemParams p;
  p.J = 5.0;
  p.delta = -5.0;
  p.phi = pi / 5.0;
  const auto s = build_space(ModelKind::full_lab, 2);
  std::vector<double> t;
  for (int k = 0; k <= 80; ++k) t.push_back(10.0 + 0.025 * k);
  std::vector<double> grid{0.0};
  grid.insert(grid.end(), t.begin(), t.end());
  Trajectory tr = evolve(initial_left(s), full_hamiltonian(p, s), collapse_operators(p, s), EvolutionSpec{grid});
  tr.states.erase(tr.states.begin());
  const double n0 = oracle::n0(p);
  double amplitude = 0.0, worst = 0.0, phase_num = 0.0, phase_orc = 0.0;
  Complex num_c(0.0), orc_c(0.0), coh_c(0.0), coh_orc(0.0);
  for (std::size_t k = 0; k < t.size(); ++k) {
    const auto f = oracle::adiabatic_fields(p, oracle::motional_solution(p, t[k]).rho_ext);
    const double orc = (f.n_CW - f.n_CCW) / n0;
    const double num = directionality(tr.states[k], n0);
    amplitude = std::max(amplitude, std::abs(orc));
    worst = std::max(worst, std::abs(num - orc));
    const Complex w = std::exp(Complex(0.0, -2.0 * oracle::rates(p).J_prime * t[k]));
    num_c += num * w;
    orc_c += orc * w;
    coh_c += external_state(tr.states[k]).coh_pm.imag() * w;
    coh_orc += oracle::motional_solution(p, t[k]).rho_ext(0, 1).imag() * w;
  }
  CHECK(worst <= 0.1 * amplitude);
  phase_num = std::arg(num_c);
  phase_orc = std::arg(orc_c);
  CHECK(std::abs(std::remainder(phase_num - phase_orc, 2.0 * pi)) < 0.1);
  // Lag of Delta n behind Im <+|rho|->, against the same lag in the closed forms.
  const double lag = std::arg(num_c) - std::arg(coh_c);
  const double expected = std::arg(orc_c) - std::arg(coh_orc);
  CHECK(std::abs(std::remainder(lag - expected, 2.0 * pi)) < 0.1);
}

TEST_CASE("external state of simple product states") {
  const auto s = build_space(ModelKind::full_lab, 2);
  const ExternalState left = external_state(initial_left(s));
  CHECK(left.rho_L == doctest::Approx(1.0));
  CHECK(std::abs(left.coh_pm - 0.5) < 1e-15);
  ComplexVector psi = ComplexVector::Zero(36);
  psi(static_cast<Eigen::Index>(basis_index(s, 0, 0, 0, 0))) = 1.0 / std::sqrt(2.0);
  psi(static_cast<Eigen::Index>(basis_index(s, 0, 1, 0, 0))) = 1.0 / std::sqrt(2.0);
  const ExternalState plus = external_state(DensityMatrix::pure(s, psi));
  CHECK(plus.rho_pp == doctest::Approx(1.0));
  CHECK(plus.rho_L == doctest::Approx(0.5));
  CHECK(plus.rho_R == doctest::Approx(0.5));
  CHECK(std::abs(plus.rho_mm) < 1e-15);
}

TEST_CASE("external state is idempotent under partial trace") {
  std::mt19937_64 rng(23);
  const auto s = build_space(ModelKind::full_lab, 1);
  const DensityMatrix rho(s, random_density(s.dim(), rng));
  const ExternalState a = external_state(rho);
  const ExternalState b = external_state(partial_trace(rho, {Factor::external}));
  CHECK((a.localized - b.localized).norm() < 1e-15);
  CHECK((a.parity - b.parity).norm() < 1e-15);
  const ObservableRecord rec = observe(rho, 0.5);
  CHECK(rec.directionality == doctest::Approx((rec.photons.n_CW - rec.photons.n_CCW) / 0.5));
}

}  // TEST_SUITE
