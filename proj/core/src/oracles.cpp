#include "ringqed/oracles.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "ringqed/diagnostics.hpp"
#include "ringqed/errors.hpp"

namespace ringqed::oracle {

namespace {

constexpr Complex I{0.0, 1.0};

Complex nonzero(Complex z, const char* what) {
  if (std::abs(z) == 0.0) throw SingularityError(std::string(what) + ": vanishing denominator");
  return z;
}

struct Denoms {
  Complex d0;     // delta + i kappa/2
  Complex plus;   // delta + 2J + i kappa/2
  Complex minus;  // delta - 2J + i kappa/2
};

Denoms denominators(const SystemParams& p) {
  const Complex d0(p.delta, p.kappa / 2.0);
  return {nonzero(d0, "cavity detuning"), nonzero(d0 + 2.0 * p.J, "upper sideband"),
          nonzero(d0 - 2.0 * p.J, "lower sideband")};
}

}  // namespace

double omega_eff(const SystemParams& p) { return std::numbers::sqrt2 * p.g * p.Omega / p.Delta; }

double n0(const SystemParams& p) {
  const Complex d0 = nonzero(Complex(p.delta, p.kappa / 2.0), "n0");
  return 2.0 * std::norm((p.g * p.Omega / (2.0 * p.Delta)) / d0);
}

double n_tot_steady(const SystemParams& p) {
  const double c = std::cos(p.phi / 2.0);
  const double s = std::sin(p.phi / 2.0);
  const double x = 4.0 * p.J * p.J / (p.delta * p.delta + p.kappa * p.kappa / 4.0);
  return n0(p) * (c * c + s * s / (1.0 + x));
}

double g2_resonant(const SystemParams& p, double tau) {
  const double s = std::sin(p.phi / 2.0);
  if (std::abs(s) < 1e-12) return 1.0;
  const double cot2 = std::pow(std::cos(p.phi / 2.0) / s, 2);
  const double k = p.kappa;
  const double bracket = 1.0 + (1.0 + 16.0 * p.J * p.J / (k * k)) * cot2;
  return 1.0 + (16.0 * p.J * p.J / (k * k) * std::exp(-k * tau) +
                8.0 * p.J / k * std::exp(-k * tau / 2.0) * std::sin(2.0 * p.J * tau)) /
                   (bracket * bracket);
}

PerturbativeSS perturbative_ss(const SystemParams& p) {
  if (!p.is_dispersive()) warn("perturbative steady state used outside the dispersive regime");
  const Denoms d = denominators(p);
  const double C = omega_eff(p) / 2.0;
  const double c = std::cos(p.phi / 2.0);
  const double s = std::sin(p.phi / 2.0);
  const Complex two_photon = nonzero(2.0 * d.d0, "two-photon detuning");

  PerturbativeSS out;
  const double x = 4.0 * p.delta * p.J / (p.delta * p.delta + 4.0 * p.J * p.J + p.kappa * p.kappa / 4.0);
  out.P_plus = 0.5 * (1.0 - x);
  out.P_minus = 0.5 * (1.0 + x);
  out.c00p = out.c00m = 1.0;
  out.c10p = out.c10m = C * c / d.d0;
  out.c01m = C * s / d.minus;
  out.c01p = C * s / d.plus;
  out.c11m = out.c10p * out.c01m;
  out.c11p = out.c10m * out.c01p;
  out.c20p = out.c20m = std::numbers::sqrt2 * C * c / two_photon * out.c10p;
  out.c02p = std::numbers::sqrt2 * C * s / two_photon * out.c01m;
  out.c02m = std::numbers::sqrt2 * C * s / two_photon * out.c01p;
  return out;
}

double g2_closed(const SystemParams& p, double tau) {
  const double s = std::sin(p.phi / 2.0);
  if (std::abs(s) < 1e-12) return 1.0;
  const double c = std::cos(p.phi / 2.0);
  const double C = omega_eff(p) / 2.0;
  const PerturbativeSS ss = perturbative_ss(p);
  const double r2 = 1.0 / std::numbers::sqrt2;

  // Energies of |n_S n_A m> under H_eff - i kappa N / 2; m = +1 for |+>.
  auto vacuum_energy = [&](int m) { return Complex(-m * p.J, 0.0); };
  auto photon_energy = [&](int m) { return Complex(-p.delta - m * p.J, -p.kappa / 2.0); };
  // Amplitude picked up by a one-photon state of energy ej fed from a vacuum
  // state of energy ek through coupling v.
  auto driven = [&](Complex ej, Complex ek, double v) {
    return v * (std::exp(-I * ej * tau) - std::exp(-I * ek * tau)) / (ej - ek);
  };

  double numerator = 0.0;
  double occupation = 0.0;
  for (int branch : {+1, -1}) {
    const double weight = branch == +1 ? ss.P_plus : ss.P_minus;
    // psi_branch = |00 b> + c10 |10 b> + c01 |01 -b> + c20 |20 b> + c11 |11 -b> + c02 |02 b>
    const Complex c10 = branch == +1 ? ss.c10p : ss.c10m;
    const Complex c01 = branch == +1 ? ss.c01m : ss.c01p;
    const Complex c11 = branch == +1 ? ss.c11m : ss.c11p;
    const Complex c20 = branch == +1 ? ss.c20p : ss.c20m;
    const Complex c02 = branch == +1 ? ss.c02p : ss.c02m;

    // a_CW psi with a_CW = (a_S + i a_A)/sqrt2, indexed by external label.
    auto idx = [](int m) { return m == +1 ? 0 : 1; };
    std::array<Complex, 2> vac{}, one_s{}, one_a{};
    vac[idx(branch)] += r2 * c10;
    vac[idx(-branch)] += I * r2 * c01;
    one_s[idx(branch)] += c20;
    one_s[idx(-branch)] += I * r2 * c11;
    one_a[idx(-branch)] += r2 * c11;
    one_a[idx(branch)] += I * c02;
    occupation += weight * (std::norm(vac[0]) + std::norm(vac[1]));

    double branch_sum = 0.0;
    for (int m : {+1, -1}) {
      const Complex e1 = photon_energy(m);
      // |10 m> is fed by |00 m> (cos drive), |01 m> by |00 -m> (sin drive).
      const Complex xs = std::exp(-I * e1 * tau) * one_s[idx(m)] +
                         driven(e1, vacuum_energy(m), C * c) * vac[idx(m)];
      const Complex xa = std::exp(-I * e1 * tau) * one_a[idx(m)] +
                         driven(e1, vacuum_energy(-m), C * s) * vac[idx(-m)];
      branch_sum += std::norm(r2 * (xs + I * xa));
    }
    numerator += weight * branch_sum;
  }
  return numerator / (occupation * occupation);
}

RateSet rates(const SystemParams& p) {
  const double s = std::sin(p.phi / 2.0);
  const double pref = omega_eff(p) * omega_eff(p) / 4.0 * s * s;
  const Denoms d = denominators(p);
  const Complex zp = pref / d.minus;  // J+ - i Gamma+/2
  const Complex zm = pref / d.plus;   // J- - i Gamma-/2
  RateSet r;
  r.J_plus = zp.real();
  r.J_minus = zm.real();
  r.Gamma_plus = -2.0 * zp.imag();
  r.Gamma_minus = -2.0 * zm.imag();
  r.Gamma = r.Gamma_plus + r.Gamma_minus;
  const double amp = omega_eff(p) / 2.0 * s;
  r.J_prime = p.J + 0.5 * amp * amp * (-4.0 * p.J / (d.d0 * d.d0 - 4.0 * p.J * p.J)).real();
  return r;
}

AdiabaticFields adiabatic_fields(const SystemParams& p, const ComplexMatrix& rho_ext) {
  if (rho_ext.rows() != 2 || rho_ext.cols() != 2) throw DimensionError("rho_ext must be 2x2");
  const Denoms d = denominators(p);
  const double C = omega_eff(p) / 2.0;
  const double c = std::cos(p.phi / 2.0);
  const double s = std::sin(p.phi / 2.0);
  const double pp = rho_ext(0, 0).real();
  const double mm = rho_ext(1, 1).real();
  const Complex pm = rho_ext(0, 1);  // <sigma^+> = <+|rho|->
  const Complex mp = rho_ext(1, 0);  // <sigma^-> = <-|rho|+>

  AdiabaticFields f;
  f.alpha_S = C * c / d.d0;
  f.alpha_A = C * s * (mp / d.plus + pm / d.minus);
  f.n_S = std::norm(C * c / d.d0);
  f.n_A = std::norm(C * s / d.plus) * mm + std::norm(C * s / d.minus) * pp;

  const double base = n0(p) / 2.0 *
                      (c * c + s * s * (std::norm(d.d0 / d.plus) * mm + std::norm(d.d0 / d.minus) * pp));
  const double cross = n0(p) / 2.0 * (directionality_factor(p) * mp).imag();
  f.n_CW = base + cross;
  f.n_CCW = base - cross;
  return f;
}

Complex directionality_factor(const SystemParams& p) {
  const Denoms d = denominators(p);
  return 4.0 * p.J * p.delta * std::sin(p.phi) / (d.plus * std::conj(d.minus));
}

MotionalState motional_solution(const SystemParams& p, double t) {
  const RateSet r = rates(p);
  MotionalState m;
  const double envelope = std::exp(-r.Gamma * t / 2.0);
  m.sx = envelope * std::cos(2.0 * r.J_prime * t);
  m.sy = envelope * std::sin(2.0 * r.J_prime * t);
  m.sz = r.Gamma > 0.0 ? (r.Gamma_minus - r.Gamma_plus) / r.Gamma * (1.0 - std::exp(-r.Gamma * t))
                       : 0.0;
  m.rho_ext = ComplexMatrix(2, 2);
  m.rho_ext << 0.5 * (1.0 + m.sz), 0.5 * Complex(m.sx, m.sy), 0.5 * Complex(m.sx, -m.sy),
      0.5 * (1.0 - m.sz);
  return m;
}

}  // namespace ringqed::oracle
