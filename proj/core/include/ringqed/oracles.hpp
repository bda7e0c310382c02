#pragma once

#include "ringqed/model.hpp"
#include "ringqed/operators.hpp"

/// Closed-form dispersive-regime results. Nothing here touches the numeric engine.
namespace ringqed::oracle {

struct RateSet {
  double J_plus = 0.0;
  double J_minus = 0.0;
  double Gamma_plus = 0.0;
  double Gamma_minus = 0.0;
  double Gamma = 0.0;
  double J_prime = 0.0;
};

struct AdiabaticFields {
  Complex alpha_S;
  Complex alpha_A;
  double n_S = 0.0;
  double n_A = 0.0;
  double n_CW = 0.0;
  double n_CCW = 0.0;
};

struct MotionalState {
  double sx = 0.0;
  double sy = 0.0;
  double sz = 0.0;
  /// Parity basis (|+>, |->); sx + i sy = 2 <+|rho|->.
  ComplexMatrix rho_ext;
};

/// Amplitudes of the two parity branches truncated at two photons. Suffix p/m
/// is the external label of the basis state, e.g. c01m multiplies |0_S 1_A ->.
struct PerturbativeSS {
  double P_plus = 0.5;
  double P_minus = 0.5;
  Complex c00p, c00m, c10p, c10m, c01p, c01m, c11p, c11m, c20p, c20m, c02p, c02m;
};

double omega_eff(const SystemParams& p);
double n0(const SystemParams& p);
double n_tot_steady(const SystemParams& p);

/// Two-time correlation for general cavity detuning, from the two-branch
/// perturbative steady state and the vacuum/one-photon propagator.
double g2_closed(const SystemParams& p, double tau);
/// Resonant (delta = 0) closed form; p.delta is ignored.
double g2_resonant(const SystemParams& p, double tau);

RateSet rates(const SystemParams& p);

/// Quasistatic fields for a reduced external state given in the parity basis.
AdiabaticFields adiabatic_fields(const SystemParams& p, const ComplexMatrix& rho_ext);

/// Semiclassical external motion starting from |L>.
MotionalState motional_solution(const SystemParams& p, double t);

PerturbativeSS perturbative_ss(const SystemParams& p);

/// Complex factor K with (n_CW - n_CCW) / n0 = Im(K <-|rho_ext|+>).
Complex directionality_factor(const SystemParams& p);

}  // namespace ringqed::oracle
