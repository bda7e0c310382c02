#pragma once

#include "ringqed/operators.hpp"

namespace ringqed {

struct PhotonNumbers {
  double n_CW = 0.0;
  double n_CCW = 0.0;
  double n_S = 0.0;
  double n_A = 0.0;
  double n_tot = 0.0;
};

struct FieldAmplitudes {
  Complex alpha_S;
  Complex alpha_A;
  Complex alpha_CW;
  Complex alpha_CCW;
};

struct ExternalState {
  /// Reduced state in the (|L>, |R>) basis.
  ComplexMatrix localized;
  /// Reduced state in the (|+>, |->) basis.
  ComplexMatrix parity;
  double rho_L = 0.0;
  double rho_R = 0.0;
  double rho_pp = 0.0;
  double rho_mm = 0.0;
  /// <+| rho |->
  Complex coh_pm;
};

struct ObservableRecord {
  PhotonNumbers photons;
  FieldAmplitudes fields;
  ExternalState external;
  double directionality = 0.0;
};

/// Photon operators of either mode basis, precomputed for one layout.
class PhotonProbe {
 public:
  explicit PhotonProbe(const SpaceLayout& layout);

  PhotonNumbers numbers(const DensityMatrix& rho) const;
  FieldAmplitudes amplitudes(const DensityMatrix& rho) const;
  const Operator& a_CW() const noexcept { return a_cw_; }
  const Operator& a_CCW() const noexcept { return a_ccw_; }

 private:
  struct Modes;
  explicit PhotonProbe(Modes modes);

  SpaceLayout layout_;
  Operator a_cw_, a_ccw_, a_s_, a_a_;
  Operator n_cw_, n_ccw_, n_s_, n_a_;
};

PhotonNumbers photon_numbers(const DensityMatrix& rho);
FieldAmplitudes field_amplitudes(const DensityMatrix& rho);
/// (n_CW - n_CCW) / n0
double directionality(const DensityMatrix& rho, double n0);
ExternalState external_state(const DensityMatrix& rho);
ObservableRecord observe(const DensityMatrix& rho, double n0);

}  // namespace ringqed
