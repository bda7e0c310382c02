#include "ringqed/observables.hpp"

#include <cmath>
#include <numbers>

#include "ringqed/errors.hpp"

namespace ringqed {

namespace {

constexpr Complex I{0.0, 1.0};
constexpr double r2 = 1.0 / std::numbers::sqrt2;

Operator number(const Operator& a) { return a.adjoint() * a; }

ComplexMatrix lifted_annihilation(const SpaceLayout& layout, Factor f) {
  return layout.lift(f, annihilation(layout.factor_dim(f) - 1));
}

}  // namespace

struct PhotonProbe::Modes {
  SpaceLayout layout;
  Operator cw, ccw, s, a;
};

PhotonProbe::PhotonProbe(Modes m)
    : layout_(std::move(m.layout)),
      a_cw_(std::move(m.cw)),
      a_ccw_(std::move(m.ccw)),
      a_s_(std::move(m.s)),
      a_a_(std::move(m.a)),
      n_cw_(number(a_cw_)),
      n_ccw_(number(a_ccw_)),
      n_s_(number(a_s_)),
      n_a_(number(a_a_)) {}

PhotonProbe::PhotonProbe(const SpaceLayout& layout)
    : PhotonProbe([&]() -> Modes {
        if (layout.contains(Factor::modeCW) && layout.contains(Factor::modeCCW)) {
          const ComplexMatrix cw = lifted_annihilation(layout, Factor::modeCW);
          const ComplexMatrix ccw = lifted_annihilation(layout, Factor::modeCCW);
          return {layout, Operator(layout, cw), Operator(layout, ccw),
                  Operator(layout, r2 * (cw + ccw)), Operator(layout, -I * r2 * (cw - ccw))};
        }
        if (layout.contains(Factor::modeS) && layout.contains(Factor::modeA)) {
          const ComplexMatrix s = lifted_annihilation(layout, Factor::modeS);
          const ComplexMatrix a = lifted_annihilation(layout, Factor::modeA);
          return {layout, Operator(layout, r2 * (s + I * a)), Operator(layout, r2 * (s - I * a)),
                  Operator(layout, s), Operator(layout, a)};
        }
        throw LayoutError("layout has no photon mode pair");
      }()) {}

PhotonNumbers PhotonProbe::numbers(const DensityMatrix& rho) const {
  PhotonNumbers n;
  n.n_CW = expectation(n_cw_, rho).real();
  n.n_CCW = expectation(n_ccw_, rho).real();
  n.n_S = expectation(n_s_, rho).real();
  n.n_A = expectation(n_a_, rho).real();
  n.n_tot = n.n_CW + n.n_CCW;
  return n;
}

FieldAmplitudes PhotonProbe::amplitudes(const DensityMatrix& rho) const {
  return {expectation(a_s_, rho), expectation(a_a_, rho), expectation(a_cw_, rho),
          expectation(a_ccw_, rho)};
}

PhotonNumbers photon_numbers(const DensityMatrix& rho) { return PhotonProbe(rho.layout()).numbers(rho); }

FieldAmplitudes field_amplitudes(const DensityMatrix& rho) {
  return PhotonProbe(rho.layout()).amplitudes(rho);
}

double directionality(const DensityMatrix& rho, double n0) {
  if (!(n0 > 0.0)) throw ValidationError("directionality needs n0 > 0");
  const PhotonNumbers n = photon_numbers(rho);
  return (n.n_CW - n.n_CCW) / n0;
}

ExternalState external_state(const DensityMatrix& rho) {
  const DensityMatrix reduced =
      rho.layout().factors().size() == 1 ? rho : partial_trace(rho, {Factor::external});
  ComplexMatrix v(2, 2);
  v << r2, r2, r2, -r2;
  ExternalState out;
  if (reduced.layout().external_basis() == ExternalBasis::localized) {
    out.localized = reduced.matrix();
    out.parity = v.adjoint() * out.localized * v;
  } else {
    out.parity = reduced.matrix();
    out.localized = v * out.parity * v.adjoint();
  }
  out.rho_L = out.localized(0, 0).real();
  out.rho_R = out.localized(1, 1).real();
  out.rho_pp = out.parity(0, 0).real();
  out.rho_mm = out.parity(1, 1).real();
  out.coh_pm = out.parity(0, 1);
  return out;
}

ObservableRecord observe(const DensityMatrix& rho, double n0) {
  const PhotonProbe probe(rho.layout());
  ObservableRecord r;
  r.photons = probe.numbers(rho);
  r.fields = probe.amplitudes(rho);
  r.external = external_state(rho);
  if (!(n0 > 0.0)) throw ValidationError("directionality needs n0 > 0");
  r.directionality = (r.photons.n_CW - r.photons.n_CCW) / n0;
  return r;
}

}  // namespace ringqed
