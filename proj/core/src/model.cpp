#include "ringqed/model.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <string>

#include "ringqed/diagnostics.hpp"
#include "ringqed/errors.hpp"

namespace ringqed {

namespace {

constexpr Complex I{0.0, 1.0};

void require(bool ok, const std::string& what) {
  if (!ok) throw LayoutError(what);
}

bool is_full_lab(const SpaceLayout& s) {
  return s.factors().size() == 4 && s.contains(Factor::internal) &&
         s.contains(Factor::external) && s.contains(Factor::modeCW) &&
         s.contains(Factor::modeCCW) && s.external_basis() == ExternalBasis::localized &&
         s.factor_dim(Factor::internal) == 2 && s.factor_dim(Factor::external) == 2;
}

bool is_effective_sa(const SpaceLayout& s) {
  return s.factors().size() == 3 && s.contains(Factor::external) && s.contains(Factor::modeS) &&
         s.contains(Factor::modeA) && s.external_basis() == ExternalBasis::parity &&
         s.factor_dim(Factor::external) == 2;
}

bool is_external_only(const SpaceLayout& s) {
  return s.factors().size() == 1 && s.contains(Factor::external) &&
         s.external_basis() == ExternalBasis::parity && s.factor_dim(Factor::external) == 2;
}

ComplexMatrix projector(std::size_t dim, std::size_t k) {
  const auto n = static_cast<Eigen::Index>(dim);
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  p(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
  return p;
}

ComplexMatrix ket_bra(std::size_t dim, std::size_t i, std::size_t j) {
  const auto n = static_cast<Eigen::Index>(dim);
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
  return p;
}

Operator checked_hermitian(Operator h, const char* what) {
  const double skew = (h.matrix() - h.matrix().adjoint()).cwiseAbs().maxCoeff();
  if (skew > 1e-12) {
    throw Error(std::string(what) + ": built Hamiltonian is not Hermitian (" +
                std::to_string(skew) + ")");
  }
  return h;
}

std::size_t photon_cutoff(const SpaceLayout& s, Factor f) { return s.factor_dim(f) - 1; }

}  // namespace

double SystemParams::omega_eff() const { return std::numbers::sqrt2 * g * Omega / Delta; }

void SystemParams::validate() const {
  const double values[] = {kappa, gamma, Delta, g, Omega, delta, J, phi};
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError("system parameters must be finite");
  }
  if (kappa <= 0.0) throw ValidationError("kappa must be positive");
  if (gamma < 0.0) throw ValidationError("gamma must be non-negative");
  if (Delta == 0.0) throw ValidationError("Delta must be nonzero");
}

bool SystemParams::is_dispersive() const {
  const double scale = std::max({std::abs(g), std::abs(Omega), gamma, kappa});
  return std::abs(Delta) >= 10.0 * scale;
}

void SystemParams::check() const {
  validate();
  if (!is_dispersive()) {
    warn("parameters are outside the dispersive regime (|Delta| < 10 max(g, Omega, gamma, kappa))");
  }
}

SpaceLayout build_space(ModelKind kind, std::size_t n_max) {
  if (kind != ModelKind::external_only && n_max < 1) {
    throw ValidationError("photon truncation n_max must be at least 1");
  }
  const std::size_t d = n_max + 1;
  switch (kind) {
    case ModelKind::full_lab:
      return SpaceLayout({{Factor::internal, 2}, {Factor::external, 2}, {Factor::modeCW, d},
                          {Factor::modeCCW, d}},
                         ExternalBasis::localized);
    case ModelKind::effective_sa:
      return SpaceLayout({{Factor::external, 2}, {Factor::modeS, d}, {Factor::modeA, d}},
                         ExternalBasis::parity);
    case ModelKind::external_only:
      return SpaceLayout({{Factor::external, 2}}, ExternalBasis::parity);
  }
  throw ValidationError("unknown model kind");
}

std::size_t basis_index(const SpaceLayout& layout, std::size_t internal, std::size_t external,
                        std::size_t n1, std::size_t n2) {
  std::size_t idx = 0;
  for (const auto& f : layout.factors()) {
    std::size_t digit = 0;
    switch (f.label) {
      case Factor::internal: digit = internal; break;
      case Factor::external: digit = external; break;
      case Factor::modeCW:
      case Factor::modeS: digit = n1; break;
      case Factor::modeCCW:
      case Factor::modeA: digit = n2; break;
    }
    if (digit >= f.dim) throw DimensionError("basis label exceeds factor dimension");
    idx = idx * f.dim + digit;
  }
  return idx;
}

Operator full_hamiltonian(const SystemParams& p, const SpaceLayout& space) {
  require(is_full_lab(space), "full_hamiltonian needs the internal/external/CW/CCW layout");
  p.validate();
  const PauliSet s = pauli_set();
  const std::size_t nc = photon_cutoff(space, Factor::modeCW);
  const ComplexMatrix a = annihilation(nc);
  const ComplexMatrix n = a.adjoint() * a;
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  const auto id = static_cast<Eigen::Index>(nc + 1);
  const ComplexMatrix ic = ComplexMatrix::Identity(id, id);

  const ComplexMatrix a_cw = kron({i2, i2, a, ic});
  const ComplexMatrix a_ccw = kron({i2, i2, ic, a});
  const ComplexMatrix n_tot = kron({i2, i2, n, ic}) + kron({i2, i2, ic, n});
  const ComplexMatrix excited = kron({s.plus * s.minus, i2, ic, ic});
  const ComplexMatrix drive = kron({s.x, i2, ic, ic});
  const ComplexMatrix sp = kron({s.plus, i2, ic, ic});

  const Complex ph = std::exp(I * (p.phi / 2.0));
  const ComplexMatrix p_left = kron({i2, projector(2, 0), ic, ic});
  const ComplexMatrix p_right = kron({i2, projector(2, 1), ic, ic});
  const ComplexMatrix field =
      p_left * (std::conj(ph) * a_cw + ph * a_ccw) + p_right * (ph * a_cw + std::conj(ph) * a_ccw);
  const ComplexMatrix coupling = p.g * (sp * field);
  const ComplexMatrix hop = kron({i2, ket_bra(2, 0, 1) + ket_bra(2, 1, 0), ic, ic});

  ComplexMatrix h = -p.delta * n_tot - p.Delta * excited + (p.Omega / 2.0) * drive + coupling +
                    coupling.adjoint() - p.J * hop;
  return checked_hermitian(Operator(space, std::move(h)), "full_hamiltonian");
}

JumpList collapse_operators(const SystemParams& p, const SpaceLayout& space) {
  require(is_full_lab(space), "collapse_operators needs the internal/external/CW/CCW layout");
  p.validate();
  const std::size_t nc = photon_cutoff(space, Factor::modeCW);
  JumpList out;
  out.push_back({Operator(space, space.lift(Factor::internal, pauli_set().minus)), p.gamma});
  out.push_back({Operator(space, space.lift(Factor::modeCW, annihilation(nc))), p.kappa});
  out.push_back({Operator(space, space.lift(Factor::modeCCW, annihilation(nc))), p.kappa});
  return out;
}

Operator effective_hamiltonian(const SystemParams& p, const SpaceLayout& space) {
  require(is_effective_sa(space), "effective_hamiltonian needs the external/S/A layout");
  p.validate();
  const std::size_t ns = photon_cutoff(space, Factor::modeS);
  const std::size_t na = photon_cutoff(space, Factor::modeA);
  const ComplexMatrix a_s = space.lift(Factor::modeS, annihilation(ns));
  const ComplexMatrix a_a = space.lift(Factor::modeA, annihilation(na));
  ComplexMatrix sz(2, 2), sx(2, 2);
  sz << 1, 0, 0, -1;
  sx << 0, 1, 1, 0;
  const double amp = p.omega_eff() / 2.0;
  const ComplexMatrix h_s =
      -p.delta * a_s.adjoint() * a_s + amp * std::cos(p.phi / 2.0) * (a_s + a_s.adjoint());
  const ComplexMatrix h_a = -p.delta * a_a.adjoint() * a_a +
                            amp * std::sin(p.phi / 2.0) * (a_a + a_a.adjoint()) *
                                space.lift(Factor::external, sx);
  ComplexMatrix h = h_s + h_a - p.J * space.lift(Factor::external, sz);
  return checked_hermitian(Operator(space, std::move(h)), "effective_hamiltonian");
}

JumpList effective_collapse_operators(const SystemParams& p, const SpaceLayout& space) {
  require(is_effective_sa(space), "effective_collapse_operators needs the external/S/A layout");
  p.validate();
  JumpList out;
  out.push_back({Operator(space, space.lift(Factor::modeS, annihilation(photon_cutoff(space, Factor::modeS)))),
                 p.kappa});
  out.push_back({Operator(space, space.lift(Factor::modeA, annihilation(photon_cutoff(space, Factor::modeA)))),
                 p.kappa});
  return out;
}

Operator parity_operator(const SpaceLayout& space) {
  require(is_effective_sa(space), "parity_operator needs the external/S/A layout");
  const std::size_t na = photon_cutoff(space, Factor::modeA);
  const auto d = static_cast<Eigen::Index>(na + 1);
  ComplexMatrix photon_parity = ComplexMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) photon_parity(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
  ComplexMatrix sz(2, 2);
  sz << 1, 0, 0, -1;
  return Operator(space, space.lift(Factor::modeA, photon_parity) * space.lift(Factor::external, sz));
}

std::vector<std::size_t> mirror_permutation(const SpaceLayout& space) {
  require(is_full_lab(space), "mirror_permutation needs the internal/external/CW/CCW layout");
  const std::size_t d = photon_cutoff(space, Factor::modeCW) + 1;
  std::vector<std::size_t> perm(space.dim());
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t x = 0; x < 2; ++x)
      for (std::size_t n1 = 0; n1 < d; ++n1)
        for (std::size_t n2 = 0; n2 < d; ++n2) {
          perm[basis_index(space, i, x, n1, n2)] = basis_index(space, i, 1 - x, n2, n1);
        }
  return perm;
}

namespace {

// U = exp(-i G) with G = sum h_jk a_j^dag a_k and exp(-i h) = M^dag, where
// (a_S, a_A) = M (a_CW, a_CCW).
ComplexMatrix mode_rotation(std::size_t n_max) {
  const double r = 1.0 / std::numbers::sqrt2;
  ComplexMatrix m(2, 2);
  m << r, r, -I * r, I * r;
  Eigen::ComplexEigenSolver<ComplexMatrix> es(m.adjoint());
  const ComplexMatrix w = es.eigenvectors();
  Eigen::VectorXcd theta = es.eigenvalues().unaryExpr([](Complex z) { return Complex(std::arg(z), 0.0); });
  const ComplexMatrix h = w * (-theta).asDiagonal() * w.inverse();

  const ComplexMatrix a = annihilation(n_max);
  const auto d = static_cast<Eigen::Index>(n_max + 1);
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const ComplexMatrix a1 = kron(a, id);
  const ComplexMatrix a2 = kron(id, a);
  const ComplexMatrix* modes[2] = {&a1, &a2};
  ComplexMatrix gen = ComplexMatrix::Zero(d * d, d * d);
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) gen += h(j, k) * modes[j]->adjoint() * *modes[k];
  }
  gen = hermitian_part(gen);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eg(gen);
  const Eigen::VectorXcd phase =
      eg.eigenvalues().unaryExpr([](double e) { return std::exp(Complex(0.0, -e)); });
  return eg.eigenvectors() * phase.asDiagonal() * eg.eigenvectors().adjoint();
}

}  // namespace

BasisTransform basis_transform(TransformKind which, const SpaceLayout& space) {
  if (which == TransformKind::photon) {
    require(space.contains(Factor::modeCW) && space.contains(Factor::modeCCW),
            "photon transform needs CW and CCW factors");
    const std::size_t nc = photon_cutoff(space, Factor::modeCW);
    require(photon_cutoff(space, Factor::modeCCW) == nc, "photon factors must share a cutoff");
    const ComplexMatrix u_ph = mode_rotation(nc);
    std::size_t before = 1;
    for (const auto& f : space.factors()) {
      if (f.label != Factor::modeCW && f.label != Factor::modeCCW) before *= f.dim;
    }
    require(space.position(Factor::modeCW) + 2 == space.factors().size(),
            "photon factors must be last");
    const auto nb = static_cast<Eigen::Index>(before);
    Operator u(space, kron(ComplexMatrix::Identity(nb, nb), u_ph));
    SpaceLayout target = space.relabeled(Factor::modeCW, Factor::modeS).relabeled(Factor::modeCCW, Factor::modeA);
    return {std::move(u), std::move(target)};
  }
  require(space.contains(Factor::external) && space.external_basis() == ExternalBasis::localized,
          "external transform needs an external factor in the L/R basis");
  const double r = 1.0 / std::numbers::sqrt2;
  ComplexMatrix v(2, 2);
  v << r, r, r, -r;
  return {Operator(space, space.lift(Factor::external, v)), space.with_basis(ExternalBasis::parity)};
}

Operator transform(const Operator& op, const BasisTransform& t) {
  if (!(op.layout() == t.unitary.layout())) throw LayoutError("transform: layout mismatch");
  const ComplexMatrix& u = t.unitary.matrix();
  return Operator(t.target, u.adjoint() * op.matrix() * u);
}

DensityMatrix transform(const DensityMatrix& rho, const BasisTransform& t) {
  return DensityMatrix(transform(rho.op(), t));
}

ExternalGenerator external_generator(const SystemParams& p, const SpaceLayout& space) {
  require(is_external_only(space), "external_generator needs the external-only layout");
  p.validate();
  const double s = std::sin(p.phi / 2.0);
  const double pref = p.omega_eff() * p.omega_eff() / 4.0 * s * s;
  auto shift = [&](double detuning) {
    const Complex denom(detuning, p.kappa / 2.0);
    if (std::abs(denom) < 1e-300) throw SingularityError("resonant external rate with zero linewidth");
    return pref / denom;
  };
  const Complex zp = shift(p.delta - 2.0 * p.J);
  const Complex zm = shift(p.delta + 2.0 * p.J);
  const double j_plus = zp.real(), j_minus = zm.real();
  const double g_plus = -2.0 * zp.imag(), g_minus = -2.0 * zm.imag();

  ComplexMatrix h(2, 2);
  h << -p.J + j_plus, 0, 0, p.J + j_minus;
  JumpList jumps;
  jumps.push_back({Operator(space, ket_bra(2, 1, 0)), g_plus});
  jumps.push_back({Operator(space, ket_bra(2, 0, 1)), g_minus});
  return {Operator(space, std::move(h)), std::move(jumps)};
}

}  // namespace ringqed
