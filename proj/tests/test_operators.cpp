#include <cmath>
#include <random>

#include "doctest.h"
#include "ringqed/errors.hpp"
#include "ringqed/operators.hpp"

using namespace ringqed;

namespace {

ComplexMatrix diag(std::initializer_list<double> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double v : d) m(i, i) = v, ++i;
  return m;
}

ComplexMatrix random_density(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = Complex(normal(rng), normal(rng));
  ComplexMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

SpaceLayout two_factor_layout() {
  return SpaceLayout({{Factor::external, 2}, {Factor::modeCW, 3}});
}

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("kron of identities is the identity") {
  CHECK(kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)).isApprox(ComplexMatrix::Identity(4, 4)));
}

TEST_CASE("kron of diagonal matrices") {
  CHECK(kron(diag({1, 2}), diag({3, 4})) == diag({3, 4, 6, 8}));
}

TEST_CASE("kron is associative exactly on integer matrices") {
  const PauliSet s = pauli_set();
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  const ComplexMatrix stepwise = kron(kron(kron(s.plus, i2), s.z), diag({1, 2}));
  const ComplexMatrix direct = kron({s.plus, i2, s.z, diag({1, 2})});
  CHECK(stepwise == direct);
  CHECK(kron(s.plus, kron(i2, s.x)) == kron(kron(s.plus, i2), s.x));
}

TEST_CASE("kron rejects non-square input") {
  CHECK_THROWS_AS(kron(ComplexMatrix::Zero(2, 3), ComplexMatrix::Identity(2, 2)), DimensionError);
}

TEST_CASE("annihilation ladder") {
  const ComplexMatrix a1 = annihilation(1);
  CHECK(a1.rows() == 2);
  CHECK(a1(0, 1) == Complex(1.0, 0.0));
  CHECK(a1(1, 0) == Complex(0.0, 0.0));
  CHECK(a1(0, 0) == Complex(0.0, 0.0));
  CHECK(std::abs(annihilation(2)(1, 2) - std::sqrt(2.0)) < 1e-15);
  CHECK(number_operator(3).isApprox(diag({0, 1, 2, 3})));
  CHECK_THROWS_AS(annihilation(0), DimensionError);
}

TEST_CASE("commutator deviation sits in the top level only") {
  for (std::size_t n : {1u, 2u, 4u}) {
    const ComplexMatrix a = annihilation(n);
    ComplexMatrix c = a * a.adjoint() - a.adjoint() * a;
    const auto top = static_cast<Eigen::Index>(n);
    CHECK(std::abs(c(top, top) - Complex(-static_cast<double>(n), 0.0)) < 1e-12);
    c(top, top) = 1.0;
    CHECK((c - ComplexMatrix::Identity(top + 1, top + 1)).norm() < 1e-12);
  }
}

TEST_CASE("pauli identities") {
  const PauliSet s = pauli_set();
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  CHECK((s.plus * s.minus + s.minus * s.plus).isApprox(i2));
  CHECK(s.x == s.plus + s.minus);
  CHECK((s.z * s.plus - s.plus * s.z).isApprox(2.0 * s.plus));
  CHECK((s.x * s.y - s.y * s.x).isApprox(Complex(0, 2) * s.z));
}

TEST_CASE("expectation values") {
  const SpaceLayout mode({{Factor::modeCW, 3}});
  const Operator n(mode, number_operator(2));
  const Operator id(mode, ComplexMatrix::Identity(3, 3));
  const DensityMatrix vac = DensityMatrix::basis_state(mode, 0);
  const DensityMatrix one = DensityMatrix::basis_state(mode, 1);
  CHECK(std::abs(expectation(id, vac) - 1.0) < 1e-15);
  CHECK(std::abs(expectation(n, vac)) < 1e-15);
  CHECK(std::abs(expectation(n, one) - 1.0) < 1e-15);
  const DensityMatrix other = DensityMatrix::basis_state(two_factor_layout(), 0);
  CHECK_THROWS_AS(expectation(n, other), LayoutError);
}

TEST_CASE("expectation of a Hermitian operator is real") {
  std::mt19937_64 rng(7);
  const SpaceLayout l = two_factor_layout();
  const DensityMatrix rho(l, random_density(l.dim(), rng));
  const ComplexMatrix h = random_density(l.dim(), rng) * 3.0;
  CHECK(std::abs(expectation(Operator(l, h), rho).imag()) < 1e-10);
}

TEST_CASE("partial trace of a product state") {
  std::mt19937_64 rng(11);
  const ComplexMatrix ra = random_density(2, rng);
  const ComplexMatrix rb = random_density(3, rng);
  const DensityMatrix rho(two_factor_layout(), kron(ra, rb));
  const DensityMatrix a = partial_trace(rho, {Factor::external});
  const DensityMatrix b = partial_trace(rho, {Factor::modeCW});
  CHECK((a.matrix() - ra).norm() < 1e-12);
  CHECK((b.matrix() - rb).norm() < 1e-12);
  CHECK(std::abs(a.matrix().trace() - 1.0) < 1e-12);
  CHECK((partial_trace(rho, {Factor::external, Factor::modeCW}).matrix() - rho.matrix()).norm() == 0.0);
}

TEST_CASE("partial trace of an entangled pure state is maximally mixed") {
  const SpaceLayout l({{Factor::internal, 2}, {Factor::external, 2}});
  ComplexVector psi = ComplexVector::Zero(4);
  psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
  const DensityMatrix rho = DensityMatrix::pure(l, psi);
  const DensityMatrix r = partial_trace(rho, {Factor::external});
  CHECK((r.matrix() - 0.5 * ComplexMatrix::Identity(2, 2)).norm() < 1e-15);
  CHECK_THROWS_AS(partial_trace(rho, {Factor::modeS}), LayoutError);
}

TEST_CASE("density matrix validation") {
  const SpaceLayout l({{Factor::external, 2}});
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix(l, m), InvalidStateError);
  m *= 0.5;
  m(0, 0) = std::nan("");
  CHECK_THROWS_AS(DensityMatrix(l, m), InvalidStateError);
  CHECK_THROWS_AS(DensityMatrix(l, ComplexMatrix::Identity(3, 3) / 3.0), DimensionError);
  const DensityMatrix ok(l, 0.5 * ComplexMatrix::Identity(2, 2));
  CHECK(ok.is_positive());
  CHECK(std::abs(ok.min_eigenvalue() - 0.5) < 1e-14);
}

TEST_CASE("layout lift places the operator on its factor") {
  const SpaceLayout l = two_factor_layout();
  const ComplexMatrix a = annihilation(2);
  CHECK(l.lift(Factor::modeCW, a) == kron(ComplexMatrix::Identity(2, 2), a));
  CHECK(l.lift(Factor::external, pauli_set().x) == kron(pauli_set().x, ComplexMatrix::Identity(3, 3)));
  CHECK_THROWS_AS(l.lift(Factor::modeCW, annihilation(1)), DimensionError);
  CHECK_THROWS_AS(SpaceLayout({{Factor::modeCW, 2}, {Factor::modeCW, 2}}), LayoutError);
}

}  // TEST_SUITE
