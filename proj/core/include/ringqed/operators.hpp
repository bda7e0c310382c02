#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

namespace ringqed {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

enum class Factor { internal, external, modeCW, modeCCW, modeS, modeA };

std::string_view to_string(Factor f);

/// Basis of the external factor: wells (|L>, |R>) or parity states (|+>, |->).
enum class ExternalBasis { localized, parity };

struct FactorSpec {
  Factor label;
  std::size_t dim;
  bool operator==(const FactorSpec&) const = default;
};

/// Ordered tensor factors in canonical order internal, external, photon, photon.
/// Index 0 of the internal factor is |g>, of the external factor |L> or |+>.
class SpaceLayout {
 public:
  SpaceLayout() = default;
  explicit SpaceLayout(std::vector<FactorSpec> factors,
                       ExternalBasis basis = ExternalBasis::localized);

  std::size_t dim() const noexcept { return dim_; }
  std::span<const FactorSpec> factors() const noexcept { return factors_; }
  ExternalBasis external_basis() const noexcept { return basis_; }

  bool contains(Factor f) const noexcept;
  std::size_t position(Factor f) const;
  std::size_t factor_dim(Factor f) const;

  /// Layout restricted to `keep`, in canonical order.
  SpaceLayout subset(std::span<const Factor> keep) const;
  SpaceLayout with_basis(ExternalBasis basis) const;
  SpaceLayout relabeled(Factor from, Factor to) const;

  /// Embed a single-factor operator into the full space.
  ComplexMatrix lift(Factor f, const ComplexMatrix& local) const;

  bool operator==(const SpaceLayout&) const = default;

 private:
  std::vector<FactorSpec> factors_;
  ExternalBasis basis_ = ExternalBasis::localized;
  std::size_t dim_ = 1;
};

class Operator {
 public:
  Operator(SpaceLayout layout, ComplexMatrix matrix);

  const SpaceLayout& layout() const noexcept { return layout_; }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return layout_.dim(); }

  Operator adjoint() const;
  bool is_hermitian(double tol = 1e-12) const;

  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator*(Complex s, const Operator& a);

 private:
  SpaceLayout layout_;
  ComplexMatrix matrix_;
};

class DensityMatrix {
 public:
  static constexpr double trace_tolerance = 1e-9;
  static constexpr double hermiticity_tolerance = 1e-10;
  static constexpr double positivity_tolerance = 1e-8;

  /// Re-hermitizes, then checks trace and finiteness.
  DensityMatrix(SpaceLayout layout, ComplexMatrix matrix);
  explicit DensityMatrix(Operator op);

  /// |psi><psi| for a normalized state vector.
  static DensityMatrix pure(SpaceLayout layout, const ComplexVector& psi);
  static DensityMatrix basis_state(SpaceLayout layout, std::size_t index);

  const Operator& op() const noexcept { return op_; }
  const SpaceLayout& layout() const noexcept { return op_.layout(); }
  const ComplexMatrix& matrix() const noexcept { return op_.matrix(); }

  double min_eigenvalue() const;
  bool is_positive(double tol = positivity_tolerance) const;

 private:
  Operator op_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(std::initializer_list<ComplexMatrix> factors);
ComplexMatrix kron(const Operator& a, const Operator& b);

ComplexMatrix annihilation(std::size_t n_max);
ComplexMatrix number_operator(std::size_t n_max);

struct PauliSet {
  ComplexMatrix plus;
  ComplexMatrix minus;
  ComplexMatrix x;
  ComplexMatrix y;
  ComplexMatrix z;
};

/// Basis order (|0>, |1>) with sigma_plus = |1><0| and sigma_z = |1><1| - |0><0|.
PauliSet pauli_set();

Complex expectation(const Operator& obs, const DensityMatrix& rho);

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const Factor> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<Factor> keep);

ComplexMatrix hermitian_part(const ComplexMatrix& m);
bool all_finite(const ComplexMatrix& m);

}  // namespace ringqed
