#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "ringqed/model.hpp"
#include "ringqed/operators.hpp"

namespace ringqed {

using SparseComplex = Eigen::SparseMatrix<Complex, Eigen::ColMajor, int>;

struct EvolutionSpec {
  std::vector<double> t_grid;
  double rtol = 1e-8;
  double atol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 20'000'000;

  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
};

enum class SteadyMethod { integrate, nullspace };

struct SteadySpec {
  SteadyMethod method = SteadyMethod::nullspace;
  /// Bound on the Frobenius norm of d rho/dt; 0 selects 1e-10 * dim.
  double conv_tol = 0.0;
  double t_cap = 1e3;
  /// Second-smallest |eigenvalue| below this is treated as a degenerate kernel.
  double degeneracy_tol = 1e-9;
  /// Start of integrate-to-convergence (basis state 0 when empty). With the
  /// nullspace method it selects the limit state when the kernel is degenerate.
  std::optional<DensityMatrix> initial;
  double rtol = 1e-8;
  double atol = 1e-12;
};

/// Precomputed generator rho -> -i[H, rho] + sum rate D[L] rho.
class LindbladGenerator {
 public:
  LindbladGenerator(const Operator& H, const JumpList& jumps);

  const SpaceLayout& layout() const noexcept { return layout_; }
  std::size_t dim() const noexcept { return layout_.dim(); }

  /// General action, valid for any square input.
  void apply(const ComplexMatrix& rho, ComplexMatrix& out) const;
  /// Faster action assuming rho is Hermitian.
  void apply_hermitian(const ComplexMatrix& rho, ComplexMatrix& out) const;

  /// Superoperator acting on column-stacked vec(rho).
  SparseComplex superoperator() const;

 private:
  SpaceLayout layout_;
  SparseComplex h_eff_;  // H - (i/2) sum rate L^dag L
  SparseComplex h_eff_adj_;
  std::vector<SparseComplex> jumps_;  // sqrt(rate) L
  std::vector<SparseComplex> jumps_adj_;
};

ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const Operator& H, const JumpList& jumps);
ComplexMatrix lindblad_rhs(const DensityMatrix& rho, const Operator& H, const JumpList& jumps);

using Observer = std::function<void(double, const DensityMatrix&)>;

/// Adaptive Dormand-Prince 5(4) integration; the state is re-hermitized after
/// every accepted step.
Trajectory evolve(const DensityMatrix& rho0, const Operator& H, const JumpList& jumps,
                  const EvolutionSpec& spec);
void evolve(const DensityMatrix& rho0, const LindbladGenerator& gen, const EvolutionSpec& spec,
            const Observer& observer);

DensityMatrix steady_state(const Operator& H, const JumpList& jumps, const SteadySpec& spec = {});
DensityMatrix steady_state(const LindbladGenerator& gen, const SteadySpec& spec = {});

/// Steady state restricted to operators with P rho P = rho, where P is the basis
/// permutation `perm` (an involution commuting with the generator). Works on a
/// superoperator of about half the size. Throws DegeneracyError when the kernel
/// inside the symmetric sector is not one dimensional.
DensityMatrix symmetric_steady_state(const LindbladGenerator& gen, std::span<const std::size_t> perm,
                                     const SteadySpec& spec = {});

/// Eigenvalues of the superoperator nearest `shift`.
struct SlowModeRequest {
  Complex shift;
  int count = 1;
};

struct SlowModes {
  std::vector<Complex> eigenvalues;
  /// Right eigenvectors reshaped to operators.
  std::vector<ComplexMatrix> modes;
  /// Largest relative eigen-residual |L v - lambda v| / |v|.
  double residual = 0.0;
};

/// Shift-invert block iteration with Rayleigh-Ritz extraction.
SlowModes slow_modes(const LindbladGenerator& gen, std::span<const SlowModeRequest> requests,
                     double tol = 1e-12, int max_iter = 200);

/// Infinite-time limit of the evolution from rho0, built from the right and
/// left kernels of the generator. Handles degenerate kernels.
DensityMatrix asymptotic_state(const LindbladGenerator& gen, const DensityMatrix& rho0,
                               double kernel_tol = 1e-9);

/// Continues a trajectory exactly on the span of a few slow modes, once the
/// fast transients have died out.
class SlowManifoldPropagator {
 public:
  SlowManifoldPropagator(const SlowModes& modes, const DensityMatrix& rho, double t0);

  DensityMatrix at(double t) const;
  /// Relative norm of the part of the state outside the slow span at t0.
  double projection_residual() const noexcept { return residual_; }

 private:
  SpaceLayout layout_;
  std::vector<Complex> eigenvalues_;
  std::vector<ComplexMatrix> modes_;
  Eigen::VectorXcd coeffs_;
  double t0_;
  double residual_;
};

}  // namespace ringqed
