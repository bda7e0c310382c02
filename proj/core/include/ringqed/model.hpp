#pragma once

#include <string>
#include <vector>

#include "ringqed/operators.hpp"

namespace ringqed {

/// Rates in units of the cavity linewidth kappa.
struct SystemParams {
  double kappa = 1.0;
  double gamma = 10.0;
  double Delta = 200.0;
  double g = 0.5;
  double Omega = 20.0;
  double delta = 0.0;
  double J = 0.0;
  double phi = 0.0;

  double omega_eff() const;
  /// Throws ValidationError for kappa <= 0 or non-finite values.
  void validate() const;
  bool is_dispersive() const;
  /// validate() plus a warning outside the dispersive regime.
  void check() const;

  bool operator==(const SystemParams&) const = default;
};

enum class ModelKind { full_lab, effective_sa, external_only };

struct Jump {
  Operator op;
  double rate;
};

using JumpList = std::vector<Jump>;

SpaceLayout build_space(ModelKind kind, std::size_t n_max = 2);

/// Basis index of |internal, external, n1, n2> in a photon-bearing layout.
std::size_t basis_index(const SpaceLayout& layout, std::size_t internal, std::size_t external,
                        std::size_t n1, std::size_t n2);

Operator full_hamiltonian(const SystemParams& p, const SpaceLayout& space);
JumpList collapse_operators(const SystemParams& p, const SpaceLayout& space);

Operator effective_hamiltonian(const SystemParams& p, const SpaceLayout& space);
/// Cavity losses of the effective model: a_S and a_A at rate kappa.
JumpList effective_collapse_operators(const SystemParams& p, const SpaceLayout& space);
Operator parity_operator(const SpaceLayout& space);

/// Basis permutation of the full model swapping L with R and CW with CCW.
/// The Hamiltonian and the loss channels are invariant under it.
std::vector<std::size_t> mirror_permutation(const SpaceLayout& space);

enum class TransformKind { photon, external };

struct BasisTransform {
  /// Columns are the new basis vectors written in the source basis.
  Operator unitary;
  SpaceLayout target;
};

/// Unitary U with O_new = U^dag O U. The photon transform maps CW/CCW to S/A
/// exactly on every total-photon sector below the truncation.
BasisTransform basis_transform(TransformKind which, const SpaceLayout& space);
Operator transform(const Operator& op, const BasisTransform& t);
DensityMatrix transform(const DensityMatrix& rho, const BasisTransform& t);

struct ExternalGenerator {
  Operator hamiltonian;
  JumpList jumps;
};

/// Hamiltonian -J sz + J+ |+><+| + J- |-><-| with jumps |-><+| at Gamma+ and
/// |+><-| at Gamma-.
ExternalGenerator external_generator(const SystemParams& p, const SpaceLayout& space);

}  // namespace ringqed
