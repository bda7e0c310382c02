#pragma once

#include <string_view>
#include <vector>

#include "ringqed/lindblad.hpp"
#include "ringqed/model.hpp"
#include "ringqed/operators.hpp"

namespace ringqed {

enum class Mode { CW, CCW };

std::string_view to_string(Mode m);

struct G2Series {
  std::vector<double> tau;
  std::vector<double> values;
  Mode mode = Mode::CW;
};

struct G2Options {
  double rtol = 1e-8;
  double atol = 1e-12;
};

/// 400 uniform delays on [0, 12/kappa].
std::vector<double> default_tau_grid();

/// g2(tau) = Tr[a^dag a rho'(tau)] / Tr[a^dag a rho_ss] with rho'(0) = a rho_ss a^dag / n.
G2Series g2_numeric(const Operator& H, const JumpList& jumps, const DensityMatrix& rho_ss, Mode mode,
                    const std::vector<double>& tau_grid, const G2Options& options = {});
G2Series g2_numeric(const LindbladGenerator& gen, const DensityMatrix& rho_ss, Mode mode,
                    const std::vector<double>& tau_grid, const G2Options& options = {});

/// Equal-time value from the steady state alone.
double g2_zero(const DensityMatrix& rho_ss, Mode mode);

}  // namespace ringqed
