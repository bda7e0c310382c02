#include "ringqed/correlation.hpp"

#include "ringqed/errors.hpp"
#include "ringqed/observables.hpp"

namespace ringqed {

namespace {

constexpr double min_occupation = 1e-12;

const Operator& mode_operator(const PhotonProbe& probe, Mode mode) {
  return mode == Mode::CW ? probe.a_CW() : probe.a_CCW();
}

}  // namespace

std::string_view to_string(Mode m) { return m == Mode::CW ? "CW" : "CCW"; }

std::vector<double> default_tau_grid() {
  std::vector<double> grid(400);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = 12.0 * static_cast<double>(i) / 399.0;
  return grid;
}

G2Series g2_numeric(const LindbladGenerator& gen, const DensityMatrix& rho_ss, Mode mode,
                    const std::vector<double>& tau_grid, const G2Options& options) {
  if (tau_grid.empty() || tau_grid.front() != 0.0) throw ValidationError("tau grid must start at 0");
  const PhotonProbe probe(rho_ss.layout());
  const ComplexMatrix& a = mode_operator(probe, mode).matrix();
  const ComplexMatrix n_op = a.adjoint() * a;
  const double n = (n_op.cwiseProduct(rho_ss.matrix().transpose())).sum().real();
  if (!(n > min_occupation)) {
    throw UnmeasurableModeError("mode " + std::string(to_string(mode)) + " is empty (n = " +
                                std::to_string(n) + ")");
  }
  const DensityMatrix conditional(rho_ss.layout(), hermitian_part(a * rho_ss.matrix() * a.adjoint() / n));

  G2Series out;
  out.mode = mode;
  out.tau.reserve(tau_grid.size());
  out.values.reserve(tau_grid.size());
  EvolutionSpec spec{tau_grid, options.rtol, options.atol};
  evolve(conditional, gen, spec, [&](double t, const DensityMatrix& rho) {
    out.tau.push_back(t);
    out.values.push_back((n_op.cwiseProduct(rho.matrix().transpose())).sum().real() / n);
  });
  return out;
}

G2Series g2_numeric(const Operator& H, const JumpList& jumps, const DensityMatrix& rho_ss, Mode mode,
                    const std::vector<double>& tau_grid, const G2Options& options) {
  if (!(rho_ss.layout() == H.layout())) throw LayoutError("g2_numeric: layouts differ");
  return g2_numeric(LindbladGenerator(H, jumps), rho_ss, mode, tau_grid, options);
}

double g2_zero(const DensityMatrix& rho_ss, Mode mode) {
  const PhotonProbe probe(rho_ss.layout());
  const ComplexMatrix& a = mode_operator(probe, mode).matrix();
  const ComplexMatrix n_op = a.adjoint() * a;
  const double n = (n_op.cwiseProduct(rho_ss.matrix().transpose())).sum().real();
  if (!(n > min_occupation)) throw UnmeasurableModeError("mode is empty");
  const ComplexMatrix pairs = a.adjoint() * a.adjoint() * a * a;
  return (pairs.cwiseProduct(rho_ss.matrix().transpose())).sum().real() / (n * n);
}

}  // namespace ringqed
