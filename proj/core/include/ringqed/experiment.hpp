#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ringqed/model.hpp"
#include "ringqed/operators.hpp"

namespace ringqed {

enum class Preset { fig3, fig4a, fig4b, fig4d, fig5c, figA5, figA6 };
enum class Command { steady, dynamics, g2, sweep, preset };
enum class OutputFormat { csv, json };

std::string_view library_version();

std::string_view to_string(Preset p);
std::string_view to_string(Command c);
std::string_view to_string(OutputFormat f);
std::optional<Preset> parse_preset(std::string_view name);
std::optional<OutputFormat> parse_format(std::string_view name);
const std::vector<Preset>& all_presets();

struct SweepAxis {
  /// One of kappa, gamma, Delta, g, Omega, delta, J, phi.
  std::string name;
  std::vector<double> values;
};

struct ExperimentConfig {
  Command command = Command::steady;
  std::optional<Preset> preset;
  SystemParams params;
  /// Fock truncation; 3 for correlation work and 2 otherwise when unset.
  std::optional<std::size_t> n_max;
  std::optional<SweepAxis> sweep;
  /// Empty means no file is written.
  std::string output;
  OutputFormat format = OutputFormat::csv;
  unsigned jobs = 1;
  double rtol = 1e-8;
  double atol = 1e-10;
  /// Raise n_max by one and compare n_tot before trusting a steady state.
  bool gate = true;

  double t_max = 40.0;
  double dt = 0.05;
  double tau_max = 12.0;
  std::size_t tau_points = 400;

  /// Throws ValidationError.
  void validate() const;
  std::size_t resolved_n_max() const;
};

/// Reads a flat JSON object whose keys are the ExperimentConfig field names.
/// Rate parameters live under "params". Unknown keys are rejected.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(std::string_view json_text);

struct Column {
  std::string name;
  std::vector<double> values;
};

struct SweepTable {
  std::vector<Column> columns;
  /// Serialized JSON object: resolved config, tolerances, version, per-point summaries.
  std::string meta;
  /// Grid points whose numeric solve failed; their rows hold NaN.
  std::size_t failed_points = 0;

  std::size_t rows() const;
  /// Throws std::out_of_range for an unknown name.
  const std::vector<double>& column(std::string_view name) const;
  bool has_column(std::string_view name) const;
};

SweepTable run(const ExperimentConfig& config);

std::string format_csv(const SweepTable& table);
std::string format_json(const SweepTable& table);
/// Writes through a temporary file in the same directory and renames it into place.
void write_table(const SweepTable& table, const std::string& path, OutputFormat format);

struct SteadyOutcome {
  DensityMatrix rho;
  std::size_t n_max;
  /// The Liouvillian kernel was degenerate; rho is the long-time limit of the
  /// reference start state.
  bool degenerate = false;
  /// Relative n_tot change seen by the truncation gate; NaN when not checked.
  double gate_change;
};

/// Full-model steady state. A degenerate kernel is resolved by taking the
/// long-time limit from the atomic ground state with the external state
/// maximally mixed and the cavity empty.
SteadyOutcome full_steady_state(const SystemParams& p, std::size_t n_max, bool gate,
                                double rtol = 1e-8);

/// |g, L, 0, 0> in the full model.
DensityMatrix initial_left(const SpaceLayout& space);

}  // namespace ringqed
