#include "ringqed/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <span>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "experiment_internal.hpp"
#include "ringqed/diagnostics.hpp"
#include "ringqed/errors.hpp"
#include "ringqed/lindblad.hpp"
#include "ringqed/observables.hpp"

namespace ringqed {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

template <class E>
struct Named {
  E value;
  std::string_view name;
};

constexpr Named<Preset> preset_names[] = {
    {Preset::fig3, "fig3"},   {Preset::fig4a, "fig4a"}, {Preset::fig4b, "fig4b"},
    {Preset::fig4d, "fig4d"}, {Preset::fig5c, "fig5c"}, {Preset::figA5, "figA5"},
    {Preset::figA6, "figA6"}};

bool uses_correlations(const ExperimentConfig& c) {
  if (c.command == Command::g2) return true;
  return c.preset && (*c.preset == Preset::fig4a || *c.preset == Preset::fig4b ||
                      *c.preset == Preset::fig4d);
}

detail::PointResult execute(const detail::PointTask& task, std::size_t width, bool& failed) {
  try {
    detail::PointResult r = task.compute();
    for (const auto& row : r.rows) {
      if (row.size() != width) throw std::logic_error("row width differs from column count");
    }
    return r;
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    failed = true;
    warn(std::string("grid point failed: ") + e.what());
    detail::PointResult r;
    std::vector<double> row(width, nan);
    std::copy(task.axis.begin(), task.axis.end(), row.begin());
    r.rows.push_back(std::move(row));
    r.summary["error"] = e.what();
    return r;
  }
}

}  // namespace

std::string_view to_string(Preset p) {
  for (const auto& n : preset_names) {
    if (n.value == p) return n.name;
  }
  return "unknown";
}

std::string_view to_string(Command c) {
  switch (c) {
    case Command::steady: return "steady";
    case Command::dynamics: return "dynamics";
    case Command::g2: return "g2";
    case Command::sweep: return "sweep";
    case Command::preset: return "preset";
  }
  return "unknown";
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

std::optional<Preset> parse_preset(std::string_view name) {
  for (const auto& n : preset_names) {
    if (n.name == name) return n.value;
  }
  return std::nullopt;
}

std::optional<OutputFormat> parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  return std::nullopt;
}

const std::vector<Preset>& all_presets() {
  static const std::vector<Preset> all = [] {
    std::vector<Preset> v;
    for (const auto& n : preset_names) v.push_back(n.value);
    return v;
  }();
  return all;
}

std::size_t ExperimentConfig::resolved_n_max() const {
  if (n_max) return *n_max;
  return uses_correlations(*this) ? 3 : 2;
}

void ExperimentConfig::validate() const {
  params.validate();
  if (preset && sweep) throw ValidationError("preset and manual sweep are mutually exclusive");
  if (command == Command::preset && !preset) throw ValidationError("preset command needs a preset name");
  if (command != Command::preset && preset) throw ValidationError("preset given for a non-preset command");
  if (command == Command::sweep && !sweep) throw ValidationError("sweep command needs an axis");
  if (command != Command::sweep && sweep) throw ValidationError("sweep axis given for a non-sweep command");
  if (sweep) {
    const auto& names = detail::param_names();
    if (std::find(names.begin(), names.end(), sweep->name) == names.end()) {
      throw ValidationError("unknown sweep axis '" + sweep->name + "'");
    }
    if (sweep->values.empty()) throw ValidationError("sweep values list is empty");
    for (double v : sweep->values) {
      if (!std::isfinite(v)) throw ValidationError("sweep values must be finite");
      SystemParams probe = params;
      detail::set_param(probe, sweep->name, v);
      probe.validate();
    }
  }
  if (n_max && *n_max < 1) throw ValidationError("n_max must be at least 1");
  if (n_max && *n_max > 6) throw ValidationError("n_max above 6 is not supported");
  if (jobs < 1) throw ValidationError("jobs must be at least 1");
  if (!(rtol > 0.0 && rtol < 1.0) || !(atol > 0.0)) throw ValidationError("tolerances must be positive");
  if (!(t_max > 0.0) || !(dt > 0.0) || !std::isfinite(t_max) || dt > t_max) {
    throw ValidationError("dynamics needs 0 < dt <= t_max");
  }
  if (!(tau_max > 0.0) || !std::isfinite(tau_max) || tau_points < 2) {
    throw ValidationError("g2 needs tau_max > 0 and at least two tau points");
  }
}

std::size_t SweepTable::rows() const { return columns.empty() ? 0 : columns.front().values.size(); }

bool SweepTable::has_column(std::string_view name) const {
  return std::any_of(columns.begin(), columns.end(), [&](const Column& c) { return c.name == name; });
}

const std::vector<double>& SweepTable::column(std::string_view name) const {
  for (const auto& c : columns) {
    if (c.name == name) return c.values;
  }
  throw std::out_of_range("no column named '" + std::string(name) + "'");
}

SweepTable run(const ExperimentConfig& config) {
  config.validate();
  detail::Plan plan;
  switch (config.command) {
    case Command::steady: plan = detail::plan_steady(config); break;
    case Command::sweep: plan = detail::plan_sweep(config); break;
    case Command::dynamics: plan = detail::plan_dynamics(config); break;
    case Command::g2: plan = detail::plan_g2(config); break;
    case Command::preset: plan = detail::plan_preset(config); break;
  }

  const std::size_t width = plan.columns.size();
  std::vector<detail::PointResult> results(plan.tasks.size());
  std::vector<char> failed(plan.tasks.size(), 0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::atomic<bool> stop{false};
  auto worker = [&] {
    while (!stop) {
      const std::size_t i = next++;
      if (i >= plan.tasks.size()) return;
      try {
        bool f = false;
        results[i] = execute(plan.tasks[i], width, f);
        failed[i] = f;
      } catch (...) {
        // First fatal error wins; the others are dropped.
        if (!stop.exchange(true)) fatal = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::min<std::size_t>(config.jobs, std::max<std::size_t>(plan.tasks.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < n_threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (fatal) std::rethrow_exception(fatal);

  SweepTable table;
  for (const auto& name : plan.columns) table.columns.push_back({name, {}});
  detail::Json points = detail::Json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    for (const auto& row : results[i].rows) {
      for (std::size_t k = 0; k < width; ++k) table.columns[k].values.push_back(row[k]);
    }
    if (!results[i].summary.empty()) points.push_back(results[i].summary);
    table.failed_points += failed[i] ? 1 : 0;
  }

  detail::Json meta = detail::Json::object();
  meta["version"] = library_version();
  meta["config"] = detail::config_to_json(config);
  meta["n_max"] = config.resolved_n_max();
  meta["engine"] = {{"rtol", config.rtol},
                    {"atol", config.atol},
                    {"steady_method", "nullspace"},
                    {"degenerate_kernel", "long-time limit from ground state, mixed external, empty cavity"},
                    {"truncation_gate", config.gate}};
  for (auto& [k, v] : plan.settings.items()) meta[k] = v;
  meta["columns"] = plan.columns;
  meta["failed_points"] = table.failed_points;
  meta["points"] = std::move(points);
  table.meta = meta.dump();
  if (!config.output.empty()) write_table(table, config.output, config.format);
  return table;
}

std::string_view library_version() { return RINGQED_VERSION; }

DensityMatrix initial_left(const SpaceLayout& space) {
  return DensityMatrix::basis_state(space, basis_index(space, 0, 0, 0, 0));
}

namespace {

DensityMatrix mixed_external_start(const SpaceLayout& space) {
  const auto n = static_cast<Eigen::Index>(space.dim());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (std::size_t ext = 0; ext < 2; ++ext) {
    const auto k = static_cast<Eigen::Index>(basis_index(space, 0, ext, 0, 0));
    m(k, k) = 0.5;
  }
  return DensityMatrix(space, std::move(m));
}

// Average of rho and its image under the basis permutation.
DensityMatrix mirror_average(const DensityMatrix& rho, std::span<const std::size_t> perm) {
  const ComplexMatrix& m = rho.matrix();
  ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      out(i, j) = 0.5 * (m(i, j) + m(static_cast<Eigen::Index>(perm[i]), static_cast<Eigen::Index>(perm[j])));
  return DensityMatrix(rho.layout(), out);
}

SteadyOutcome solve_at(const SystemParams& p, std::size_t n_max, double rtol) {
  const SpaceLayout space = build_space(ModelKind::full_lab, n_max);
  const LindbladGenerator gen(full_hamiltonian(p, space), collapse_operators(p, space));
  const std::vector<std::size_t> perm = mirror_permutation(space);
  try {
    return {symmetric_steady_state(gen, perm), n_max, false, nan};
  } catch (const DegeneracyError&) {
    SteadySpec spec;
    spec.initial = mixed_external_start(space);
    spec.rtol = rtol;
    return {mirror_average(steady_state(gen, spec), perm), n_max, true, nan};
  }
}

}  // namespace

SteadyOutcome full_steady_state(const SystemParams& p, std::size_t n_max, bool gate, double rtol) {
  p.check();
  SteadyOutcome base = solve_at(p, n_max, rtol);
  if (!gate) return base;
  // Below three levels the next truncation is the check; from three on the
  // solved level is already the guard and is compared with the one below.
  const bool upward = n_max < 3;
  const double a = photon_numbers(base.rho).n_tot;
  const double b = photon_numbers(solve_at(p, upward ? n_max + 1 : n_max - 1, rtol).rho).n_tot;
  const double change = std::abs(a - b) / std::max(std::abs(upward ? a : b), 1e-300);
  if (change < 1e-3) {
    base.gate_change = change;
    return base;
  }
  warn("steady n_tot changes by " + std::to_string(change) + " when n_max is raised; escalating to n_max=" +
       std::to_string(n_max + 1));
  SteadyOutcome raised = solve_at(p, n_max + 1, rtol);
  raised.gate_change = change;
  return raised;
}

namespace detail {

const std::vector<std::string>& param_names() {
  static const std::vector<std::string> names{"kappa", "gamma", "Delta", "g", "Omega", "delta", "J", "phi"};
  return names;
}

void set_param(SystemParams& p, std::string_view name, double value) {
  if (name == "kappa") p.kappa = value;
  else if (name == "gamma") p.gamma = value;
  else if (name == "Delta") p.Delta = value;
  else if (name == "g") p.g = value;
  else if (name == "Omega") p.Omega = value;
  else if (name == "delta") p.delta = value;
  else if (name == "J") p.J = value;
  else if (name == "phi") p.phi = value;
  else throw ValidationError("unknown parameter '" + std::string(name) + "'");
}

Json params_to_json(const SystemParams& p) {
  return {{"kappa", p.kappa}, {"gamma", p.gamma}, {"Delta", p.Delta}, {"g", p.g},
          {"Omega", p.Omega}, {"delta", p.delta}, {"J", p.J},         {"phi", p.phi}};
}

Json config_to_json(const ExperimentConfig& c) {
  Json j = Json::object();
  j["command"] = to_string(c.command);
  j["preset"] = c.preset ? Json(to_string(*c.preset)) : Json(nullptr);
  j["params"] = params_to_json(c.params);
  j["n_max"] = c.resolved_n_max();
  j["sweep"] = c.sweep ? Json{{"name", c.sweep->name}, {"values", c.sweep->values}} : Json(nullptr);
  j["output"] = c.output;
  j["format"] = to_string(c.format);
  j["rtol"] = c.rtol;
  j["atol"] = c.atol;
  j["gate"] = c.gate;
  j["t_max"] = c.t_max;
  j["dt"] = c.dt;
  j["tau_max"] = c.tau_max;
  j["tau_points"] = c.tau_points;
  return j;
}

double rel_dev(double numeric, double oracle) {
  const double d = std::abs(numeric - oracle);
  return oracle == 0.0 ? d : d / std::abs(oracle);
}

}  // namespace detail

}  // namespace ringqed
