#include <charconv>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "ringqed/errors.hpp"
#include "ringqed/experiment.hpp"

namespace {

constexpr int exit_validation = 2;
constexpr int exit_convergence = 3;

struct Overrides {
  std::optional<double> kappa, gamma, Delta, g, Omega, delta, J, phi;
  std::optional<std::size_t> n_max;
  std::optional<double> rtol, atol;
  std::optional<std::string> out, format;
  std::optional<unsigned> jobs;
  bool no_gate = false;
  std::optional<double> t_max, dt, tau_max;
  std::optional<std::size_t> tau_points;
};

std::vector<double> parse_range(const std::string& spec) {
  // start:stop:count, endpoints included
  double a = 0, b = 0;
  std::size_t n = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(spec);
  if (!(in >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || n == 0 || !in.eof()) {
    throw ringqed::ValidationError("range must look like start:stop:count");
  }
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = n == 1 ? a : a + (b - a) * double(k) / double(n - 1);
  return v;
}

void apply(const Overrides& o, ringqed::ExperimentConfig& c) {
  auto set = [](const std::optional<double>& v, double& dst) {
    if (v) dst = *v;
  };
  set(o.kappa, c.params.kappa);
  set(o.gamma, c.params.gamma);
  set(o.Delta, c.params.Delta);
  set(o.g, c.params.g);
  set(o.Omega, c.params.Omega);
  set(o.delta, c.params.delta);
  set(o.J, c.params.J);
  set(o.phi, c.params.phi);
  set(o.rtol, c.rtol);
  set(o.atol, c.atol);
  set(o.t_max, c.t_max);
  set(o.dt, c.dt);
  set(o.tau_max, c.tau_max);
  if (o.n_max) c.n_max = o.n_max;
  if (o.out) c.output = *o.out;
  if (o.format) {
    const auto f = ringqed::parse_format(*o.format);
    if (!f) throw ringqed::ValidationError("format must be csv or json");
    c.format = *f;
  }
  if (o.jobs) c.jobs = *o.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : *o.jobs;
  if (o.tau_points) c.tau_points = *o.tau_points;
  if (o.no_gate) c.gate = false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lindblad simulator for an atom in a double well inside a two-mode ring cavity"};
  app.set_version_flag("--version", std::string(ringqed::library_version()));
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; flags override its values")->check(CLI::ExistingFile);
  app.add_option("--kappa", o.kappa, "cavity linewidth (sets the unit)");
  app.add_option("--gamma", o.gamma, "atomic decay rate");
  app.add_option("--Delta,--atom-detuning", o.Delta, "atomic detuning");
  app.add_option("--g", o.g, "single-photon coupling");
  app.add_option("--omega", o.Omega, "pump Rabi frequency");
  app.add_option("--delta", o.delta, "cavity detuning");
  app.add_option("--j", o.J, "tunneling amplitude");
  app.add_option("--phi", o.phi, "well-spacing phase");
  app.add_option("--nmax", o.n_max, "Fock truncation per mode");
  app.add_option("--rtol", o.rtol, "integrator relative tolerance");
  app.add_option("--atol", o.atol, "integrator absolute tolerance");
  app.add_option("--out", o.out, "output file (atomic write)");
  app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--jobs", o.jobs, "worker threads, 0 for all cores");
  app.add_flag("--no-gate", o.no_gate, "skip the truncation check on steady states");

  auto* steady = app.add_subcommand("steady", "steady-state photon numbers, populations and g2(0)");
  auto* dynamics = app.add_subcommand("dynamics", "evolution from |g, L, 0, 0>");
  dynamics->add_option("--tmax", o.t_max, "final time");
  dynamics->add_option("--dt", o.dt, "sampling step");
  auto* g2 = app.add_subcommand("g2", "intensity correlation g2(tau) of both modes");
  g2->add_option("--tau-max", o.tau_max, "largest delay");
  g2->add_option("--tau-points", o.tau_points, "number of delays");
  auto* sweep = app.add_subcommand("sweep", "steady state along one parameter axis");
  std::string axis, values, range;
  sweep->add_option("--axis", axis, "kappa, gamma, Delta, g, Omega, delta, J or phi");
  auto* values_opt = sweep->add_option("--values", values, "comma-separated axis values");
  auto* range_opt = sweep->add_option("--range", range, "start:stop:count");
  values_opt->excludes(range_opt);
  auto* preset = app.add_subcommand("preset", "reproduce one figure's data table");
  std::string preset_name;
  std::string names;
  for (auto p : ringqed::all_presets()) names += (names.empty() ? "" : ", ") + std::string(ringqed::to_string(p));
  preset->add_option("name", preset_name, names)->required();
  auto* run = app.add_subcommand("run", "run a --config file as written");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_validation;
  }

  try {
    ringqed::ExperimentConfig c = config_path.empty() ? ringqed::ExperimentConfig{} : ringqed::load_config(config_path);
    if (run->parsed() && config_path.empty()) throw ringqed::ValidationError("run needs --config");
    if (!run->parsed()) c.preset.reset();
    if (!run->parsed() && !sweep->parsed()) c.sweep.reset();
    if (steady->parsed()) c.command = ringqed::Command::steady;
    if (dynamics->parsed()) c.command = ringqed::Command::dynamics;
    if (g2->parsed()) c.command = ringqed::Command::g2;
    if (sweep->parsed()) c.command = ringqed::Command::sweep;
    if (sweep->parsed() && (!values.empty() || !range.empty())) {
      if (axis.empty()) throw ringqed::ValidationError("sweep needs --axis");
      ringqed::SweepAxis a{axis, {}};
      if (!range.empty()) {
        a.values = parse_range(range);
      } else {
        std::stringstream ss(values);
        std::string item;
        while (std::getline(ss, item, ',')) {
          double v = 0;
          const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
          if (r.ec != std::errc() || r.ptr != item.data() + item.size()) {
            throw ringqed::ValidationError("bad sweep value '" + item + "'");
          }
          a.values.push_back(v);
        }
      }
      c.sweep = std::move(a);
    }
    if (preset->parsed()) {
      c.command = ringqed::Command::preset;
      c.preset = ringqed::parse_preset(preset_name);
      if (!c.preset) throw ringqed::ValidationError("unknown preset '" + preset_name + "'; choose from " + names);
    }
    apply(o, c);

    const ringqed::SweepTable table = ringqed::run(c);
    if (c.output.empty()) {
      std::cout << (c.format == ringqed::OutputFormat::csv ? ringqed::format_csv(table) : ringqed::format_json(table));
    } else {
      std::cerr << "wrote " << table.rows() << " rows to " << c.output << "\n";
    }
    if (table.failed_points > 0) {
      std::cerr << table.failed_points << " grid point(s) failed to converge\n";
      return exit_convergence;
    }
    return 0;
  } catch (const ringqed::ValidationError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return exit_validation;
  } catch (const ringqed::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_convergence;
  }
}
