#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include "experiment_internal.hpp"
#include "ringqed/errors.hpp"

namespace ringqed {

namespace {

using detail::Json;

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

std::string json_number(double v) { return std::isfinite(v) ? number(v) : "null"; }

Json parse_meta(const SweepTable& t) {
  return t.meta.empty() ? Json::object() : Json::parse(t.meta);
}

}  // namespace

std::string format_csv(const SweepTable& table) {
  std::string out;
  const Json meta = parse_meta(table);
  for (auto it = meta.begin(); it != meta.end(); ++it) out += "# " + it.key() + ": " + it.value().dump() + "\n";
  for (std::size_t k = 0; k < table.columns.size(); ++k) {
    out += (k ? "," : "") + table.columns[k].name;
  }
  out += "\n";
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t k = 0; k < table.columns.size(); ++k) {
      if (k) out += ",";
      out += number(table.columns[k].values.at(r));
    }
    out += "\n";
  }
  return out;
}

std::string format_json(const SweepTable& table) {
  std::string out = "{\"meta\":" + parse_meta(table).dump() + ",\"columns\":{";
  for (std::size_t k = 0; k < table.columns.size(); ++k) {
    if (k) out += ",";
    out += Json(table.columns[k].name).dump() + ":[";
    const auto& v = table.columns[k].values;
    for (std::size_t r = 0; r < v.size(); ++r) {
      if (r) out += ",";
      out += json_number(v[r]);
    }
    out += "]";
  }
  out += "}}\n";
  return out;
}

void write_table(const SweepTable& table, const std::string& path, OutputFormat format) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const std::string text = format == OutputFormat::csv ? format_csv(table) : format_json(table);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f << text;
    f.flush();
    if (!f) throw Error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot move output into place: " + ec.message());
  }
}

ExperimentConfig parse_config(std::string_view json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");

  ExperimentConfig c;
  auto number_of = [](const Json& v, const std::string& key) {
    if (!v.is_number()) throw ValidationError("config field '" + key + "' must be a number");
    return v.get<double>();
  };
  auto count_of = [](const Json& v, const std::string& key) {
    if (!v.is_number_unsigned()) throw ValidationError("config field '" + key + "' must be a non-negative integer");
    return v.get<std::size_t>();
  };
  auto string_of = [](const Json& v, const std::string& key) {
    if (!v.is_string()) throw ValidationError("config field '" + key + "' must be a string");
    return v.get<std::string>();
  };

  for (const auto& [key, v] : j.items()) {
    if (key == "command") {
      const std::string s = string_of(v, key);
      bool found = false;
      for (Command cmd : {Command::steady, Command::dynamics, Command::g2, Command::sweep, Command::preset}) {
        if (to_string(cmd) == s) {
          c.command = cmd;
          found = true;
        }
      }
      if (!found) throw ValidationError("unknown command '" + s + "'");
    } else if (key == "preset") {
      if (v.is_null()) continue;
      const auto p = parse_preset(string_of(v, key));
      if (!p) throw ValidationError("unknown preset '" + v.get<std::string>() + "'");
      c.preset = p;
    } else if (key == "params") {
      if (!v.is_object()) throw ValidationError("config field 'params' must be an object");
      for (const auto& [name, value] : v.items()) detail::set_param(c.params, name, number_of(value, name));
    } else if (key == "n_max") {
      c.n_max = count_of(v, key);
    } else if (key == "sweep") {
      if (v.is_null()) continue;
      if (!v.is_object() || !v.contains("name") || !v.contains("values") || v.size() != 2) {
        throw ValidationError("config field 'sweep' must be {\"name\": ..., \"values\": [...]}");
      }
      SweepAxis axis{string_of(v["name"], "sweep.name"), {}};
      if (!v["values"].is_array()) throw ValidationError("sweep values must be an array");
      for (const auto& x : v["values"]) axis.values.push_back(number_of(x, "sweep.values"));
      c.sweep = std::move(axis);
    } else if (key == "output") {
      c.output = string_of(v, key);
    } else if (key == "format") {
      const auto f = parse_format(string_of(v, key));
      if (!f) throw ValidationError("format must be csv or json");
      c.format = *f;
    } else if (key == "jobs") {
      c.jobs = static_cast<unsigned>(count_of(v, key));
    } else if (key == "rtol") {
      c.rtol = number_of(v, key);
    } else if (key == "atol") {
      c.atol = number_of(v, key);
    } else if (key == "gate") {
      if (!v.is_boolean()) throw ValidationError("config field 'gate' must be a boolean");
      c.gate = v.get<bool>();
    } else if (key == "t_max") {
      c.t_max = number_of(v, key);
    } else if (key == "dt") {
      c.dt = number_of(v, key);
    } else if (key == "tau_max") {
      c.tau_max = number_of(v, key);
    } else if (key == "tau_points") {
      c.tau_points = count_of(v, key);
    } else {
      throw ValidationError("unknown config field '" + key + "'");
    }
  }
  if (c.preset && !j.contains("command")) c.command = Command::preset;
  if (c.sweep && !j.contains("command")) c.command = Command::sweep;
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot read config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace ringqed
