#pragma once

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ringqed/experiment.hpp"

namespace ringqed::detail {

using Json = nlohmann::ordered_json;

struct PointResult {
  std::vector<std::vector<double>> rows;
  Json summary = Json::object();
};

struct PointTask {
  /// Leading column values, reused for the NaN row emitted on failure.
  std::vector<double> axis;
  std::function<PointResult()> compute;
};

struct Plan {
  std::vector<std::string> columns;
  std::vector<PointTask> tasks;
  Json settings = Json::object();
};

Plan plan_steady(const ExperimentConfig& c);
Plan plan_sweep(const ExperimentConfig& c);
Plan plan_dynamics(const ExperimentConfig& c);
Plan plan_g2(const ExperimentConfig& c);
Plan plan_preset(const ExperimentConfig& c);

Json params_to_json(const SystemParams& p);
Json config_to_json(const ExperimentConfig& c);

const std::vector<std::string>& param_names();
/// Throws ValidationError for an unknown name.
void set_param(SystemParams& p, std::string_view name, double value);

/// |a - b| / |b|, or |a| when b vanishes.
double rel_dev(double numeric, double oracle);

}  // namespace ringqed::detail
