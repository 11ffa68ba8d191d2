#include <algorithm>
#include <string>

#include "arh1/errors.hpp"
#include "arh1/harness.hpp"

namespace arh1 {

using nlohmann::json;

std::string to_string(EstimatorKind kind) {
  return kind == EstimatorKind::classical ? "classical" : "bayes";
}

EstimatorKind estimator_from_string(const std::string& name) {
  if (name == "classical") return EstimatorKind::classical;
  if (name == "bayes" || name == "bayes_minus") return EstimatorKind::bayes_minus;
  throw ValidationError("unknown estimator '" + name + "'");
}

std::string to_string(RhoMode mode) {
  switch (mode) {
    case RhoMode::redraw_per_replication: return "redraw";
    case RhoMode::fixed_draw: return "fixed";
    case RhoMode::explicit_values: return "explicit";
  }
  return "redraw";
}

RhoMode rho_mode_from_string(const std::string& name) {
  if (name == "redraw" || name == "redraw_per_replication") return RhoMode::redraw_per_replication;
  if (name == "fixed" || name == "fixed_draw") return RhoMode::fixed_draw;
  if (name == "explicit") return RhoMode::explicit_values;
  throw ValidationError("unknown rho mode '" + name + "' (expected redraw, fixed or explicit)");
}

SpectralModelSpec ExperimentConfig::model() const {
  SpectralModelSpec spec = example == 0 ? custom.value() : SpectralModelSpec::example(example);
  spec.rho_mode = rho_mode;
  if (rho_mode == RhoMode::explicit_values) spec.rho_values = rho_values;
  return spec;
}

TruncationRule ExperimentConfig::truncation() const {
  if (kT_rule) return *kT_rule;
  return example == 3 ? TruncationRule::power(4.1) : TruncationRule::fixed(5);
}

std::string ExperimentConfig::example_label() const {
  return example == 0 ? "custom" : std::to_string(example);
}

void ExperimentConfig::validate() const {
  if (example < 0 || example > 3) throw ValidationError("example must be 1, 2, 3 or custom");
  if (example == 0 && !custom) throw ValidationError("custom example needs a model specification");
  if (T_grid.empty()) throw ValidationError("T grid is empty");
  for (std::size_t i = 0; i < T_grid.size(); ++i) {
    if (T_grid[i] < 1) throw ValidationError("T values must be >= 1");
    if (i > 0 && T_grid[i] <= T_grid[i - 1]) throw ValidationError("T grid must be strictly increasing");
  }
  if (N < 1) throw ValidationError("N must be >= 1");
  if (formats.empty()) throw ValidationError("at least one output format is required");
  truncation().validate();
  if (rho_mode == RhoMode::explicit_values && rho_values.empty()) {
    throw ValidationError("explicit rho mode needs rho values");
  }
  SpectralModelSpec spec = model();
  std::size_t max_kT = 0;
  for (std::size_t T : T_grid) max_kT = std::max(max_kT, truncation_order(T, truncation()));
  spec.k_max = max_kT;
  spec.validate();
}

json model_to_json(const SpectralModelSpec& spec) {
  json law;
  if (spec.law.kind == EigenvalueLaw::Kind::power_law) {
    law = {{"kind", "power_law"}, {"exponent", spec.law.exponent}};
  } else {
    law = {{"kind", "explicit"}, {"values", spec.law.values}};
  }
  json prior = spec.prior.uses_default_rule() ? json("default") : json{{"a", spec.prior.a}, {"b", spec.prior.b}};
  json out = {{"k_max", spec.k_max}, {"law", law}, {"prior", prior}, {"rho_mode", to_string(spec.rho_mode)}};
  if (!spec.rho_values.empty()) out["rho_values"] = spec.rho_values;
  return out;
}

SpectralModelSpec model_from_json(const json& j) {
  SpectralModelSpec spec;
  spec.k_max = j.value("k_max", std::size_t{64});
  const json& law = j.at("law");
  const std::string kind = law.at("kind").get<std::string>();
  if (kind == "power_law") {
    spec.law = EigenvalueLaw::power_law(law.at("exponent").get<double>());
  } else if (kind == "explicit") {
    spec.law = EigenvalueLaw::explicit_list(law.at("values").get<std::vector<double>>());
  } else {
    throw ValidationError("unknown eigenvalue law '" + kind + "'");
  }
  if (j.contains("prior") && !j["prior"].is_string()) {
    spec.prior = PriorSpec::explicit_params(j["prior"].at("a").get<std::vector<double>>(),
                                            j["prior"].at("b").get<std::vector<double>>());
  }
  if (j.contains("rho_mode")) spec.rho_mode = rho_mode_from_string(j["rho_mode"].get<std::string>());
  if (j.contains("rho_values")) spec.rho_values = j["rho_values"].get<std::vector<double>>();
  return spec;
}

json config_to_json(const ExperimentConfig& config) {
  json formats = json::array();
  for (OutputFormat f : config.formats) formats.push_back(f == OutputFormat::csv ? "csv" : "json");
  json out = {
      {"example", config.example == 0 ? json("custom") : json(config.example)},
      {"T_grid", config.T_grid},
      {"N", config.N},
      {"kT_rule", config.truncation().to_string()},
      {"seed", config.seed},
      {"rho_mode", to_string(config.rho_mode)},
      {"output_dir", config.output_dir.string()},
      {"formats", formats},
      {"workers", config.workers},
  };
  if (config.custom) out["custom"] = model_to_json(*config.custom);
  if (!config.rho_values.empty()) out["rho_values"] = config.rho_values;
  return out;
}

ExperimentConfig config_from_json(const json& j) {
  try {
    ExperimentConfig config;
    if (j.contains("example")) {
      const json& ex = j["example"];
      config.example = ex.is_string() && ex.get<std::string>() == "custom" ? 0
                       : ex.is_string() ? std::stoi(ex.get<std::string>())
                                        : ex.get<int>();
    }
    if (j.contains("custom")) config.custom = model_from_json(j["custom"]);
    if (j.contains("T_grid")) config.T_grid = j["T_grid"].get<std::vector<std::size_t>>();
    if (j.contains("N")) config.N = j["N"].get<std::size_t>();
    if (j.contains("kT_rule")) config.kT_rule = TruncationRule::parse(j["kT_rule"].get<std::string>());
    if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("rho_mode")) config.rho_mode = rho_mode_from_string(j["rho_mode"].get<std::string>());
    if (j.contains("rho_values")) config.rho_values = j["rho_values"].get<std::vector<double>>();
    if (j.contains("output_dir")) config.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("formats")) {
      config.formats.clear();
      for (const auto& f : j["formats"]) {
        const std::string name = f.get<std::string>();
        if (name == "csv") config.formats.push_back(OutputFormat::csv);
        else if (name == "json") config.formats.push_back(OutputFormat::json);
        else throw ValidationError("unknown output format '" + name + "'");
      }
    }
    if (j.contains("workers")) config.workers = j["workers"].get<std::size_t>();
    return config;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed experiment config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    if (dynamic_cast<const ValidationError*>(&e) != nullptr) throw;
    throw ValidationError(std::string("malformed experiment config: ") + e.what());
  }
}

}  // namespace arh1
