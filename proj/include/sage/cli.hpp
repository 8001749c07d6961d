#pragma once

#include "sage/dataset.hpp"
#include "sage/model.hpp"
#include "sage/sampler.hpp"
#include "sage/synthetic.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sage {

struct DataSource {
  std::optional<std::filesystem::path> csv;
  std::string label_column;
  Task task;
  std::optional<SyntheticSpec> synthetic;
  Index n = 1000;  // synthetic sample size
};

struct ModelChoice {
  std::string type;  // linear | logistic | oracle; empty picks by task
  double ridge = kDefaultRidge;
  LogisticOptions logistic;
  std::optional<std::filesystem::path> path;  // load a saved model artifact instead
};

struct ImputerChoice {
  std::string type = "marginal";  // marginal | mean | exact_conditional
  Index background = 512;
};

// One experiment, read from a single JSON document; flags override fields.
struct RunConfig {
  DataSource data;
  SplitFractions split;
  ModelChoice model;
  std::optional<std::string> loss;
  ImputerChoice imputer;
  SamplerParams sampler;
  std::string explicand = "test";  // split the attributions average over
  std::filesystem::path out = "out";
  std::optional<std::uint64_t> seed;
  nlohmann::json baseline = nlohmann::json::object();
  nlohmann::json eval = nlohmann::json::object();
  nlohmann::json chart = nlohmann::json::object();

  // Throws Error on a missing seed, missing files or inconsistent choices.
  void validate() const;
};

RunConfig parse_run_config(const nlohmann::json& document);
RunConfig load_run_config(const std::filesystem::path& path);

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::filesystem::path> out;
  std::optional<double> threshold;
  std::optional<Index> background;
  std::optional<std::int64_t> max_permutations;

  void apply(RunConfig& config) const;
};

// Exit status: 0 success, 1 usage or configuration error, 2 non-convergence.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace sage
