#include "sage/cli.hpp"

#include "sage/baselines.hpp"
#include "sage/chart.hpp"
#include "sage/evalsuite.hpp"
#include "sage/imputer.hpp"
#include "sage/report.hpp"
#include "sage/stats.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

namespace sage {

namespace fs = std::filesystem;

namespace {

template <typename T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    throw Error(std::string("config field '") + key + "' has the wrong type");
  }
}

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

}  // namespace

RunConfig parse_run_config(const json& doc) {
  if (!doc.is_object()) throw Error("config must be a JSON object");
  RunConfig c;
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer() || doc["seed"].get<std::int64_t>() < 0)
      throw Error("config field 'seed' must be a non-negative integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }

  const json data = field(doc, "data", json::object());
  if (data.contains("csv")) {
    c.data.csv = fs::path(field<std::string>(data, "csv", ""));
    c.data.label_column = field<std::string>(data, "label", "y");
    c.data.task = parse_task(field<std::string>(data, "task", "regression"), field(data, "num_classes", 0));
  } else if (data.contains("synthetic")) {
    c.data.synthetic = spec_from_json(data["synthetic"]);
    c.data.n = field<Index>(data, "n", 1000);
  } else {
    throw Error("config 'data' needs either 'csv' or 'synthetic'");
  }

  const json sp = field(doc, "split", json::object());
  c.split = {field(sp, "train", 0.8), field(sp, "val", 0.1), field(sp, "test", 0.1)};

  const json m = doc.contains("model") && doc["model"].is_string() ? json{{"type", doc["model"]}}
                                                                     : field(doc, "model", json::object());
  c.model.type = field<std::string>(m, "type", "");
  c.model.ridge = field(m, "ridge", kDefaultRidge);
  c.model.logistic.l2 = field(m, "l2", c.model.logistic.l2);
  c.model.logistic.max_iter = field(m, "max_iter", c.model.logistic.max_iter);
  c.model.logistic.tol = field(m, "tol", c.model.logistic.tol);
  if (m.contains("path")) c.model.path = fs::path(field<std::string>(m, "path", ""));

  if (doc.contains("loss")) c.loss = field<std::string>(doc, "loss", "");

  const json imp = doc.contains("imputer") && doc["imputer"].is_string() ? json{{"type", doc["imputer"]}}
                                                                         : field(doc, "imputer", json::object());
  c.imputer.type = field<std::string>(imp, "type", "marginal");
  c.imputer.background = field<Index>(imp, "background", 512);

  const json s = field(doc, "sampler", json::object());
  c.sampler.threshold = field(s, "threshold", c.sampler.threshold);
  c.sampler.max_permutations = field(s, "max_permutations", c.sampler.max_permutations);
  c.sampler.min_permutations = field(s, "min_permutations", c.sampler.min_permutations);
  c.sampler.check_interval = field(s, "check_interval", c.sampler.check_interval);
  c.sampler.workers = field(doc, "workers", 1);

  c.explicand = field<std::string>(doc, "explicand", "test");
  c.out = fs::path(field<std::string>(doc, "out", "out"));
  c.baseline = field(doc, "baseline", json::object());
  c.eval = field(doc, "eval", json::object());
  c.chart = field(doc, "chart", json::object());
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  if (!fs::exists(path)) throw Error("config file not found: " + path.string());
  return parse_run_config(read_json(path));
}

void RunConfig::validate() const {
  if (!seed) throw Error("a seed is required (config field 'seed' or --seed)");
  if (data.csv && !fs::exists(*data.csv)) throw Error("data file not found: " + data.csv->string());
  if (model.path && !fs::exists(*model.path)) throw Error("model file not found: " + model.path->string());
  if (data.synthetic && data.n < 2) throw Error("synthetic sample size must be at least 2");
  for (double f : {split.train, split.val, split.test})
    if (f < 0.0) throw Error("split fractions must be non-negative");
  if (split.train + split.val + split.test > 1.0 + 1e-12) throw Error("split fractions sum to more than 1");
  if (!model.type.empty() && model.type != "linear" && model.type != "logistic" && model.type != "oracle")
    throw Error("unknown model type '" + model.type + "' (expected linear, logistic or oracle)");
  if (model.type == "oracle" && !data.synthetic) throw Error("the oracle model needs a synthetic data source");
  if (imputer.type != "marginal" && imputer.type != "mean" && imputer.type != "exact_conditional")
    throw Error("unknown imputer '" + imputer.type + "' (expected marginal, mean or exact_conditional)");
  if (imputer.type == "exact_conditional" && !data.synthetic)
    throw Error("the exact_conditional imputer needs a synthetic data source");
  if (imputer.background < 1) throw Error("background size must be positive");
  if (explicand != "train" && explicand != "val" && explicand != "test" && explicand != "all")
    throw Error("explicand must be one of train, val, test, all");
  if (loss) LossFunction::parse(*loss);
  sampler.validate();
}

void CliOverrides::apply(RunConfig& config) const {
  if (seed) config.seed = *seed;
  if (workers) config.sampler.workers = *workers;
  if (out) config.out = *out;
  if (threshold) config.sampler.threshold = *threshold;
  if (background) config.imputer.background = *background;
  if (max_permutations) {
    // a cap below the configured floor lowers the floor rather than failing
    config.sampler.max_permutations = *max_permutations;
    config.sampler.min_permutations = std::min(config.sampler.min_permutations, *max_permutations);
  }
}

namespace {

// Everything a command needs once the config has been realized.
struct Session {
  RunConfig config;
  std::uint64_t seed = 0;
  Dataset data;
  DataSplit parts;
  std::optional<GroundTruth> truth;
  LossFunction loss;
  Trainer trainer;
  ModelPtr model;
  ImputerPtr imputer;
  Dataset explicand;
};

Trainer trainer_for(const RunConfig& c, const Task& task) {
  const std::string type = c.model.type.empty() || c.model.type == "oracle"
                               ? (task.is_classification() ? "logistic" : "linear")
                               : c.model.type;
  if (type == "logistic") {
    if (!task.is_classification()) throw Error("logistic model needs a classification task");
    return logistic_trainer(c.model.logistic);
  }
  if (task.is_classification()) throw Error("linear model needs a regression task");
  return linear_trainer(c.model.ridge);
}

Session open_session(const RunConfig& config) {
  config.validate();
  Session s;
  s.config = config;
  s.seed = *config.seed;
  if (config.data.synthetic) {
    auto sample = generate_synthetic(*config.data.synthetic, config.data.n, derive_seed(s.seed, 1));
    s.data = std::move(sample.data);
    s.truth.emplace(std::move(sample.truth));
  } else {
    s.data = load_csv(*config.data.csv, config.data.label_column, config.data.task);
  }
  s.parts = split(s.data, config.split, derive_seed(s.seed, 2));
  if (s.parts.train.rows() < 1) throw Error("the training split is empty");

  s.loss = config.loss ? LossFunction::parse(*config.loss)
                       : (s.data.task.is_classification() ? LossFunction::cross_entropy() : LossFunction::mse());
  if (!s.loss.compatible_with(s.data.task))
    throw Error("loss '" + s.loss.name() + "' does not fit a " + to_string(s.data.task) + " task");

  s.trainer = trainer_for(config, s.data.task);
  if (config.model.path) {
    s.model = model_from_json(read_json(*config.model.path));
    if (s.model->num_features() != s.data.cols())
      throw Error("saved model expects " + std::to_string(s.model->num_features()) + " features, data has " +
                  std::to_string(s.data.cols()));
    if (!(s.model->task() == s.data.task)) throw Error("saved model task does not match the data");
  } else if (config.model.type == "oracle") {
    s.model = oracle_model(config.data.synthetic.value());
  } else {
    s.model = s.trainer(s.parts.train);
  }

  if (config.imputer.type == "marginal") {
    s.imputer = std::make_shared<MarginalImputer>(
        draw_background(s.parts.train, config.imputer.background, derive_seed(s.seed, 3)));
  } else if (config.imputer.type == "mean") {
    s.imputer = std::make_shared<MeanImputer>(MeanImputer::from_data(s.parts.train));
  } else {
    s.imputer = std::make_shared<ConditionalImputer>(*s.truth);
  }

  if (config.explicand == "train") s.explicand = s.parts.train;
  else if (config.explicand == "val") s.explicand = s.parts.val;
  else if (config.explicand == "test") s.explicand = s.parts.test;
  else s.explicand = s.data;
  if (s.explicand.rows() < 1) throw Error("the '" + config.explicand + "' split is empty");
  return s;
}

SamplerParams sampler_params(const Session& s) {
  SamplerParams p = s.config.sampler;
  p.seed = s.seed;
  return p;
}

fs::path prepare_out(const Session& s) {
  fs::create_directories(s.config.out);
  return s.config.out;
}

ChartSpec chart_from(const std::string& title, const std::vector<std::string>& names, const VectorXd& values,
                     const std::optional<VectorXd>& se) {
  ChartSpec spec;
  spec.title = title;
  for (Index i = 0; i < values.size(); ++i)
    spec.bars.push_back({names[static_cast<std::size_t>(i)], values(i), se ? (*se)(i) : 0.0});
  return spec;
}

int cmd_run(const Session& s, std::ostream& out) {
  const fs::path dir = prepare_out(s);
  const AttributionResult result = sample_sage(*s.model, *s.imputer, s.explicand, s.loss, sampler_params(s));
  write_json(to_json(result), dir / "sage.json");
  write_json(model_to_json(*s.model), dir / "model.json");
  emit_chart(chart_from("SAGE values (" + result.loss + ", " + result.imputer + " imputer)", result.feature_names,
                        result.values, result.std_error),
             dir / "sage.svg");
  out << "wrote " << (dir / "sage.json").string() << " (" << result.n_samples << " permutations, "
      << (result.converged ? "converged" : "not converged") << ")\n";
  return result.converged ? 0 : 2;
}

BaselineResult compute_baseline(const Session& s, const std::string& method) {
  const int repeats = field(s.config.baseline, "n_repeats", 10);
  const std::uint64_t seed = derive_seed(s.seed, 4);
  if (method == "ablation") return feature_ablation(s.trainer, s.parts.train, s.explicand, s.loss);
  if (method == "permutation") return permutation_test(*s.model, s.explicand, s.loss, repeats, seed);
  if (method == "conditional_permutation") {
    if (!s.truth)
      throw Error("conditional_permutation is only supported for synthetic data sources, since it needs the "
                  "true conditional distribution p(x_i | x_-i)");
    return conditional_permutation_test(*s.model, s.explicand, *s.truth, s.loss, repeats, seed);
  }
  if (method == "mean") return mean_importance(*s.model, s.explicand, s.loss);
  if (method == "univariate") return univariate_scores(s.trainer, s.parts.train, s.explicand, s.loss);
  if (method == "correlation") return squared_correlation(s.parts.train);
  throw Error("unknown baseline method '" + method + "'; valid methods: " + join(baseline_methods()));
}

void check_method(const std::string& method) {
  const auto& names = baseline_methods();
  if (std::find(names.begin(), names.end(), method) == names.end())
    throw Error("unknown baseline method '" + method + "'; valid methods: " + join(names));
}

int cmd_baseline(const Session& s, const std::string& method, std::ostream& out) {
  const BaselineResult result = compute_baseline(s, method);
  const fs::path dir = prepare_out(s);
  const fs::path stem = dir / ("baseline_" + method);
  write_json(to_json(result), stem.string() + ".json");
  emit_chart(chart_from("Baseline: " + method, result.feature_names, result.values, result.std_error),
             stem.string() + ".svg");
  out << "wrote " << stem.string() << ".json\n";
  return 0;
}

AttributionResult sage_for_eval(const Session& s) {
  return sample_sage(*s.model, *s.imputer, s.explicand, s.loss, sampler_params(s));
}

int eval_correlation(const Session& s, const fs::path& dir) {
  const json& e = s.config.eval;
  const AttributionResult sage = sage_for_eval(s);
  std::vector<ImportanceVector> methods{{"sage", sage.values, 0.0}};
  std::vector<std::string> names = field(e, "methods", std::vector<std::string>{});
  if (names.empty()) {
    for (const auto& m : baseline_methods())
      if (m != "conditional_permutation" || s.truth) names.push_back(m);
  }
  for (const auto& m : names) {
    check_method(m);
    const BaselineResult b = compute_baseline(s, m);
    methods.push_back({m, b.values, b.phi0});
  }
  const CorrelationReport report = subset_retraining_correlation(
      s.trainer, s.parts.train, s.explicand, s.loss, methods, field(e, "n_subsets", 500), derive_seed(s.seed, 5));
  json j = to_json(report);
  json importance = json::array();
  for (const auto& m : methods)
    importance.push_back({{"name", m.name}, {"values", std::vector<double>(m.values.data(), m.values.data() + m.values.size())},
                          {"phi0", m.phi0}});
  j["importance"] = importance;
  write_json(j, dir / "eval_correlation.json");
  std::vector<std::pair<double, double>> points;
  for (const auto& t : report.trials) points.emplace_back(t.totals.front(), -t.test_loss);
  write_text(render_scatter("Subset retraining: SAGE proxy vs performance", "sum of SAGE values over subset",
                            "negative test loss", points),
             dir / "eval_correlation.svg");
  return 0;
}

int eval_selection(const Session& s, const fs::path& dir) {
  const json& e = s.config.eval;
  const AttributionResult sage = sage_for_eval(s);
  const auto ranking = ranking_from_values(sage.values);
  std::vector<int> ks = field(e, "ks", std::vector<int>{});
  if (ks.empty())
    for (int k = 1; k <= s.data.cols(); ++k) ks.push_back(k);
  const auto top = feature_selection_curves(s.trainer, s.parts.train, s.explicand, s.loss, ranking, ks,
                                            SelectionDirection::top);
  const auto bottom = feature_selection_curves(s.trainer, s.parts.train, s.explicand, s.loss, ranking, ks,
                                               SelectionDirection::bottom);
  json j{{"schema", kEvalSchema},
         {"protocol", "selection"},
         {"ranking", ranking},
         {"values", to_json(sage).at("values")},
         {"top", to_json(top, SelectionDirection::top).at("points")},
         {"bottom", to_json(bottom, SelectionDirection::bottom).at("points")}};
  write_json(j, dir / "eval_selection.json");
  const auto series = [](const std::string& name, const std::vector<SelectionPoint>& c) {
    Series out{name, {}};
    for (const auto& p : c) out.points.emplace_back(p.k, p.test_loss);
    return out;
  };
  write_text(render_line_chart("Feature selection by SAGE ranking", "features kept (k)", "test loss",
                               {series("most important first", top), series("least important first", bottom)}),
             dir / "eval_selection.svg");
  return 0;
}

Index feature_index(const Dataset& data, const json& f) {
  if (f.is_number_integer()) return f.get<Index>();
  if (f.is_string()) {
    const auto name = f.get<std::string>();
    const auto it = std::find(data.feature_names.begin(), data.feature_names.end(), name);
    if (it == data.feature_names.end()) throw Error("unknown feature '" + name + "' in corrupted split");
    return it - data.feature_names.begin();
  }
  throw Error("corrupted split needs a 'feature' name or index");
}

int eval_monitor(const Session& s, const fs::path& dir) {
  const json splits = field(s.config.eval, "corrupted", json::array());
  if (!splits.is_array() || splits.empty())
    throw Error("protocol monitor needs at least one entry in eval.corrupted");
  std::vector<CorruptedSplit> corrupted;
  for (const auto& c : splits) {
    if (!c.is_object() || !c.contains("feature")) throw Error("corrupted split needs a 'feature'");
    const Index f = feature_index(s.explicand, c["feature"]);
    ColumnTransform t;
    std::string what;
    if (c.contains("shift")) {
      t = ColumnTransform::shift(c["shift"].get<double>());
      what = "shift";
    } else if (c.contains("scale")) {
      t = ColumnTransform::scale(c["scale"].get<double>());
      what = "scale";
    } else {
      throw Error("corrupted split needs 'shift' or 'scale'");
    }
    const std::string name =
        field<std::string>(c, "name", what + "_" + s.explicand.feature_names.at(static_cast<std::size_t>(f)));
    corrupted.push_back({name, corrupt_feature(s.explicand, f, t)});
  }
  const MonitorReport report = monitor_corruption(*s.model, *s.imputer, s.loss, s.explicand, corrupted, sampler_params(s));
  write_json(to_json(report), dir / "eval_monitor.json");
  const auto as_vec = [](const VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  std::vector<BarGroupSeries> series{{"reference", as_vec(report.reference.values), as_vec(report.reference.std_error)}};
  for (const auto& m : report.splits) series.push_back({m.name, as_vec(m.result.values), as_vec(m.result.std_error)});
  write_text(render_grouped_bars("SAGE values under corruption", s.explicand.feature_names, series),
             dir / "eval_monitor.svg");
  return 0;
}

int eval_efficiency(const Session& s, const fs::path& dir) {
  const json e = field(s.config.eval, "efficiency", json::object());
  SamplerParams ref = sampler_params(s);
  ref.threshold = field(e, "reference_threshold", 0.01);
  ref.seed = derive_seed(s.seed, 6);
  const AttributionResult reference = sample_sage(*s.model, *s.imputer, s.explicand, s.loss, ref);

  EfficiencyOptions o;
  o.sage_permutations = field(e, "sage_permutations", o.sage_permutations);
  o.shap_rows = field(e, "shap_rows", o.shap_rows);
  o.pilot_rows = field(e, "pilot_rows", o.pilot_rows);
  o.seed = s.seed;
  o.workers = s.config.sampler.workers;
  const json pi = field(e, "per_instance", json::object());
  o.per_instance.threshold = field(pi, "threshold", s.config.sampler.threshold);
  o.per_instance.min_permutations = field<std::int64_t>(pi, "min_permutations", 256);
  o.per_instance.max_permutations = field<std::int64_t>(pi, "max_permutations", 1 << 16);
  o.per_instance.check_interval = field<std::int64_t>(pi, "check_interval", 64);
  o.per_instance.validate();
  const EfficiencyReport report = efficiency_comparison(*s.model, *s.imputer, s.explicand, s.loss, reference, o);
  json j = to_json(report);
  j["reference"] = to_json(reference);
  write_json(j, dir / "eval_efficiency.json");
  const auto series = [](const std::string& name, const std::vector<CurvePoint>& c) {
    Series out{name, {}};
    for (const auto& p : c) out.points.emplace_back(static_cast<double>(p.model_evaluations), p.correlation.value_or(0.0));
    return out;
  };
  write_text(render_line_chart("Convergence to the reference SAGE values", "model evaluations",
                               "correlation with reference", {series("SAGE sampler", report.sage),
                                                              series("mean per-instance SHAP", report.shap)},
                               true),
             dir / "eval_efficiency.svg");
  return 0;
}

int cmd_eval(const Session& s, const std::string& protocol, std::ostream& out) {
  if (protocol != "correlation" && protocol != "selection" && protocol != "monitor" && protocol != "efficiency")
    throw Error("unknown protocol '" + protocol + "'; valid protocols: correlation, selection, monitor, efficiency");
  if (protocol == "monitor") {
    const json c = field(s.config.eval, "corrupted", json::array());
    if (!c.is_array() || c.empty()) throw Error("protocol monitor needs at least one entry in eval.corrupted");
  }
  const fs::path dir = prepare_out(s);
  int code = 0;
  if (protocol == "correlation") code = eval_correlation(s, dir);
  else if (protocol == "selection") code = eval_selection(s, dir);
  else if (protocol == "monitor") code = eval_monitor(s, dir);
  else code = eval_efficiency(s, dir);
  out << "wrote " << (dir / ("eval_" + protocol + ".json")).string() << '\n';
  return code;
}

// Renders a bar chart from an attribution or baseline artifact.
int cmd_chart(const fs::path& input, const fs::path& out_dir, std::optional<std::string> title, std::ostream& out) {
  const json j = read_json(input);
  validate_artifact(j);
  const auto schema = j.at("schema").get<std::string>();
  if (schema != kAttributionSchema && schema != kBaselineSchema)
    throw Error("chart needs an attribution or baseline artifact, got '" + schema + "'");
  const auto names = j.at("feature_names").get<std::vector<std::string>>();
  const auto values = j.at("values").get<std::vector<double>>();
  std::optional<VectorXd> se;
  if (j.contains("stderr") && j["stderr"].is_array()) {
    const auto v = j["stderr"].get<std::vector<double>>();
    se = Eigen::Map<const VectorXd>(v.data(), static_cast<Index>(v.size()));
  }
  const VectorXd vals = Eigen::Map<const VectorXd>(values.data(), static_cast<Index>(values.size()));
  if (!title) title = schema == kAttributionSchema ? "SAGE values" : "Baseline: " + j.value("method", std::string("?"));
  fs::create_directories(out_dir);
  const fs::path target = out_dir / (input.stem().string() + ".svg");
  emit_chart(chart_from(*title, names, vals, se), target);
  out << "wrote " << target.string() << '\n';
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Global feature importance with SAGE"};
  app.require_subcommand(1);

  std::string config_path;
  CliOverrides overrides;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out_dir;
  double threshold = 0.0;
  Index background = 0;
  std::int64_t max_perms = 0;
  std::string method, protocol, input, title;

  const auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* c = cmd->add_option("--config", config_path, "JSON experiment config");
    if (needs_config) c->required();
    cmd->add_option("--seed", seed, "random seed (overrides config)");
    cmd->add_option("--workers", workers, "worker threads; never changes results")->check(CLI::PositiveNumber);
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--threshold", threshold, "convergence threshold t");
    cmd->add_option("--background", background, "marginal imputer background size")->check(CLI::PositiveNumber);
    cmd->add_option("--max-perms", max_perms, "maximum permutations")->check(CLI::PositiveNumber);
  };
  auto* run = app.add_subcommand("run", "compute SAGE values, write sage.json, sage.svg, model.json");
  add_common(run, true);
  auto* baseline = app.add_subcommand("baseline", "compute a baseline importance method");
  add_common(baseline, true);
  baseline->add_option("--method", method, "one of: " + join(baseline_methods()));
  auto* eval = app.add_subcommand("eval", "run an evaluation protocol");
  add_common(eval, true);
  eval->add_option("--protocol", protocol, "correlation, selection, monitor or efficiency");
  auto* chart = app.add_subcommand("chart", "render a bar chart from a result artifact");
  add_common(chart, false);
  chart->add_option("--input", input, "attribution or baseline JSON artifact");
  chart->add_option("--title", title, "chart title");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    if (cmd->count("--seed")) overrides.seed = seed;
    if (cmd->count("--workers")) overrides.workers = workers;
    if (cmd->count("--out")) overrides.out = fs::path(out_dir);
    if (cmd->count("--threshold")) overrides.threshold = threshold;
    if (cmd->count("--background")) overrides.background = background;
    if (cmd->count("--max-perms")) overrides.max_permutations = max_perms;

    if (cmd == chart) {
      RunConfig config;
      if (!config_path.empty()) config = load_run_config(config_path);
      overrides.apply(config);
      if (input.empty()) input = field<std::string>(config.chart, "input", "");
      if (input.empty()) throw Error("chart needs --input or chart.input in the config");
      std::optional<std::string> t;
      if (!title.empty()) t = title;
      else if (config.chart.contains("title")) t = field<std::string>(config.chart, "title", "");
      return cmd_chart(input, config.out, t, out);
    }

    RunConfig config = load_run_config(config_path);
    overrides.apply(config);
    if (cmd == baseline) {
      if (method.empty()) method = field<std::string>(config.baseline, "method", "");
      if (method.empty()) throw Error("baseline needs --method; valid methods: " + join(baseline_methods()));
      check_method(method);
      if (method == "conditional_permutation" && !config.data.synthetic)
        throw Error("conditional_permutation is only supported for synthetic data sources, since it needs the "
                    "true conditional distribution p(x_i | x_-i)");
    }
    if (cmd == eval) {
      if (protocol.empty()) protocol = field<std::string>(config.eval, "protocol", "");
      if (protocol.empty()) throw Error("eval needs --protocol (correlation, selection, monitor or efficiency)");
    }
    const Session session = open_session(config);
    if (cmd == run) return cmd_run(session, out);
    if (cmd == baseline) return cmd_baseline(session, method, out);
    return cmd_eval(session, protocol, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace sage
