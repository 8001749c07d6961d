#include "sage/report.hpp"

#include <fstream>

namespace sage {

namespace {

std::vector<double> to_vec(const VectorXd& v) { return {v.data(), v.data() + v.size()}; }

VectorXd from_vec(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const VectorXd>(v.data(), static_cast<Index>(v.size()));
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void require(const json& j, const char* key, bool ok) {
  if (!j.contains(key)) throw Error(std::string("artifact is missing field '") + key + "'");
  if (!ok) throw Error(std::string("artifact field '") + key + "' has the wrong type");
}

}  // namespace

json to_json(const AttributionResult& r) {
  return json{{"schema", kAttributionSchema},
              {"feature_names", r.feature_names},
              {"values", to_vec(r.values)},
              {"stderr", to_vec(r.std_error)},
              {"n_samples", r.n_samples},
              {"converged", r.converged},
              {"model_evaluations", r.model_evaluations},
              {"game", r.game},
              {"loss", r.loss},
              {"imputer", r.imputer},
              {"seed", r.seed}};
}

AttributionResult attribution_from_json(const json& j) {
  validate_artifact(j);
  if (j.at("schema") != kAttributionSchema) throw Error("not an attribution artifact");
  AttributionResult r;
  r.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  r.values = from_vec(j.at("values"));
  r.std_error = from_vec(j.at("stderr"));
  r.n_samples = j.at("n_samples").get<std::int64_t>();
  r.converged = j.at("converged").get<bool>();
  r.model_evaluations = j.at("model_evaluations").get<std::uint64_t>();
  r.game = j.at("game").get<std::string>();
  r.loss = j.at("loss").get<std::string>();
  r.imputer = j.at("imputer").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  return r;
}

json to_json(const BaselineResult& r) {
  json j{{"schema", kBaselineSchema},
         {"method", r.method},
         {"feature_names", r.feature_names},
         {"values", to_vec(r.values)},
         {"phi0", r.phi0},
         {"n_repeats", r.n_repeats},
         {"seed", r.seed},
         {"warnings", r.warnings}};
  j["stderr"] = r.std_error ? json(to_vec(*r.std_error)) : json(nullptr);
  return j;
}

json spec_to_json(const SyntheticSpec& spec) {
  json j{{"kind", spec_kind(spec)}};
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LinearGaussian>) {
          j["betas"] = s.betas;
          j["noise_sd"] = s.noise_sd;
        } else if constexpr (std::is_same_v<T, DiscreteJointSpec>) {
          json rows = json::array();
          for (const auto& o : s.pmf.outcomes()) rows.push_back({{"x", o.x}, {"y", o.y}, {"p", o.p}});
          j["pmf"] = rows;
        } else {
          j["p"] = s.p;
        }
      },
      spec);
  return j;
}

SyntheticSpec spec_from_json(const json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    SyntheticSpec spec;
    if (kind == "linear_gaussian") {
      spec = LinearGaussian{j.at("betas").get<std::vector<double>>(), j.value("noise_sd", 0.0)};
    } else if (kind == "duplicated_bernoulli") {
      spec = DuplicatedBernoulli{j.value("p", 0.5)};
    } else if (kind == "xor_bernoulli") {
      spec = XorBernoulli{j.value("p", 0.5)};
    } else if (kind == "discrete_joint") {
      std::vector<DiscreteOutcome> rows;
      for (const auto& r : j.at("pmf"))
        rows.push_back({r.at("x").get<std::vector<int>>(), r.at("y").get<int>(), r.at("p").get<double>()});
      spec = DiscreteJointSpec{DiscreteJoint(std::move(rows))};
    } else {
      throw Error("unknown synthetic kind '" + kind + "'");
    }
    validate_spec(spec);
    return spec;
  } catch (const json::exception& e) {
    throw Error(std::string("invalid synthetic spec: ") + e.what());
  }
}

json model_to_json(const Model& model) {
  json j{{"schema", kModelSchema}, {"kind", model.kind()}, {"task", to_string(model.task())},
         {"num_features", model.num_features()}, {"num_classes", model.task().num_classes}};
  if (const auto* lin = dynamic_cast<const LinearModel*>(&model)) {
    j["coefficients"] = to_vec(lin->coefficients());
    j["intercepts"] = std::vector<double>{lin->intercept()};
  } else if (const auto* log = dynamic_cast<const LogisticModel*>(&model)) {
    json rows = json::array();
    for (Index r = 0; r < log->weights().rows(); ++r) rows.push_back(to_vec(log->weights().row(r).transpose()));
    j["coefficients"] = rows;
    j["intercepts"] = to_vec(log->intercepts().transpose());
    j["converged"] = log->converged();
    j["iterations"] = log->iterations();
  } else if (const auto* oracle = dynamic_cast<const OracleModel*>(&model)) {
    j["spec"] = spec_to_json(oracle->truth().spec());
  } else {
    throw Error("model kind '" + model.kind() + "' cannot be serialized");
  }
  return j;
}

ModelPtr model_from_json(const json& j) {
  validate_artifact(j);
  if (j.at("schema") != kModelSchema) throw Error("not a model artifact");
  const auto kind = j.at("kind").get<std::string>();
  try {
    if (kind == "linear") {
      const auto b = j.at("intercepts").get<std::vector<double>>();
      if (b.size() != 1) throw Error("linear model needs exactly one intercept");
      return std::make_shared<LinearModel>(from_vec(j.at("coefficients")), b[0]);
    }
    if (kind == "logistic") {
      const auto rows = j.at("coefficients").get<std::vector<std::vector<double>>>();
      const auto b = j.at("intercepts").get<std::vector<double>>();
      MatrixXd w(static_cast<Index>(rows.size()), static_cast<Index>(b.size()));
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != b.size()) throw Error("logistic coefficient rows must match the class count");
        for (std::size_t c = 0; c < b.size(); ++c) w(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
      }
      RowVectorXd intercepts = from_vec(j.at("intercepts")).transpose();
      return std::make_shared<LogisticModel>(std::move(w), std::move(intercepts), j.value("converged", true),
                                             j.value("iterations", 0));
    }
    if (kind == "oracle") return oracle_model(spec_from_json(j.at("spec")));
  } catch (const json::exception& e) {
    throw Error(std::string("invalid model artifact: ") + e.what());
  }
  throw Error("unknown model kind '" + kind + "'");
}

json to_json(const CorrelationReport& r) {
  json methods = json::array();
  for (const auto& m : r.methods)
    methods.push_back({{"name", m.name}, {"pearson", optional_number(m.pearson)}, {"spearman", optional_number(m.spearman)}});
  json trials = json::array();
  for (const auto& t : r.trials) trials.push_back({{"subset", t.subset}, {"test_loss", t.test_loss}, {"totals", t.totals}});
  return json{{"schema", kEvalSchema}, {"protocol", "correlation"}, {"methods", methods},
              {"trials", trials}, {"skipped_trials", r.skipped_trials}, {"warnings", r.warnings}};
}

json to_json(const std::vector<SelectionPoint>& curve, SelectionDirection direction) {
  json points = json::array();
  for (const auto& p : curve)
    points.push_back({{"k", p.k}, {"features", p.features}, {"test_loss", p.test_loss},
                      {"accuracy", optional_number(p.accuracy)}});
  return json{{"schema", kEvalSchema}, {"protocol", "selection"},
              {"direction", direction == SelectionDirection::top ? "top" : "bottom"}, {"points", points}};
}

json to_json(const MonitorReport& r) {
  json splits = json::array();
  for (const auto& s : r.splits)
    splits.push_back({{"name", s.name}, {"result", to_json(s.result)}, {"deltas", to_vec(s.deltas)}, {"flagged", s.flagged}});
  return json{{"schema", kEvalSchema}, {"protocol", "monitor"}, {"flag_multiplier", r.flag_multiplier},
              {"reference", to_json(r.reference)}, {"splits", splits}};
}

json to_json(const EfficiencyReport& r) {
  const auto curve = [](const std::vector<CurvePoint>& c) {
    json out = json::array();
    for (const auto& p : c)
      out.push_back({{"model_evaluations", p.model_evaluations}, {"budget", p.budget}, {"mse", p.mse},
                     {"correlation", optional_number(p.correlation)}});
    return out;
  };
  return json{{"schema", kEvalSchema}, {"protocol", "efficiency"}, {"sage", curve(r.sage)},
              {"mean_shap", curve(r.shap)}, {"shap_permutations_per_row", r.shap_permutations_per_row}};
}

void validate_artifact(const json& j) {
  if (!j.is_object()) throw Error("artifact is not a JSON object");
  require(j, "schema", j.contains("schema") && j["schema"].is_string());
  const auto schema = j["schema"].get<std::string>();
  const auto is_number_array = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_array()) return false;
    for (const auto& v : j[key])
      if (!v.is_number()) return false;
    return true;
  };
  if (schema == kAttributionSchema) {
    require(j, "feature_names", j.contains("feature_names") && j["feature_names"].is_array());
    require(j, "values", is_number_array("values"));
    require(j, "stderr", is_number_array("stderr"));
    require(j, "n_samples", j.contains("n_samples") && j["n_samples"].is_number_integer());
    require(j, "converged", j.contains("converged") && j["converged"].is_boolean());
    require(j, "model_evaluations", j.contains("model_evaluations") && j["model_evaluations"].is_number_integer());
    for (const char* key : {"game", "loss", "imputer"}) require(j, key, j.contains(key) && j[key].is_string());
    require(j, "seed", j.contains("seed") && j["seed"].is_number_integer());
    const auto d = j["feature_names"].size();
    if (j["values"].size() != d || j["stderr"].size() != d)
      throw Error("attribution artifact: values/stderr length differs from feature_names");
    for (const auto& s : j["stderr"])
      if (s.get<double>() < 0.0) throw Error("attribution artifact: negative stderr");
    if (j["n_samples"].get<std::int64_t>() < 1) throw Error("attribution artifact: n_samples must be >= 1");
  } else if (schema == kBaselineSchema) {
    require(j, "method", j.contains("method") && j["method"].is_string());
    require(j, "feature_names", j.contains("feature_names") && j["feature_names"].is_array());
    require(j, "values", is_number_array("values"));
    require(j, "phi0", j.contains("phi0") && j["phi0"].is_number());
    if (j["values"].size() != j["feature_names"].size())
      throw Error("baseline artifact: values length differs from feature_names");
  } else if (schema == kModelSchema) {
    require(j, "kind", j.contains("kind") && j["kind"].is_string());
    require(j, "task", j.contains("task") && j["task"].is_string());
    require(j, "num_features", j.contains("num_features") && j["num_features"].is_number_integer());
  } else if (schema == kEvalSchema) {
    require(j, "protocol", j.contains("protocol") && j["protocol"].is_string());
  } else {
    throw Error("unknown artifact schema '" + schema + "'");
  }
}

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error("failed writing " + path.string());
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string() + " (file not found)");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error("invalid JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace sage
