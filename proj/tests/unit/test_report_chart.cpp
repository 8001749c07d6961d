#include "helpers.hpp"

#include "sage/chart.hpp"
#include "sage/report.hpp"

#include <doctest.h>

#include <regex>

using namespace sage;

namespace {

// Bar labels in document order.
std::vector<std::string> bar_names(const std::string& svg) {
  std::vector<std::string> out;
  const std::regex re("text-anchor=\"end\" font-size=\"12\">([^<]*)</text>");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it)
    out.push_back((*it)[1]);
  return out;
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

AttributionResult sample_result() {
  AttributionResult r;
  r.feature_names = {"a", "b"};
  r.values = (VectorXd(2) << 0.25, -1.5).finished();
  r.std_error = (VectorXd(2) << 0.01, 0.125).finished();
  r.n_samples = 2048;
  r.converged = true;
  r.model_evaluations = 123456;
  r.game = "sage";
  r.loss = "mse";
  r.imputer = "marginal";
  r.seed = 9;
  return r;
}

}  // namespace

TEST_CASE("two bars: larger first, whisker at value +/- 1.96 stderr") {
  const ChartSpec spec{"Two", {{"a", 1.0, 0.1}, {"b", 2.0, 0.2}}};
  const auto [lo, hi] = whisker(spec.bars[1], spec.confidence_multiplier);
  CHECK(std::abs(lo - 1.608) < 1e-12);
  CHECK(std::abs(hi - 2.392) < 1e-12);

  const std::string svg = render_bar_chart(spec);
  CHECK(bar_names(svg) == std::vector<std::string>{"b", "a"});
  CHECK(svg.find("data-lo=\"1.608\" data-hi=\"2.392\"") < svg.find("data-lo=\"0.804\" data-hi=\"1.196\""));
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.substr(svg.size() - 7) == "</svg>\n");
}

TEST_CASE("single bar renders one bar") {
  const std::string svg = render_bar_chart({"One", {{"only", 0.5, 0.0}}});
  CHECK(count(svg, "class=\"whisker\"") == 1);
  CHECK(bar_names(svg) == std::vector<std::string>{"only"});
  CHECK_THROWS_AS(render_bar_chart({"None", {}}), Error);
}

TEST_CASE("charts are byte-identical for identical specs") {
  const ChartSpec spec{"Same <&>", {{"x\"1", 0.3, 0.01}, {"x2", -0.2, 0.05}, {"x3", 0.3, 0.0}}};
  testing::TempDir dir("chart_bytes");
  emit_chart(spec, dir / "a.svg");
  emit_chart(spec, dir / "b.svg");
  CHECK(testing::read_file(dir / "a.svg") == testing::read_file(dir / "b.svg"));
  CHECK(testing::read_file(dir / "a.svg") == render_bar_chart(spec));
  const std::string svg = render_bar_chart(spec);
  CHECK(svg.find("Same &lt;&amp;&gt;") != std::string::npos);
  // ties keep input order
  CHECK(bar_names(svg) == std::vector<std::string>{"x&quot;1", "x3", "x2"});
  CHECK_THROWS_AS(emit_chart(spec, dir / "missing" / "c.svg"), Error);
}

TEST_CASE("line, scatter and grouped charts are deterministic and well formed") {
  const std::vector<Series> series{{"sage", {{10, 0.5}, {100, 0.9}, {1000, 0.99}}}, {"shap", {{50, 0.2}, {5000, 0.98}}}};
  const std::string line = render_line_chart("curves", "evaluations", "correlation", series, true);
  CHECK(line == render_line_chart("curves", "evaluations", "correlation", series, true));
  CHECK(count(line, "<polyline") == 2);
  const std::string scatter = render_scatter("s", "u(S)", "-loss", {{1, 2}, {2, 3}, {3, 5}});
  CHECK(count(scatter, "<circle") == 3);
  const std::string grouped =
      render_grouped_bars("m", {"f1", "f2"}, {{"ref", {1, 2}, {0.1, 0.1}}, {"split", {0.5, 2}, {0.1, 0.2}}});
  CHECK(count(grouped, "class=\"whisker\"") == 4);
  for (const auto* svg : {&line, &scatter, &grouped}) CHECK(svg->substr(svg->size() - 7) == "</svg>\n");
}

TEST_CASE("attribution artifacts round-trip and validate") {
  const json j = to_json(sample_result());
  CHECK(j.at("schema") == "sage.attribution/1");
  CHECK_NOTHROW(validate_artifact(j));
  const AttributionResult back = attribution_from_json(j);
  CHECK(back.values == sample_result().values);
  CHECK(back.std_error == sample_result().std_error);
  CHECK(back.model_evaluations == 123456u);

  testing::TempDir dir("artifacts");
  write_json(j, dir / "a.json");
  write_json(j, dir / "b.json");
  CHECK(testing::read_file(dir / "a.json") == testing::read_file(dir / "b.json"));
  CHECK(read_json(dir / "a.json") == j);
  CHECK_THROWS_AS(read_json(dir / "nope.json"), Error);
  testing::write_file(dir / "bad.json", "{not json");
  CHECK_THROWS_AS(read_json(dir / "bad.json"), Error);
}

TEST_CASE("validate_artifact rejects broken documents") {
  json j = to_json(sample_result());
  json wrong = j;
  wrong["schema"] = "sage.attribution/99";
  CHECK_THROWS_AS(validate_artifact(wrong), Error);
  wrong = j;
  wrong.erase("stderr");
  CHECK_THROWS_AS(validate_artifact(wrong), Error);
  wrong = j;
  wrong["values"].push_back(1.0);
  CHECK_THROWS_AS(validate_artifact(wrong), Error);
  wrong = j;
  wrong["stderr"][0] = -1.0;
  CHECK_THROWS_AS(validate_artifact(wrong), Error);
  CHECK_THROWS_AS(validate_artifact(json::array()), Error);

  BaselineResult b;
  b.method = "mean";
  b.feature_names = {"a"};
  b.values = VectorXd::Ones(1);
  const json bj = to_json(b);
  CHECK_NOTHROW(validate_artifact(bj));
  CHECK(bj.at("stderr").is_null());
  json bad = bj;
  bad.erase("phi0");
  CHECK_THROWS_AS(validate_artifact(bad), Error);

  EfficiencyReport e;
  e.sage.push_back({10, 0.1, 0.9, 2});
  CHECK_NOTHROW(validate_artifact(to_json(e)));
  CorrelationReport c;
  c.methods.push_back({"zeros", std::nullopt, std::nullopt});
  const json cj = to_json(c);
  CHECK(cj.at("methods")[0].at("pearson").is_null());
  CHECK_NOTHROW(validate_artifact(cj));
}

TEST_CASE("synthetic specs round-trip through JSON") {
  std::vector<DiscreteOutcome> rows{{{0, 1}, 1, 0.25}, {{1, 0}, 0, 0.75}};
  for (const SyntheticSpec& spec : {SyntheticSpec{LinearGaussian{{1, -2.5}, 0.1}}, SyntheticSpec{XorBernoulli{0.3}},
                                    SyntheticSpec{DuplicatedBernoulli{0.4}}, SyntheticSpec{DiscreteJointSpec{DiscreteJoint(rows)}}}) {
    const json j = spec_to_json(spec);
    CHECK(spec_to_json(spec_from_json(j)) == j);
  }
  CHECK_THROWS_AS(spec_from_json(json{{"kind", "gamma"}}), Error);
}
