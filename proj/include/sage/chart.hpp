#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace sage {

struct ChartBar {
  std::string name;
  double value = 0.0;
  double std_error = 0.0;
};

struct ChartSpec {
  std::string title;
  std::vector<ChartBar> bars;
  double confidence_multiplier = 1.96;
  std::string value_label = "Importance";
};

// value -/+ multiplier * stderr
std::pair<double, double> whisker(const ChartBar& bar, double multiplier);

// Horizontal bars sorted by decreasing value, with confidence whiskers.
std::string render_bar_chart(const ChartSpec& spec);
void emit_chart(const ChartSpec& spec, const std::filesystem::path& path);

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

std::string render_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                              const std::vector<Series>& series, bool log_x = false);

std::string render_scatter(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<std::pair<double, double>>& points);

struct BarGroupSeries {
  std::string name;
  std::vector<double> values;
  std::vector<double> std_errors;
};

// One group per category, one bar per series within each group.
std::string render_grouped_bars(const std::string& title, const std::vector<std::string>& categories,
                                const std::vector<BarGroupSeries>& series, double multiplier = 1.96);

void write_text(const std::string& text, const std::filesystem::path& path);

}  // namespace sage
