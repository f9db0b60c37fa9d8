#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oddsrank::cli {

/// Fixed-point text for a double; locale independent.
std::string num(double value, int precision = 6);
std::string num(std::optional<int> value);

/// Builds a CSV document row by row.
class CsvDocument {
 public:
  explicit CsvDocument(const std::vector<std::string>& header);
  void add(const std::vector<std::string>& fields);
  const std::string& text() const { return text_; }
  std::size_t rows() const { return rows_; }

 private:
  std::string text_;
  std::size_t columns_;
  std::size_t rows_ = 0;
};

/// Writes bytes verbatim, creating parent directories.
void write_text(const std::filesystem::path& path, std::string_view text);

struct ScatterPoint {
  double x = 0.0;
  double y = 0.0;
  bool highlighted = false;
};

/// Unit-square scatter with a dashed identity line. Highlighted points are
/// drawn black, the rest blue.
std::string svg_scatter(const std::vector<ScatterPoint>& points, std::string_view title,
                        std::string_view x_label, std::string_view y_label);

struct BarSeries {
  std::string name;
  std::vector<double> values;
};

/// Grouped vertical bars, one group per category.
std::string svg_bars(const std::vector<std::string>& categories,
                     const std::vector<BarSeries>& series, std::string_view title,
                     std::string_view y_label);

}  // namespace oddsrank::cli
