#include "oddsrank/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "oddsrank/csv.hpp"
#include "oddsrank/types.hpp"

namespace oddsrank::cli {

std::string num(double value, int precision) {
  if (!std::isfinite(value)) return value > 0 ? "inf" : (value < 0 ? "-inf" : "nan");
  if (value == 0.0) value = 0.0;  // drop the sign of negative zero
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, value);
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

std::string num(std::optional<int> value) { return value ? std::to_string(*value) : ""; }

CsvDocument::CsvDocument(const std::vector<std::string>& header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) text_ += ',';
    text_ += csv::escape(header[i]);
  }
  text_ += '\n';
}

void CsvDocument::add(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) throw std::logic_error("CSV row width mismatch");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) text_ += ',';
    text_ += csv::escape(fields[i]);
  }
  text_ += '\n';
  ++rows_;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr double kWidth = 640, kHeight = 480, kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd"};

std::string header(std::string_view title) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth, 0) +
                  "\" height=\"" + num(kHeight, 0) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kWidth / 2, 1) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
       xml_escape(title) + "</text>\n";
  return s;
}

std::string axis_labels(std::string_view x_label, std::string_view y_label) {
  std::string s;
  if (!x_label.empty())
    s += "<text x=\"" + num(kLeft + (kWidth - kLeft - kRight) / 2, 1) + "\" y=\"" +
         num(kHeight - 12, 1) + "\" text-anchor=\"middle\">" + xml_escape(x_label) + "</text>\n";
  const double cy = kTop + (kHeight - kTop - kBottom) / 2;
  s += "<text x=\"18\" y=\"" + num(cy, 1) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
       num(cy, 1) + ")\">" + xml_escape(y_label) + "</text>\n";
  return s;
}

}  // namespace

std::string svg_scatter(const std::vector<ScatterPoint>& points, std::string_view title,
                        std::string_view x_label, std::string_view y_label) {
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + std::clamp(x, 0.0, 1.0) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - std::clamp(y, 0.0, 1.0)) * ph; };
  std::string s = header(title);
  s += "<rect x=\"" + num(kLeft, 1) + "\" y=\"" + num(kTop, 1) + "\" width=\"" + num(pw, 1) +
       "\" height=\"" + num(ph, 1) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double t = i / 4.0;
    s += "<text x=\"" + num(px(t), 1) + "\" y=\"" + num(kTop + ph + 16, 1) +
         "\" text-anchor=\"middle\">" + num(t, 2) + "</text>\n";
    s += "<text x=\"" + num(kLeft - 6, 1) + "\" y=\"" + num(py(t) + 4, 1) +
         "\" text-anchor=\"end\">" + num(t, 2) + "</text>\n";
  }
  s += "<line x1=\"" + num(px(0), 1) + "\" y1=\"" + num(py(0), 1) + "\" x2=\"" + num(px(1), 1) +
       "\" y2=\"" + num(py(1), 1) + "\" stroke=\"grey\" stroke-dasharray=\"4 4\"/>\n";
  for (const auto& p : points)
    s += "<circle cx=\"" + num(px(p.x), 2) + "\" cy=\"" + num(py(p.y), 2) + "\" r=\"3\" fill=\"" +
         (p.highlighted ? "black" : kPalette[0]) + "\" fill-opacity=\"0.7\"/>\n";
  s += axis_labels(x_label, y_label);
  s += "</svg>\n";
  return s;
}

std::string svg_bars(const std::vector<std::string>& categories,
                     const std::vector<BarSeries>& series, std::string_view title,
                     std::string_view y_label) {
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  double top = 0.0, bottom = 0.0;
  for (const auto& ser : series)
    for (double v : ser.values) {
      top = std::max(top, v);
      bottom = std::min(bottom, v);
    }
  if (top == bottom) top = bottom + 1.0;
  auto py = [&](double v) { return kTop + (top - v) / (top - bottom) * ph; };
  std::string s = header(title);
  s += "<line x1=\"" + num(kLeft, 1) + "\" y1=\"" + num(py(0), 1) + "\" x2=\"" + num(kLeft + pw, 1) +
       "\" y2=\"" + num(py(0), 1) + "\" stroke=\"black\"/>\n";
  const double group = categories.empty() ? pw : pw / static_cast<double>(categories.size());
  const double bar = series.empty() ? 0.0 : group * 0.8 / static_cast<double>(series.size());
  for (std::size_t c = 0; c < categories.size(); ++c) {
    const double gx = kLeft + group * static_cast<double>(c) + group * 0.1;
    for (std::size_t k = 0; k < series.size(); ++k) {
      const double v = c < series[k].values.size() ? series[k].values[c] : 0.0;
      const double y0 = py(std::max(v, 0.0)), y1 = py(std::min(v, 0.0));
      s += "<rect x=\"" + num(gx + bar * static_cast<double>(k), 2) + "\" y=\"" + num(y0, 2) +
           "\" width=\"" + num(bar, 2) + "\" height=\"" + num(y1 - y0, 2) + "\" fill=\"" +
           kPalette[k % 5] + "\"/>\n";
    }
    const double cx = gx + group * 0.4;
    s += "<text x=\"" + num(cx, 1) + "\" y=\"" + num(kTop + ph + 14, 1) +
         "\" text-anchor=\"end\" font-size=\"10\" transform=\"rotate(-30 " + num(cx, 1) + " " +
         num(kTop + ph + 14, 1) + ")\">" + xml_escape(categories[c]) + "</text>\n";
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double ly = kTop + 14.0 * static_cast<double>(k);
    s += "<rect x=\"" + num(kWidth - 150, 1) + "\" y=\"" + num(ly, 1) +
         "\" width=\"10\" height=\"10\" fill=\"" + kPalette[k % 5] + "\"/>\n";
    s += "<text x=\"" + num(kWidth - 135, 1) + "\" y=\"" + num(ly + 9, 1) + "\">" +
         xml_escape(series[k].name) + "</text>\n";
  }
  s += "<text x=\"" + num(kLeft - 6, 1) + "\" y=\"" + num(py(top) + 4, 1) + "\" text-anchor=\"end\">" +
       num(top, 2) + "</text>\n";
  s += "<text x=\"" + num(kLeft - 6, 1) + "\" y=\"" + num(py(bottom) + 4, 1) +
       "\" text-anchor=\"end\">" + num(bottom, 2) + "</text>\n";
  s += axis_labels("", y_label);
  s += "</svg>\n";
  return s;
}

}  // namespace oddsrank::cli
