#include "oddsrank/types.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace oddsrank {
namespace {

std::string lower_trimmed(std::string_view text) {
  auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  auto end = text.find_last_not_of(" \t\r\n");
  std::string out(text.substr(begin, end - begin + 1));
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool parse_int(std::string_view text, int& out) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

std::string_view to_string(Surface s) {
  switch (s) {
    case Surface::Hard: return "Hard";
    case Surface::Clay: return "Clay";
    case Surface::Grass: return "Grass";
    case Surface::Carpet: return "Carpet";
  }
  return "?";
}

std::string_view to_string(Tour t) { return t == Tour::ATP ? "ATP" : "WTA"; }

std::optional<Surface> parse_surface(std::string_view text) {
  auto s = lower_trimmed(text);
  if (s == "hard") return Surface::Hard;
  if (s == "clay") return Surface::Clay;
  if (s == "grass") return Surface::Grass;
  if (s == "carpet") return Surface::Carpet;
  return std::nullopt;
}

std::optional<Tour> parse_tour(std::string_view text) {
  auto s = lower_trimmed(text);
  if (s == "atp") return Tour::ATP;
  if (s == "wta") return Tour::WTA;
  return std::nullopt;
}

std::optional<BestOf> parse_best_of(std::string_view text) {
  auto s = lower_trimmed(text);
  // Spreadsheet exports sometimes write "5.0".
  if (s == "3" || s == "3.0") return BestOf::Three;
  if (s == "5" || s == "5.0") return BestOf::Five;
  return std::nullopt;
}

std::optional<Date> parse_date(std::string_view text) {
  auto s = lower_trimmed(text);
  int y = 0, m = 0, d = 0;
  std::string_view v = s;
  if (v.size() >= 10 && v[4] == '-' && v[7] == '-') {
    if (!parse_int(v.substr(0, 4), y) || !parse_int(v.substr(5, 2), m) ||
        !parse_int(v.substr(8, 2), d))
      return std::nullopt;
    if (v.size() > 10 && v[10] != ' ' && v[10] != 't') return std::nullopt;
  } else {
    auto first = v.find('/');
    auto second = v.find('/', first == std::string_view::npos ? 0 : first + 1);
    if (first == std::string_view::npos || second == std::string_view::npos)
      return std::nullopt;
    if (!parse_int(v.substr(0, first), d) ||
        !parse_int(v.substr(first + 1, second - first - 1), m) ||
        !parse_int(v.substr(second + 1), y))
      return std::nullopt;
  }
  std::chrono::year_month_day ymd{std::chrono::year{y},
                                  std::chrono::month{static_cast<unsigned>(m)},
                                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || y < 1900 || y > 2999) return std::nullopt;
  return Date{ymd};
}

std::string format_date(Date d) {
  std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

}  // namespace oddsrank
