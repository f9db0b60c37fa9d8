#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace oddsrank {

using Date = std::chrono::sys_days;
using PlayerIndex = std::size_t;

enum class Surface { Hard = 0, Clay = 1, Grass = 2, Carpet = 3 };
inline constexpr std::size_t kSurfaceCount = 4;
inline constexpr std::array<Surface, kSurfaceCount> kAllSurfaces = {
    Surface::Hard, Surface::Clay, Surface::Grass, Surface::Carpet};

enum class Tour { ATP, WTA };

/// Number of sets in a match; only best-of-3 and best-of-5 exist.
enum class BestOf { Three = 3, Five = 5 };

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string_view to_string(Surface s);
std::string_view to_string(Tour t);
std::optional<Surface> parse_surface(std::string_view text);
std::optional<Tour> parse_tour(std::string_view text);
std::optional<BestOf> parse_best_of(std::string_view text);
inline int set_count(BestOf fmt) { return static_cast<int>(fmt); }

/// Accepts DD/MM/YYYY, YYYY-MM-DD and YYYY-MM-DD HH:MM:SS (time ignored).
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date d);
/// Whole days from `from` to `to` (negative if `to` is earlier).
inline long days_between(Date from, Date to) { return (to - from).count(); }
inline int year_of(Date d) {
  return static_cast<int>(std::chrono::year_month_day{d}.year());
}

}  // namespace oddsrank
