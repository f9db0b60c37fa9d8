#pragma once

#include <iosfwd>
#include <vector>

#include "oddsrank/cli/config.hpp"

namespace oddsrank::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNotConverged = 4;

/// Records of one tour from every configured file, merged and deduplicated.
/// Row warnings go to `warnings` as (file, row, message).
struct LoadedTour {
  Tour tour = Tour::ATP;
  std::vector<MatchRecord> records;
  std::size_t duplicates = 0;
};
LoadedTour load_tour(const RunConfig& cfg, Tour tour, std::ostream& err,
                     std::vector<std::vector<std::string>>& warnings);

/// Each command validates the config, writes its files under
/// cfg.output_dir and returns an exit code. Exceptions are left to the
/// caller, which maps them to exit codes.
int cmd_rank(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_predict(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_tune(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_anomalies(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int run_command(Command cmd, const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace oddsrank::cli
