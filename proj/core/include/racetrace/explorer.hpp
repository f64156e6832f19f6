#pragma once

// Race-driven exploration: run the program once, build a race variant for
// every (receive, racer) pair, replay each variant and continue it to the
// end, and repeat on the new traces until nothing new appears.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "racetrace/program.hpp"
#include "racetrace/simulator.hpp"

namespace racetrace {

/// Which receives of a variant-descended trace are searched for new races.
enum class Harvest {
  /// Every receive.
  full,
  /// Receives of the replaced process from the replaced position on, and
  /// receives of other processes outside the replayed prefix. Cheaper, but
  /// misses races between a prefix receive and a message sent after the
  /// replaced receive.
  window,
};

struct ExploreOptions {
  std::uint64_t seed = 1;
  std::size_t max_steps = 1000;
  std::size_t max_traces = 10000;
  Harvest harvest = Harvest::full;
};

struct Origin {
  std::size_t parent;  ///< index into ExplorationReport::traces
  EventId replaced;
  Tag old_tag;
  Tag new_tag;
};

struct ExploredTrace {
  Trace trace;
  std::string key;  ///< canonical serialization
  Outcome outcome = Outcome::completed;
  std::vector<Pid> blocked;
  std::set<Tag> orphans;
  std::size_t races = 0;  ///< harvested (receive, racer) pairs
  std::optional<Origin> origin;
};

struct ExplorationReport {
  std::vector<ExploredTrace> traces;  ///< discovery order
  std::size_t variants = 0;
  std::size_t duplicate_variants = 0;
  std::size_t replays = 0;
  std::size_t divergences = 0;
  std::size_t duplicate_traces = 0;
  bool bounds_hit = false;
};

ExplorationReport explore(std::shared_ptr<const Program> program, const ExploreOptions& options = {});

/// Pairwise distinct traces, and every variant-descended trace differs from
/// its parent at the replaced receive. Returns the first violation.
std::optional<std::string> distinctness_check(const ExplorationReport& report);

/// Counts, outcomes, orphans and race statistics as text.
std::string format_report(const ExplorationReport& report);

/// Writes `trace-0001.txt`, ... and `report.txt` into `dir`, creating it.
void write_report(const ExplorationReport& report, const std::filesystem::path& dir);

}  // namespace racetrace
