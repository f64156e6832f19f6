#include "racetrace/explorer.hpp"

#include <cstdio>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>

#include "racetrace/races.hpp"
#include "racetrace/trace_format.hpp"

namespace racetrace {

namespace {

struct Pending {
  std::size_t index;            ///< trace to harvest
  std::optional<Trace> prefix;  ///< the variant it descends from
};

bool in_window(const EventId& receive, const Pending& item, const ExploredTrace& t) {
  if (!item.prefix || !t.origin) return true;
  const EventId& replaced = t.origin->replaced;
  if (receive.pid == replaced.pid) return receive.index >= replaced.index;
  return receive.index >= item.prefix->of(receive.pid).size();
}

}  // namespace

ExplorationReport explore(std::shared_ptr<const Program> program, const ExploreOptions& options) {
  ExplorationReport report;
  std::map<std::string, std::size_t> known;
  std::set<std::string> tried;
  std::deque<Pending> queue;

  auto record = [&](Run run, std::optional<Origin> origin) -> std::optional<std::size_t> {
    std::string key = serialize_trace(run.trace);
    if (known.contains(key)) {
      ++report.duplicate_traces;
      return std::nullopt;
    }
    ExploredTrace t;
    t.orphans = orphans(run.trace);
    t.trace = std::move(run.trace);
    t.key = key;
    t.outcome = run.outcome;
    t.blocked = std::move(run.blocked);
    t.origin = std::move(origin);
    known.emplace(std::move(key), report.traces.size());
    report.traces.push_back(std::move(t));
    return report.traces.size() - 1;
  };

  record(run_random(program, options.seed, options.max_steps), std::nullopt);
  queue.push_back(Pending{0, std::nullopt});

  while (!queue.empty()) {
    Pending item = std::move(queue.front());
    queue.pop_front();
    const Trace parent = report.traces[item.index].trace;
    for (const auto& race : all_races(parent)) {
      if (options.harvest == Harvest::window &&
          !in_window(race.receive, item, report.traces[item.index])) {
        continue;
      }
      for (const auto& racer : race.racers) {
        ++report.traces[item.index].races;
        if (report.traces.size() >= options.max_traces) {
          report.bounds_hit = true;
          continue;
        }
        Variant v = make_variant(parent, race.subject, racer);
        ++report.variants;
        if (!tried.insert(serialize_trace(v.trace)).second) {
          ++report.duplicate_variants;
          continue;
        }
        ++report.replays;
        std::optional<Replay> replay;
        try {
          replay.emplace(replay_prefix(program, v.trace));
        } catch (const Divergence&) {
          ++report.divergences;
          continue;
        }
        Run run = run_to_completion(std::move(replay->state), options.max_steps);
        auto index = record(std::move(run), Origin{item.index, v.replaced, v.old_tag, v.new_tag});
        if (index) queue.push_back(Pending{*index, std::move(v.trace)});
      }
    }
  }
  return report;
}

std::optional<std::string> distinctness_check(const ExplorationReport& report) {
  const auto& ts = report.traces;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (std::size_t j = i + 1; j < ts.size(); ++j) {
      if (ts[i].trace == ts[j].trace) {
        return "traces " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
               " are equal\nkey " + std::to_string(i + 1) + ":\n" + ts[i].key + "key " +
               std::to_string(j + 1) + ":\n" + ts[j].key;
      }
    }
  }
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!ts[i].origin) continue;
    const Origin& o = *ts[i].origin;
    const Trace& parent = ts.at(o.parent).trace;
    const Trace& child = ts[i].trace;
    std::string name = "trace " + std::to_string(i + 1);
    if (child == parent) return name + " equals its parent";
    if (!child.contains(o.replaced)) return name + " lacks the replaced receive " + to_string(o.replaced);
    if (parent.contains(o.replaced) && parent.at(o.replaced) == child.at(o.replaced)) {
      return name + " agrees with its parent at " + to_string(o.replaced);
    }
    const auto* rec = std::get_if<Receive>(&child.at(o.replaced));
    if (!rec || rec->tag != o.new_tag) {
      return name + " does not receive " + o.new_tag.str() + " at " + to_string(o.replaced);
    }
  }
  return std::nullopt;
}

std::string format_report(const ExplorationReport& report) {
  std::ostringstream out;
  std::size_t completed = 0;
  std::size_t deadlocks = 0;
  std::size_t limited = 0;
  std::size_t races = 0;
  for (const auto& t : report.traces) {
    completed += t.outcome == Outcome::completed;
    deadlocks += t.outcome == Outcome::deadlock;
    limited += t.outcome == Outcome::step_limit;
    races += t.races;
  }
  out << "traces: " << report.traces.size() << "\n"
      << "completed: " << completed << "\n"
      << "deadlocks: " << deadlocks << "\n"
      << "step-limited: " << limited << "\n"
      << "races: " << races << "\n"
      << "variants: " << report.variants << "\n"
      << "duplicate variants: " << report.duplicate_variants << "\n"
      << "replays: " << report.replays << "\n"
      << "divergences: " << report.divergences << "\n"
      << "duplicate traces: " << report.duplicate_traces << "\n"
      << "bounds hit: " << (report.bounds_hit ? "yes" : "no") << "\n";
  for (std::size_t i = 0; i < report.traces.size(); ++i) {
    const auto& t = report.traces[i];
    char name[32];
    std::snprintf(name, sizeof name, "trace-%04zu", i + 1);
    out << name << ": " << to_string(t.outcome);
    if (!t.blocked.empty()) {
      out << " blocked {";
      for (std::size_t k = 0; k < t.blocked.size(); ++k) out << (k ? ", " : "") << t.blocked[k].str();
      out << "}";
    }
    out << " orphans {";
    std::size_t k = 0;
    for (const auto& tag : t.orphans) out << (k++ ? ", " : "") << tag.str();
    out << "} races " << t.races;
    if (t.origin) {
      std::snprintf(name, sizeof name, "trace-%04zu", t.origin->parent + 1);
      out << " from " << name << " at " << to_string(t.origin->replaced) << " "
          << t.origin->old_tag.str() << " -> " << t.origin->new_tag.str();
    }
    out << "\n";
  }
  return out.str();
}

void write_report(const ExplorationReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < report.traces.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "trace-%04zu.txt", i + 1);
    std::ofstream(dir / name, std::ios::binary) << report.traces[i].key;
  }
  std::ofstream(dir / "report.txt", std::ios::binary) << format_report(report);
}

}  // namespace racetrace
