// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "racetrace/causality.hpp"
#include "racetrace/explorer.hpp"
#include "racetrace/races.hpp"
#include "racetrace/simulator.hpp"
#include "racetrace/trace_format.hpp"
#include "support.hpp"

using namespace racetrace;
using namespace racetrace::testing;

namespace {

constexpr std::size_t kMotivatingExecutions = 2;  // distinct executions of motivating.prog
constexpr std::size_t kTauALinearizations = 6;   // linearizations of tau_a.trace

// Empty string on success, otherwise the first problem found.
using Check = std::function<std::string()>;

std::string tags(const std::set<Tag>& s) {
  std::string out = "{";
  for (const auto& t : s) out += (out.size() > 1 ? ", " : "") + t.str();
  return out + "}";
}

std::vector<std::string> fixture_files(const std::string& ext) {
  std::vector<std::string> out;
  for (const auto& dir : {std::string(""), std::string("golden/")}) {
    for (const auto& entry : std::filesystem::directory_iterator(fixture_path(dir))) {
      if (entry.path().extension() == ext) out.push_back(dir + entry.path().filename().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::set<std::string> enumerated(std::shared_ptr<const Program> p) {
  std::set<std::string> out;
  for (const auto& r : enumerate_executions(std::move(p), 1000).runs) out.insert(serialize_trace(r.trace));
  return out;
}

std::string motivating_race() {
  auto start = std::chrono::steady_clock::now();
  RaceReport r = race_set(fixture_trace("tau_a.trace"), Tag("l1"));
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (r.racers != std::set<Tag>{Tag("l3")}) return "racers " + tags(r.racers);
  if (r.candidates.at(Tag("l2")).matches) return "l2 should fail the guard";
  if (secs >= 1.0) return "took " + std::to_string(secs) + " s";
  return "";
}

std::string running_race_set() {
  RaceReport r = race_set(fixture_trace("run.trace"), Tag("l2"));
  if (r.racers != std::set<Tag>{Tag("l6"), Tag("l8")}) return "racers " + tags(r.racers);
  const auto& c = r.candidates;
  if (c.size() != 5) return "expected 5 candidates";
  if (!c.at(Tag("l1")).received_before || c.at(Tag("l1")).races()) return "l1 not excluded as received";
  if (c.at(Tag("l4")).matches) return "l4 should not match";
  if (!c.at(Tag("l6")).races()) return "l6: " + c.at(Tag("l6")).reason();
  if (!c.at(Tag("l7")).matches || !c.at(Tag("l7")).after_receive) return "l7 not excluded by happened-before";
  if (!c.at(Tag("l8")).races()) return "l8: " + c.at(Tag("l8")).reason();
  HbGraph g(fixture_trace("run.trace"));
  EventId r2{Pid("p3"), 2}, s5{Pid("p3"), 4}, r5{Pid("p1"), 4}, s7{Pid("p1"), 5};
  if (!g.reaches(r2, s5) || !g.reaches(s5, r5) || !g.reaches(r5, s7)) return "r2 -> s5 -> r5 -> s7 chain missing";
  return "";
}

std::string running_variant() {
  Variant v = make_variant(fixture_trace("run.trace"), Tag("l2"), Tag("l6"));
  std::string got = serialize_trace(v.trace);
  if (got != read_fixture("golden/run_variant_l2_l6.trace")) return "variant differs:\n" + got;
  return "";
}

std::string swap_and_condition_three() {
  Interleaving a = fixture_interleaving("s_a.itl");
  Interleaving b = fixture_interleaving("s_b.itl");
  if (swap_equivalence(a, b, 100000) != SwapVerdict::equivalent) return "swap oracle did not connect s_a and s_b";
  Validation v = validate_interleaving(fixture_interleaving("s_bad.itl"), Delivery::mailbox_order);
  if (v.ok()) return "hoisted sequence accepted";
  if (v.violation->condition != "3") return "violated " + to_string(*v.violation);
  return "";
}

std::string oracle_equality() {
  std::size_t checked = 0;
  for (const auto& name : fixture_files(".trace")) {
    Trace t = fixture_trace(name);
    if (t.size() > 20 || !validate_trace(t)) continue;
    std::set<Tag> sent;
    for (const auto& [pid, seq] : t.processes) {
      for (const auto& a : seq) {
        if (const auto* s = std::get_if<Send>(&a)) sent.insert(s->tag);
      }
    }
    for (const auto& report : all_races(t)) {
      std::set<Tag> oracle;
      for (const Tag& other : sent) {
        if (declarative_race(t, report.subject, other)) oracle.insert(other);
      }
      if (oracle != report.racers) {
        return name + " " + report.subject.str() + ": race set " + tags(report.racers) + ", oracle " + tags(oracle);
      }
      ++checked;
    }
  }
  if (checked == 0) return "no receives checked";
  return "";
}

std::string sched_coherence() {
  std::mt19937_64 rng(1);
  std::vector<Trace> traces;
  for (const auto& name : fixture_files(".trace")) traces.push_back(fixture_trace(name));
  for (const auto& name : fixture_files(".itl")) {
    Interleaving s = fixture_interleaving(name);
    if (validate_interleaving(s)) traces.push_back(tr(s));
  }
  for (const Trace& t : traces) {
    auto lin = enumerate_linearizations(t, 200000);
    if (lin.cap_hit) return "linearization cap hit";
    for (const auto& s : lin.items) {
      if (!validate_interleaving(s)) return "invalid linearization";
      if (!(tr(s) == t)) return "linearization does not project back";
    }
    // Every pair for small sets, a fixed sample of pairs otherwise.
    const auto& items = lin.items;
    const std::size_t n = items.size();
    const bool all_pairs = n <= 300;
    const std::size_t rounds = all_pairs ? n * n : 5000;
    for (std::size_t k = 0; k < rounds; ++k) {
      const auto& a = items[all_pairs ? k / n : rng() % n];
      const auto& b = items[all_pairs ? k % n : rng() % n];
      if (!causally_equivalent(a, b)) return "two linearizations are not equivalent";
    }
    Interleaving base = linearize(t);
    for (const auto& other : all_valid_permutations(t, Delivery::pairwise_fifo, 5000)) {
      if (!(tr(other) == t) && causally_equivalent(base, other)) return "different projection judged equivalent";
    }
  }
  Trace tau = fixture_trace("tau_a.trace");
  std::size_t brute = 0;
  for (const auto& s : all_valid_permutations(tau, Delivery::pairwise_fifo, 100000)) brute += tr(s) == tau;
  std::size_t listed = enumerate_linearizations(tau, 1000).items.size();
  if (brute != kTauALinearizations || listed != kTauALinearizations) {
    return "linearizations of tau_a: brute force " + std::to_string(brute) + ", enumeration " + std::to_string(listed);
  }
  return "";
}

std::string descendants_differ() {
  std::size_t descendants = 0;
  for (const auto& name : fixture_programs()) {
    auto p = fixture_program(name);
    // Shape of the programs: three or more processes, four or more
    // messages, a guarded receive.
    if (name != "motivating.prog") {
      bool guarded = false;
      for (const auto& [id, cs] : p->constraints) {
        for (const auto& cl : cs.clauses) guarded |= cl.guard.kind() != Guard::Kind::truth;
      }
      Run r = run_to_completion(SysState(p), 1000);
      std::size_t messages = 0;
      for (const auto& [pid, seq] : r.trace.processes) {
        for (const auto& a : seq) messages += std::holds_alternative<Send>(a);
      }
      if (!guarded || r.trace.processes.size() < 3 || messages < 4) return name + " is too small";
    }
    ExplorationReport report = explore(p);
    for (const auto& t : report.traces) {
      if (!t.origin || t.outcome != Outcome::completed) continue;
      ++descendants;
      const auto& parent = report.traces.at(t.origin->parent).trace;
      const EventId& at = t.origin->replaced;
      if (t.trace == parent) return name + ": descendant equals its parent";
      if (!t.trace.contains(at) || !parent.contains(at) || t.trace.at(at) == parent.at(at)) {
        return name + ": no difference at " + to_string(at);
      }
    }
    if (auto bad = distinctness_check(report)) return name + ": " + *bad;
  }
  if (descendants == 0) return "no variant-descended traces";
  return "";
}

std::string exploration_complete() {
  auto start = std::chrono::steady_clock::now();
  for (const auto& name : fixture_programs()) {
    auto p = fixture_program(name);
    ExplorationReport report = explore(p);
    std::set<std::string> found;
    for (const auto& t : report.traces) found.insert(t.key);
    std::set<std::string> truth = enumerated(p);
    if (found != truth) {
      return name + ": explored " + std::to_string(found.size()) + ", enumerated " + std::to_string(truth.size());
    }
    if (name == "motivating.prog") {
      std::set<std::string> golden{read_fixture("golden/motivating-1.trace"), read_fixture("golden/motivating-2.trace")};
      if (truth.size() != kMotivatingExecutions || truth != golden) return "motivating.prog: golden set differs";
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= 30.0) return "took " + std::to_string(secs) + " s";
  return "";
}

std::string running_orphans() {
  auto o = orphans(fixture_trace("run.trace"));
  if (o != std::set<Tag>{Tag("l7"), Tag("l8")}) return "orphans " + tags(o);
  return "";
}

std::string format_stability() {
  std::size_t files = 0;
  for (const auto& name : fixture_files(".trace")) {
    std::string text = read_fixture(name);
    if (serialize_trace(parse_trace(text)) != text) return name;
    ++files;
  }
  for (const auto& name : fixture_files(".itl")) {
    std::string text = read_fixture(name);
    if (serialize_interleaving(parse_interleaving(text)) != text) return name;
    ++files;
  }
  for (const auto& name : fixture_files(".prog")) {
    std::string text = read_fixture(name);
    if (serialize_program(parse_program(text)) != text) return name;
    ++files;
  }
  if (files < 10) return "only " + std::to_string(files) + " files";
  return "";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Check>> criteria{
      {"motivating trace: race set of l1 is {l3}", motivating_race},
      {"running trace: race set of l2 is {l6, l8} with per-candidate reasons", running_race_set},
      {"running trace: variant (l2, l6) matches the golden file", running_variant},
      {"swap oracle joins s_a and s_b; hoisted sends violate condition 3", swap_and_condition_three},
      {"race sets equal the declarative oracle on bundled traces", oracle_equality},
      {"linearizations are valid, project back and are equivalent; tau_a has 6", sched_coherence},
      {"variant-descended traces differ from their parent at the replaced receive", descendants_differ},
      {"exploration equals exhaustive enumeration; motivating.prog has 2", exploration_complete},
      {"running trace: orphans are {l7, l8}", running_orphans},
      {"canonical files round-trip byte for byte", format_stability},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& [name, check] = criteria[i];
    std::string problem;
    auto start = std::chrono::steady_clock::now();
    try {
      problem = check();
    } catch (const std::exception& e) {
      problem = std::string("exception: ") + e.what();
    }
    std::cout << (problem.empty() ? "PASS" : "FAIL") << " " << (i + 1) << " " << name;
    if (!problem.empty()) {
      std::cout << ": " << problem;
      ++failed;
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    std::cout << " (" << ms.count() << " ms)" << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}
