// racetrace: command-line front end for trace validation, causality, race
// analysis, simulation and exploration.
//
// Exit status: 0 on success, 1 on a negative analysis result (invalid input,
// not equivalent, divergence, failed oracle check), 2 on usage or parse
// errors. Results go to stdout, diagnostics to stderr.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "racetrace/causality.hpp"
#include "racetrace/explorer.hpp"
#include "racetrace/races.hpp"
#include "racetrace/simulator.hpp"
#include "racetrace/trace_format.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace racetrace;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  bool json = false;
  std::string semantics = "pairwise";

  Delivery delivery() const {
    return semantics == "mailbox" ? Delivery::mailbox_order : Delivery::pairwise_fifo;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw UsageError("cannot write " + path);
}

std::string extension(const std::string& path) { return fs::path(path).extension().string(); }

void require_extension(const std::string& path, const std::string& ext) {
  if (extension(path) != ext) throw UsageError(path + ": expected a " + ext + " file");
}

Trace load_trace(const std::string& path) {
  require_extension(path, ".trace");
  return parse_trace(read_file(path));
}

Interleaving load_interleaving(const std::string& path) {
  require_extension(path, ".itl");
  return parse_interleaving(read_file(path));
}

std::shared_ptr<const Program> load_program(const std::string& path) {
  require_extension(path, ".prog");
  return std::make_shared<const Program>(parse_program(read_file(path)));
}

std::string tag_set(const std::set<Tag>& tags) {
  std::string out = "{";
  for (const auto& t : tags) out += (out.size() > 1 ? ", " : "") + t.str();
  return out + "}";
}

json tag_array(const std::set<Tag>& tags) {
  json a = json::array();
  for (const auto& t : tags) a.push_back(t.str());
  return a;
}

json violation_json(const Violation& v) {
  json j{{"condition", v.condition}, {"message", v.message}};
  if (v.index) j["index"] = *v.index;
  if (v.at) j["at"] = to_string(*v.at);
  return j;
}

// Prints the violation and returns 1, or returns 0 when the input is valid.
int report_invalid(const Options& o, const Validation& v) {
  if (v.ok()) return 0;
  if (o.json) {
    std::cout << json{{"valid", false}, {"violation", violation_json(*v.violation)}}.dump() << "\n";
  } else {
    std::cout << "invalid: " << to_string(*v.violation) << "\n";
  }
  return 1;
}

int cmd_validate(const Options& o, const std::string& file) {
  Validation v;
  if (extension(file) == ".itl") {
    v = validate_interleaving(load_interleaving(file), o.delivery());
  } else {
    v = validate_trace(load_trace(file), o.delivery());
  }
  if (!v.ok()) return report_invalid(o, v);
  std::cout << (o.json ? json{{"valid", true}}.dump() : std::string("valid")) << "\n";
  return 0;
}

// Traces come from `.trace` files directly and from `.itl` files via tr.
Trace load_any(const Options& o, const std::string& file, int& status) {
  if (extension(file) == ".itl") {
    auto s = load_interleaving(file);
    status = report_invalid(o, validate_interleaving(s, o.delivery()));
    return status ? Trace{} : tr(s, o.delivery());
  }
  auto t = load_trace(file);
  status = report_invalid(o, validate_trace(t, o.delivery()));
  return t;
}

const char* kind_name(HbGraph::EdgeKind k) {
  switch (k) {
    case HbGraph::EdgeKind::program: return "program";
    case HbGraph::EdgeKind::spawn: return "spawn";
    case HbGraph::EdgeKind::message: return "message";
  }
  return "";
}

int cmd_hb(const Options& o, const std::string& file, bool pairs) {
  int status = 0;
  Trace t = load_any(o, file, status);
  if (status) return status;
  if (o.delivery() == Delivery::mailbox_order) {
    if (auto v = validate_trace(t); !v) return report_invalid(o, v);
  }
  HbGraph hb(t);
  if (pairs) {
    for (const auto& [a, b] : hb.relation()) {
      if (o.json) {
        std::cout << json{{"before", to_string(a)}, {"after", to_string(b)}}.dump() << "\n";
      } else {
        std::cout << to_string(a) << " < " << to_string(b) << "\n";
      }
    }
    return 0;
  }
  for (const auto& e : hb.edges()) {
    if (o.json) {
      json j{{"from", to_string(e.from)}, {"to", to_string(e.to)}, {"kind", kind_name(e.kind)}};
      if (e.tag) j["tag"] = e.tag->str();
      std::cout << j.dump() << "\n";
    } else {
      std::cout << to_string(e.from) << " -> " << to_string(e.to) << " (" << kind_name(e.kind)
                << (e.tag ? " " + e.tag->str() : "") << ")\n";
    }
  }
  return 0;
}

const char* verdict_name(SwapVerdict v) {
  switch (v) {
    case SwapVerdict::equivalent: return "equivalent";
    case SwapVerdict::unreachable: return "unreachable";
    case SwapVerdict::budget_exhausted: return "budget exhausted";
  }
  return "";
}

int cmd_equiv(const Options& o, const std::string& a_file, const std::string& b_file, bool oracle,
              std::size_t budget) {
  auto a = load_interleaving(a_file);
  auto b = load_interleaving(b_file);
  if (int s = report_invalid(o, validate_interleaving(a, o.delivery()))) return s;
  if (int s = report_invalid(o, validate_interleaving(b, o.delivery()))) return s;
  bool eq = causally_equivalent(a, b, o.delivery());
  std::optional<SwapVerdict> swap;
  if (oracle) swap = swap_equivalence(a, b, budget, o.delivery());
  if (o.json) {
    json j{{"equivalent", eq}};
    if (swap) j["oracle"] = verdict_name(*swap);
    std::cout << j.dump() << "\n";
  } else {
    std::cout << (eq ? "equivalent" : "not equivalent") << "\n";
    if (swap) std::cout << "swap oracle: " << verdict_name(*swap) << "\n";
  }
  if (swap && (*swap == SwapVerdict::equivalent) != eq) {
    std::cerr << "swap oracle disagrees with trace equality\n";
    return 1;
  }
  return eq ? 0 : 1;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

void print_explain(const RaceReport& r) {
  for (const auto& [tag, c] : r.candidates) {
    std::cout << "  " << tag.str() << " sent at " << to_string(c.send) << ": match "
              << yes_no(c.matches) << ", after receive " << yes_no(c.after_receive)
              << ", received before " << yes_no(c.received_before) << ", blocked by "
              << (c.blocked_by ? c.blocked_by->str() : "-") << " => " << c.reason() << "\n";
  }
}

json report_json(const RaceReport& r, bool explain) {
  json j{{"receive", to_string(r.receive)}, {"message", r.subject.str()}, {"races", tag_array(r.racers)}};
  if (explain) {
    json cs = json::array();
    for (const auto& [tag, c] : r.candidates) {
      json k{{"tag", tag.str()},
             {"send", to_string(c.send)},
             {"match", c.matches},
             {"after_receive", c.after_receive},
             {"received_before", c.received_before},
             {"races", c.races()},
             {"reason", c.reason()}};
      if (c.blocked_by) k["blocked_by"] = c.blocked_by->str();
      cs.push_back(k);
    }
    j["candidates"] = cs;
  }
  return j;
}

int cmd_races(const Options& o, const std::string& file, const std::string& message, bool explain) {
  int status = 0;
  Trace t = load_any(o, file, status);
  if (status) return status;
  std::vector<RaceReport> reports;
  if (!message.empty()) {
    reports.push_back(race_set(t, Tag(message)));
  } else {
    reports = all_races(t);
  }
  for (const auto& r : reports) {
    if (o.json) {
      std::cout << report_json(r, explain).dump() << "\n";
      continue;
    }
    if (message.empty()) {
      std::cout << to_string(r.receive) << " rec(" << r.subject.str() << "): races = ";
    }
    std::cout << tag_set(r.racers) << "\n";
    if (explain) print_explain(r);
  }
  return 0;
}

int cmd_variant(const Options& o, const std::string& file, const std::string& receive,
                const std::string& with, const std::string& out) {
  int status = 0;
  Trace t = load_any(o, file, status);
  if (status) return status;
  Variant v;
  try {
    v = make_variant(t, Tag(receive), Tag(with));
  } catch (const PreconditionError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  std::string text = serialize_trace(v.trace);
  if (!out.empty()) {
    write_file(out, text);
  } else if (o.json) {
    std::cout << json{{"replaced", to_string(v.replaced)}, {"old", v.old_tag.str()},
                      {"new", v.new_tag.str()}, {"trace", text}}.dump()
              << "\n";
  } else {
    std::cout << text;
  }
  return 0;
}

int cmd_orphans(const Options& o, const std::string& file) {
  int status = 0;
  Trace t = load_any(o, file, status);
  if (status) return status;
  auto tags = orphans(t);
  std::cout << (o.json ? json{{"orphans", tag_array(tags)}}.dump() : tag_set(tags)) << "\n";
  return 0;
}

void print_run(const Options& o, const Run& r) {
  std::string text = serialize_trace(r.trace);
  if (o.json) {
    json blocked = json::array();
    for (const auto& p : r.blocked) blocked.push_back(p.str());
    std::cout << json{{"outcome", to_string(r.outcome)}, {"steps", r.steps}, {"blocked", blocked},
                      {"trace", text}}.dump()
              << "\n";
    return;
  }
  std::cout << text << "outcome: " << to_string(r.outcome);
  if (!r.blocked.empty()) {
    std::cout << " (blocked:";
    for (const auto& p : r.blocked) std::cout << " " << p.str();
    std::cout << ")";
  }
  std::cout << "\nsteps: " << r.steps << "\n";
}

int cmd_simulate(const Options& o, const std::string& file, std::uint64_t seed, std::size_t max_steps,
                 const std::string& emit) {
  Run r = run_random(load_program(file), seed, max_steps);
  if (!emit.empty()) write_file(emit, serialize_trace(r.trace));
  print_run(o, r);
  return 0;
}

int cmd_replay(const Options& o, const std::string& file, const std::string& prefix_file, bool cont,
               std::size_t max_steps) {
  auto program = load_program(file);
  Trace prefix = load_trace(prefix_file);
  if (int s = report_invalid(o, validate_trace(prefix))) return s;
  std::optional<Replay> r;
  try {
    r.emplace(replay_prefix(program, prefix));
  } catch (const Divergence& d) {
    if (o.json) {
      json j{{"diverged", true}, {"message", d.what()}};
      if (d.at()) j["at"] = to_string(*d.at());
      std::cout << j.dump() << "\n";
    } else {
      std::cout << d.what() << "\n";
    }
    return 1;
  }
  if (cont) {
    print_run(o, run_to_completion(std::move(r->state), max_steps));
    return 0;
  }
  Run partial{r->state.trace(), Outcome::completed, {}, r->state.steps()};
  std::string text = serialize_trace(partial.trace);
  if (o.json) {
    json enabled = json::array();
    for (const auto& e : r->state.enabled()) enabled.push_back(e.pid.str() + ": " + to_string(e.action));
    std::cout << json{{"steps", partial.steps}, {"enabled", enabled}, {"trace", text}}.dump() << "\n";
  } else {
    std::cout << text << "steps: " << partial.steps << "\n";
    for (const auto& e : r->state.enabled()) std::cout << "enabled " << e.pid.str() << ": " << to_string(e.action) << "\n";
  }
  return 0;
}

int cmd_explore(const Options& o, const std::string& file, const ExploreOptions& opts,
                const std::string& out, bool check_oracle) {
  auto program = load_program(file);
  auto report = explore(program, opts);
  if (!out.empty()) write_report(report, out);
  int status = 0;
  json j;
  if (o.json) {
    json traces = json::array();
    for (const auto& t : report.traces) {
      json k{{"outcome", to_string(t.outcome)}, {"orphans", tag_array(t.orphans)}, {"races", t.races},
             {"trace", t.key}};
      if (t.origin) {
        k["parent"] = t.origin->parent + 1;
        k["replaced"] = to_string(t.origin->replaced);
      }
      traces.push_back(k);
    }
    j = json{{"traces", traces}, {"variants", report.variants}, {"replays", report.replays},
             {"divergences", report.divergences}, {"bounds_hit", report.bounds_hit}};
  } else {
    std::cout << format_report(report);
  }
  if (auto bad = distinctness_check(report)) {
    std::cerr << "distinctness check failed: " << *bad << "\n";
    status = 1;
  }
  if (check_oracle) {
    auto truth = enumerate_executions(program, opts.max_steps);
    std::set<std::string> expected;
    std::set<std::string> found;
    for (const auto& r : truth.runs) expected.insert(serialize_trace(r.trace));
    for (const auto& t : report.traces) found.insert(t.key);
    bool same = expected == found;
    if (o.json) {
      j["oracle"] = json{{"expected", expected.size()}, {"found", found.size()}, {"equal", same}};
    } else {
      std::cout << "oracle: " << expected.size() << " executions, " << (same ? "equal" : "different") << "\n";
    }
    if (!same) status = 1;
  }
  if (o.json) std::cout << j.dump() << "\n";
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trace analysis for message-passing programs with selective receives"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_flag("--json", o.json, "One JSON record per result line");
  app.add_option("--semantics", o.semantics, "Receive ordering: pairwise or mailbox")
      ->check(CLI::IsMember({"pairwise", "mailbox"}));

  std::string file;
  std::string file_b;
  std::string message;
  std::string with;
  std::string out;
  std::string prefix;
  bool pairs = false;
  bool oracle = false;
  bool explain = false;
  bool cont = false;
  bool check_oracle = false;
  std::size_t budget = 100000;
  std::uint64_t seed = 1;
  std::size_t max_steps = 1000;
  std::size_t max_traces = 10000;
  std::string harvest = "full";

  auto* validate = app.add_subcommand("validate", "Check a trace or interleaving");
  validate->add_option("file", file, ".trace or .itl file")->required();

  auto* hb = app.add_subcommand("hb", "Print happened-before edges");
  hb->add_option("file", file)->required();
  hb->add_flag("--pairs", pairs, "Print the full relation as sorted pairs");

  auto* equiv = app.add_subcommand("equiv", "Decide causal equivalence of two interleavings");
  equiv->add_option("a", file)->required();
  equiv->add_option("b", file_b)->required();
  equiv->add_flag("--oracle", oracle, "Cross-check with the swap search");
  equiv->add_option("--budget", budget, "Swap search budget");

  auto* races = app.add_subcommand("races", "Race sets of receive events");
  races->add_option("file", file)->required();
  races->add_option("--message", message, "Only the receive of this tag");
  races->add_flag("--explain", explain, "Per-candidate conditions");

  auto* variant = app.add_subcommand("variant", "Race variant of a trace");
  variant->add_option("file", file)->required();
  variant->add_option("--receive", message)->required();
  variant->add_option("--with", with)->required();
  variant->add_option("-o,--output", out);

  auto* orph = app.add_subcommand("orphans", "Messages sent but never received");
  orph->add_option("file", file)->required();

  auto* simulate = app.add_subcommand("simulate", "Run a program with random scheduling");
  simulate->add_option("program", file)->required();
  simulate->add_option("--seed", seed);
  simulate->add_option("--max-steps", max_steps);
  simulate->add_option("--emit-trace", out);

  auto* replay = app.add_subcommand("replay", "Drive a program along a prefix trace");
  replay->add_option("program", file)->required();
  replay->add_option("--prefix", prefix)->required();
  replay->add_flag("--continue", cont, "Run to completion afterwards");
  replay->add_option("--max-steps", max_steps);

  auto* exp = app.add_subcommand("explore", "Explore all executions through race variants");
  exp->add_option("program", file)->required();
  exp->add_option("--seed", seed);
  exp->add_option("--max-steps", max_steps);
  exp->add_option("--max-traces", max_traces);
  exp->add_option("--out", out, "Directory for trace files and report.txt");
  exp->add_option("--harvest", harvest)->check(CLI::IsMember({"full", "window"}));
  exp->add_flag("--check-oracle", check_oracle, "Compare with exhaustive enumeration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (*validate) return cmd_validate(o, file);
    if (*hb) return cmd_hb(o, file, pairs);
    if (*equiv) return cmd_equiv(o, file, file_b, oracle, budget);
    if (*races) return cmd_races(o, file, message, explain);
    if (*variant) return cmd_variant(o, file, message, with, out);
    if (*orph) return cmd_orphans(o, file);
    if (*simulate) return cmd_simulate(o, file, seed, max_steps, out);
    if (*replay) return cmd_replay(o, file, prefix, cont, max_steps);
    if (*exp) {
      ExploreOptions opts{seed, max_steps, max_traces,
                          harvest == "window" ? Harvest::window : Harvest::full};
      return cmd_explore(o, file, opts, out, check_oracle);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << file << ":" << e.what() << "\n";
    return 2;
  } catch (const ProgramError& e) {
    std::cerr << file << ":" << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SimulationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
