#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "racetrace/simulator.hpp"
#include "racetrace/trace_format.hpp"

namespace racetrace::testing {

std::string fixture_path(std::string_view name) {
  return std::string(RACETRACE_FIXTURE_DIR) + "/" + std::string(name);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string read_fixture(std::string_view name) { return read_file(fixture_path(name)); }

Trace fixture_trace(std::string_view name) { return parse_trace(read_fixture(name)); }

Interleaving fixture_interleaving(std::string_view name) {
  return parse_interleaving(read_fixture(name));
}

std::shared_ptr<const Program> fixture_program(std::string_view name) {
  return std::make_shared<const Program>(parse_program(read_fixture(name)));
}

const std::vector<std::string>& fixture_programs() {
  static const std::vector<std::string> names{"motivating.prog", "collector.prog", "server.prog"};
  return names;
}

namespace {

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& items) {
  return items[rng() % items.size()];
}

int between(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

std::string random_send(std::mt19937_64& rng, const std::vector<std::string>& targets) {
  static const std::vector<std::string> kinds{"a", "b"};
  return "send {" + pick(rng, kinds) + "," + std::to_string(between(rng, 0, 2)) + "} to " +
         pick(rng, targets);
}

std::string random_receive(std::mt19937_64& rng) {
  static const std::vector<std::string> kinds{"a", "b"};
  static const std::vector<std::string> guards{"", " when X > 0", " when X == 1", " when X < 2"};
  std::vector<std::string> clauses;
  int n = between(rng, 1, 2);
  for (int i = 0; i < n; ++i) {
    clauses.push_back("{" + pick(rng, kinds) + ",X}" + pick(rng, guards) + " -> X");
  }
  return "receive { " + join(clauses, "; ") + " }";
}

}  // namespace

std::string random_program_text(std::mt19937_64& rng) {
  int k = between(rng, 2, 3);
  std::vector<std::string> known{"M"};
  std::vector<std::string> main{"M = self()"};
  std::vector<std::string> defs;
  for (int i = 1; i <= k; ++i) {
    std::vector<std::string> body;
    int n = between(rng, 1, 3);
    for (int j = 0; j < n; ++j) {
      body.push_back(rng() % 2 ? random_send(rng, known) : random_receive(rng));
    }
    std::string name = "f" + std::to_string(i);
    defs.push_back("  def " + name + "(" + join(known, ", ") + ") { " + join(body, "; ") + " }");
    main.push_back("P" + std::to_string(i) + " = spawn " + name + "(" + join(known, ", ") + ")");
    known.push_back("P" + std::to_string(i));
  }
  std::vector<std::string> children(known.begin() + 1, known.end());
  int extra = between(rng, 0, 2);
  for (int j = 0; j < extra; ++j) main.push_back(random_send(rng, children));
  if (rng() % 2) main.push_back("receive { {a,X} -> X; {b,X} when X > 0 -> X }");
  return "program { main f0\n  def f0() { " + join(main, "; ") + " }\n" + join(defs, "\n") + " }\n";
}

std::vector<Trace> random_traces(std::uint64_t seed, std::size_t count, std::size_t max_events) {
  std::mt19937_64 rng(seed);
  std::vector<Trace> out;
  while (out.size() < count) {
    auto program = std::make_shared<const Program>(parse_program(random_program_text(rng)));
    Run r = run_random(program, rng(), 200);
    if (r.trace.size() <= max_events) out.push_back(std::move(r.trace));
  }
  return out;
}

Trace mutate(const Trace& t, std::mt19937_64& rng) {
  Trace m = t;
  std::vector<Pid> pids;
  for (const auto& [pid, seq] : m.processes) {
    if (!seq.empty()) pids.push_back(pid);
  }
  if (pids.empty()) return m;
  auto& seq = m.processes[pick(rng, pids)];
  std::size_t i = rng() % seq.size();
  switch (rng() % 5) {
    case 0:  // swap with a neighbour
      if (seq.size() > 1) std::swap(seq[i], seq[(i + 1) % seq.size()]);
      break;
    case 1:  // drop an action
      seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    case 2:  // change a sent value
      if (auto* s = std::get_if<Send>(&seq[i])) {
        s->value = Term::tuple({Term::atom(rng() % 2 ? "a" : "b"), Term::integer(between(rng, 0, 2))});
      }
      break;
    case 3: {  // receive a different message
      std::vector<Tag> tags;
      for (const auto& [pid, other] : t.processes) {
        for (const auto& a : other) {
          if (const auto* s = std::get_if<Send>(&a)) tags.push_back(s->tag);
        }
      }
      if (auto* r = std::get_if<Receive>(&seq[i]); r && !tags.empty()) r->tag = pick(rng, tags);
      break;
    }
    default:  // move an action to the end
      if (seq.size() > 1) {
        Action a = seq[i];
        seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(i));
        seq.push_back(std::move(a));
      }
      break;
  }
  m.normalize();
  return m;
}

Interleaving random_linearization(const Trace& t, std::mt19937_64& rng) {
  Interleaving s{t.initial, {}, t.constraints};
  std::map<Pid, std::size_t> next;
  const std::size_t total = t.size();
  while (s.events.size() < total) {
    std::vector<Event> ready;
    for (const auto& [pid, seq] : t.processes) {
      std::size_t k = next[pid];
      if (k == seq.size()) continue;
      Interleaving probe = s;
      probe.events.push_back(Event{pid, seq[k]});
      if (validate_interleaving(probe)) ready.push_back(probe.events.back());
    }
    if (ready.empty()) throw std::logic_error("trace has no linearization");
    Event e = ready[rng() % ready.size()];
    ++next[e.pid];
    s.events.push_back(std::move(e));
  }
  return s;
}

bool has_witness(const Trace& t, Delivery delivery) {
  Interleaving s{t.initial, {}, t.constraints};
  std::map<Pid, std::size_t> next;
  const std::size_t total = t.size();
  std::function<bool()> search = [&]() -> bool {
    if (s.events.size() == total) {
      if (!validate_interleaving(s, delivery)) return false;
      Trace p = tr(s, delivery);
      return p == t;
    }
    for (const auto& [pid, seq] : t.processes) {
      std::size_t& k = next[pid];
      if (k == seq.size()) continue;
      s.events.push_back(Event{pid, seq[k]});
      // All conditions only look backwards, so invalid prefixes are pruned.
      if (validate_interleaving(s, delivery)) {
        ++k;
        bool found = search();
        --k;
        if (found) {
          s.events.pop_back();
          return true;
        }
      }
      s.events.pop_back();
    }
    return false;
  };
  return search();
}

std::vector<Interleaving> all_valid_permutations(const Trace& t, Delivery delivery, std::size_t cap) {
  std::vector<Event> events;
  for (const auto& [pid, seq] : t.processes) {
    for (const auto& a : seq) events.push_back(Event{pid, a});
  }
  std::vector<Interleaving> out;
  std::vector<bool> used(events.size());
  Interleaving s{t.initial, {}, t.constraints};
  std::function<void()> search = [&]() {
    if (out.size() >= cap) return;
    if (s.events.size() == events.size()) {
      out.push_back(s);
      return;
    }
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (used[i]) continue;
      s.events.push_back(events[i]);
      if (validate_interleaving(s, delivery)) {
        used[i] = true;
        search();
        used[i] = false;
      }
      s.events.pop_back();
    }
  };
  search();
  return out;
}

}  // namespace racetrace::testing
