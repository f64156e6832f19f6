#include "racetrace/causality.hpp"

#include <deque>
#include <map>
#include <set>

#include "event_graph.hpp"
#include "racetrace/errors.hpp"

namespace racetrace {

HbGraph::HbGraph(const Trace& t) {
  if (auto v = validate_trace(t); !v) {
    throw PreconditionError("invalid trace: " + to_string(*v.violation));
  }
  graph_ = std::make_unique<detail::EventGraph>(t, false);
  for (const auto& e : graph_->edges()) {
    EdgeKind kind = e.kind == detail::EdgeKind::program ? EdgeKind::program
                    : e.kind == detail::EdgeKind::spawn ? EdgeKind::spawn
                                                        : EdgeKind::message;
    edges_.push_back(Edge{graph_->nodes()[e.from], graph_->nodes()[e.to], kind, e.tag});
  }
}

HbGraph::~HbGraph() = default;
HbGraph::HbGraph(HbGraph&&) noexcept = default;
HbGraph& HbGraph::operator=(HbGraph&&) noexcept = default;

const std::vector<EventId>& HbGraph::events() const { return graph_->nodes(); }

std::size_t HbGraph::node(const EventId& e) const {
  auto n = graph_->index_of(e);
  if (!n) throw PreconditionError("unknown event " + to_string(e));
  return *n;
}

bool HbGraph::reaches(const EventId& from, const EventId& to) const {
  auto a = node(from);
  auto b = node(to);
  return graph_->reachable_from(a)[b];
}

bool HbGraph::independent(const EventId& a, const EventId& b) const {
  return !reaches(a, b) && !reaches(b, a);
}

std::vector<EventId> HbGraph::after(const EventId& e) const {
  auto seen = graph_->reachable_from(node(e));
  std::vector<EventId> out;
  for (std::size_t n = 0; n < seen.size(); ++n) {
    if (seen[n]) out.push_back(graph_->nodes()[n]);
  }
  return out;
}

std::vector<std::pair<EventId, EventId>> HbGraph::relation() const {
  std::vector<std::pair<EventId, EventId>> out;
  for (std::size_t n = 0; n < graph_->size(); ++n) {
    auto seen = graph_->reachable_from(n);
    for (std::size_t m = 0; m < seen.size(); ++m) {
      if (seen[m]) out.emplace_back(graph_->nodes()[n], graph_->nodes()[m]);
    }
  }
  return out;
}

HbGraph hb_graph(const Trace& t) { return HbGraph(t); }

bool independent(const Trace& t, const EventId& a, const EventId& b) {
  return HbGraph(t).independent(a, b);
}

bool causally_equivalent(const Interleaving& a, const Interleaving& b, Delivery delivery) {
  if (a.initial != b.initial) return false;
  if (!validate_interleaving(a, delivery) || !validate_interleaving(b, delivery)) return false;
  return tr(a, delivery) == tr(b, delivery);
}

namespace {

void require_valid(const Trace& t, Delivery delivery) {
  if (auto v = validate_trace(t, delivery); !v) {
    throw PreconditionError("invalid trace: " + to_string(*v.violation));
  }
}

Event event_at(const Trace& t, const EventId& id) { return Event{id.pid, t.at(id)}; }

}  // namespace

Interleaving linearize(const Trace& t, Delivery delivery) {
  require_valid(t, delivery);
  detail::EventGraph g(t, delivery == Delivery::mailbox_order);
  std::vector<std::size_t> missing(g.size());
  std::set<std::size_t> ready;  // node order is (pid, index) order
  for (std::size_t n = 0; n < g.size(); ++n) {
    missing[n] = g.predecessors(n).size();
    if (missing[n] == 0) ready.insert(n);
  }
  Interleaving s{t.initial, {}, t.constraints};
  while (!ready.empty()) {
    auto n = *ready.begin();
    ready.erase(ready.begin());
    s.events.push_back(event_at(t, g.nodes()[n]));
    for (auto m : g.successors(n)) {
      if (--missing[m] == 0) ready.insert(m);
    }
  }
  if (s.events.size() != g.size()) throw PreconditionError("trace has no linearization");
  return s;
}

Linearizations enumerate_linearizations(const Trace& t, std::size_t cap, Delivery delivery) {
  require_valid(t, delivery);
  detail::EventGraph g(t, delivery == Delivery::mailbox_order);
  Linearizations out;
  std::vector<std::size_t> missing(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) missing[n] = g.predecessors(n).size();
  std::vector<bool> done(g.size());
  Interleaving current{t.initial, {}, t.constraints};

  auto recurse = [&](auto& self) -> void {
    if (out.cap_hit) return;
    if (current.events.size() == g.size()) {
      if (out.items.size() == cap) {
        out.cap_hit = true;
        return;
      }
      out.items.push_back(current);
      return;
    }
    for (std::size_t n = 0; n < g.size(); ++n) {
      if (done[n] || missing[n] != 0) continue;
      done[n] = true;
      for (auto m : g.successors(n)) --missing[m];
      current.events.push_back(event_at(t, g.nodes()[n]));
      self(self);
      current.events.pop_back();
      for (auto m : g.successors(n)) ++missing[m];
      done[n] = false;
      if (out.cap_hit) return;
    }
  };
  recurse(recurse);
  return out;
}

bool adjacent_independent(const Event& a, const Event& b) {
  if (a.pid == b.pid) return false;
  auto linked = [](const Event& x, const Event& y) {
    if (const auto* sp = std::get_if<Spawn>(&x.action); sp && sp->child == y.pid) return true;
    const auto* snd = std::get_if<Send>(&x.action);
    const auto* rec = std::get_if<Receive>(&y.action);
    return snd && rec && snd->tag == rec->tag;
  };
  return !linked(a, b) && !linked(b, a);
}

SwapVerdict swap_equivalence(const Interleaving& a, const Interleaving& b, std::size_t budget,
                             Delivery delivery) {
  if (a.initial != b.initial || a.events.size() != b.events.size()) return SwapVerdict::unreachable;

  // Express b as a permutation of a's positions.
  using Perm = std::vector<std::size_t>;
  Perm target;
  std::vector<bool> used(a.events.size());
  for (const auto& e : b.events) {
    bool found = false;
    for (std::size_t i = 0; i < a.events.size(); ++i) {
      if (!used[i] && a.events[i] == e) {
        used[i] = true;
        target.push_back(i);
        found = true;
        break;
      }
    }
    if (!found) return SwapVerdict::unreachable;
  }

  Perm start(a.events.size());
  for (std::size_t i = 0; i < start.size(); ++i) start[i] = i;
  if (start == target) return SwapVerdict::equivalent;

  std::set<Perm> visited{start};
  std::deque<Perm> queue{start};
  Interleaving probe{a.initial, {}, a.constraints};
  while (!queue.empty()) {
    Perm cur = std::move(queue.front());
    queue.pop_front();
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      if (!adjacent_independent(a.events[cur[i]], a.events[cur[i + 1]])) continue;
      Perm next = cur;
      std::swap(next[i], next[i + 1]);
      if (visited.contains(next)) continue;
      probe.events.clear();
      for (auto k : next) probe.events.push_back(a.events[k]);
      if (!validate_interleaving(probe, delivery)) continue;
      if (next == target) return SwapVerdict::equivalent;
      if (visited.size() >= budget) return SwapVerdict::budget_exhausted;
      visited.insert(next);
      queue.push_back(std::move(next));
    }
  }
  return SwapVerdict::unreachable;
}

}  // namespace racetrace
