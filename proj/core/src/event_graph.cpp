#include "event_graph.hpp"

#include <deque>

namespace racetrace::detail {

TagIndex::TagIndex(const Trace& t) {
  for (const auto& [pid, seq] : t.processes) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (const auto* s = std::get_if<Send>(&seq[i])) sends.emplace(s->tag, EventId{pid, i});
      if (const auto* r = std::get_if<Receive>(&seq[i])) receives.emplace(r->tag, EventId{pid, i});
    }
  }
}

EventGraph::EventGraph(const Trace& t, bool arrival_edges) {
  for (const auto& [pid, seq] : t.processes) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      index_.emplace(EventId{pid, i}, nodes_.size());
      nodes_.push_back(EventId{pid, i});
    }
  }
  succ_.resize(nodes_.size());
  pred_.resize(nodes_.size());

  TagIndex tags(t);
  for (const auto& [pid, seq] : t.processes) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      std::size_t here = index_.at(EventId{pid, i});
      if (i + 1 < seq.size()) add_edge(here, index_.at(EventId{pid, i + 1}), EdgeKind::program);
      if (const auto* sp = std::get_if<Spawn>(&seq[i])) {
        if (auto child = index_of(EventId{sp->child, 0})) add_edge(here, *child, EdgeKind::spawn);
      }
      if (const auto* r = std::get_if<Receive>(&seq[i])) {
        auto s = tags.sends.find(r->tag);
        if (s != tags.sends.end()) {
          add_edge(index_.at(s->second), here, EdgeKind::message, r->tag);
        }
      }
    }
  }

  if (!arrival_edges) return;

  // A receive at p taking message l means every other matching message to p
  // that p has not consumed earlier must arrive after l, i.e. be sent later.
  for (const auto& [pid, seq] : t.processes) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const auto* r = std::get_if<Receive>(&seq[i]);
      if (!r) continue;
      auto cs = t.constraints.find(r->constraint);
      auto own = tags.sends.find(r->tag);
      if (cs == t.constraints.end() || own == tags.sends.end()) continue;
      for (const auto& [tag, where] : tags.sends) {
        if (tag == r->tag) continue;
        const auto& send = std::get<Send>(t.at(where));
        if (send.target != pid || !match(send.value, cs->second)) continue;
        auto rec = tags.receives.find(tag);
        bool consumed_before = rec != tags.receives.end() && rec->second.pid == pid &&
                               rec->second.index < i;
        if (!consumed_before) {
          add_edge(index_.at(own->second), index_.at(where), EdgeKind::arrival, tag);
        }
      }
    }
  }
}

void EventGraph::add_edge(std::size_t from, std::size_t to, EdgeKind kind, std::optional<Tag> tag) {
  edges_.push_back(GraphEdge{from, to, kind, std::move(tag)});
  succ_[from].push_back(to);
  pred_[to].push_back(from);
}

std::optional<std::size_t> EventGraph::index_of(const EventId& e) const {
  auto it = index_.find(e);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> EventGraph::find_cycle() const {
  std::vector<std::size_t> indegree(size());
  for (std::size_t n = 0; n < size(); ++n) indegree[n] = pred_[n].size();
  std::deque<std::size_t> ready;
  for (std::size_t n = 0; n < size(); ++n) {
    if (indegree[n] == 0) ready.push_back(n);
  }
  std::size_t seen = 0;
  while (!ready.empty()) {
    auto n = ready.front();
    ready.pop_front();
    ++seen;
    for (auto m : succ_[n]) {
      if (--indegree[m] == 0) ready.push_back(m);
    }
  }
  if (seen == size()) return std::nullopt;
  // Every node left with positive in-degree either lies on a cycle or is
  // reachable from one; walk predecessors until a node repeats.
  std::size_t n = 0;
  while (indegree[n] == 0) ++n;
  std::vector<bool> visited(size());
  while (!visited[n]) {
    visited[n] = true;
    for (auto p : pred_[n]) {
      if (indegree[p] > 0) {
        n = p;
        break;
      }
    }
  }
  return n;
}

std::vector<bool> EventGraph::reachable_from(std::size_t n) const {
  std::vector<bool> seen(size());
  std::vector<std::size_t> stack(succ_[n].begin(), succ_[n].end());
  while (!stack.empty()) {
    auto m = stack.back();
    stack.pop_back();
    if (seen[m]) continue;
    seen[m] = true;
    for (auto k : succ_[m]) {
      if (!seen[k]) stack.push_back(k);
    }
  }
  return seen;
}

}  // namespace racetrace::detail
