#pragma once

// Graph over the events of a trace: program-order, spawn and message edges,
// optionally extended with mailbox arrival-order edges. Built for any trace,
// valid or not, so that validation can use it to detect cycles.

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "racetrace/trace.hpp"

namespace racetrace::detail {

enum class EdgeKind { program, spawn, message, arrival };

struct GraphEdge {
  std::size_t from;
  std::size_t to;
  EdgeKind kind;
  std::optional<Tag> tag;
};

class EventGraph {
 public:
  EventGraph(const Trace& t, bool arrival_edges);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<EventId>& nodes() const { return nodes_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const std::vector<std::size_t>& successors(std::size_t n) const { return succ_[n]; }
  const std::vector<std::size_t>& predecessors(std::size_t n) const { return pred_[n]; }
  std::optional<std::size_t> index_of(const EventId& e) const;

  /// Some node lying on a cycle, if any.
  std::optional<std::size_t> find_cycle() const;
  /// Nodes reachable from `n` through one or more edges.
  std::vector<bool> reachable_from(std::size_t n) const;

 private:
  void add_edge(std::size_t from, std::size_t to, EdgeKind kind, std::optional<Tag> tag = {});

  std::vector<EventId> nodes_;
  std::map<EventId, std::size_t> index_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<std::size_t>> succ_;
  std::vector<std::vector<std::size_t>> pred_;
};

/// Where each tag is sent and received in a trace (first occurrence).
struct TagIndex {
  std::map<Tag, EventId> sends;
  std::map<Tag, EventId> receives;

  explicit TagIndex(const Trace& t);
};

}  // namespace racetrace::detail
