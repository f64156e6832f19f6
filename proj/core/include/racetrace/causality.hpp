#pragma once

// Happened-before, independence, linearization and causal equivalence.

#include <cstddef>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "racetrace/trace.hpp"

namespace racetrace {

namespace detail {
class EventGraph;
}

/// Happened-before graph of a valid trace. Edges are program order, spawn
/// (spawn(q) to the first action of q) and message (send(l) to rec(l));
/// reachability through them is the happened-before relation. Reachability is
/// computed per query by forward search.
class HbGraph {
 public:
  enum class EdgeKind { program, spawn, message };

  struct Edge {
    EventId from;
    EventId to;
    EdgeKind kind;
    std::optional<Tag> tag;  ///< message edges only
  };

  /// Throws PreconditionError if `t` is not a valid trace.
  explicit HbGraph(const Trace& t);
  ~HbGraph();
  HbGraph(HbGraph&&) noexcept;
  HbGraph& operator=(HbGraph&&) noexcept;

  const std::vector<EventId>& events() const;
  const std::vector<Edge>& edges() const { return edges_; }

  /// `from` happened before `to`. Throws PreconditionError on unknown events.
  bool reaches(const EventId& from, const EventId& to) const;
  bool independent(const EventId& a, const EventId& b) const;
  /// Every event that `e` happened before.
  std::vector<EventId> after(const EventId& e) const;
  /// The full relation as sorted pairs.
  std::vector<std::pair<EventId, EventId>> relation() const;

 private:
  std::size_t node(const EventId& e) const;

  std::unique_ptr<detail::EventGraph> graph_;
  std::vector<Edge> edges_;
};

HbGraph hb_graph(const Trace& t);

bool independent(const Trace& t, const EventId& a, const EventId& b);

/// Same initial pid, same events, same per-process order. Both inputs must be
/// valid interleavings; an invalid one is never equivalent to anything.
bool causally_equivalent(const Interleaving& a, const Interleaving& b,
                         Delivery delivery = Delivery::pairwise_fifo);

/// Deterministic topological order: among ready events, the smallest pid
/// goes first. Under `mailbox_order` the arrival-order edges are respected
/// too, so the result is a schedule the immediate-delivery simulator can
/// follow. Throws PreconditionError if no linearization exists.
Interleaving linearize(const Trace& t, Delivery delivery = Delivery::pairwise_fifo);

struct Linearizations {
  std::vector<Interleaving> items;
  bool cap_hit = false;
};

/// All linearizations of `t` (its sched set), stopping after `cap` items.
Linearizations enumerate_linearizations(const Trace& t, std::size_t cap,
                                        Delivery delivery = Delivery::pairwise_fifo);

/// Events adjacent in an interleaving that may be swapped without violating
/// happened-before (different pids, no spawn or message link between them).
bool adjacent_independent(const Event& a, const Event& b);

enum class SwapVerdict { equivalent, unreachable, budget_exhausted };

/// Breadth-first search from `a` over swaps of adjacent independent events,
/// keeping only sequences that are themselves valid interleavings. `budget`
/// bounds the number of visited sequences. Test oracle for small inputs.
SwapVerdict swap_equivalence(const Interleaving& a, const Interleaving& b, std::size_t budget,
                             Delivery delivery = Delivery::pairwise_fifo);

}  // namespace racetrace
