#pragma once

// Events, interleavings and traces.
//
// An Interleaving is a linear sequence of pid-tagged global actions; a Trace
// maps every pid to its own action sequence and stands for the whole class
// of causally equivalent interleavings.

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "racetrace/names.hpp"
#include "racetrace/terms.hpp"

namespace racetrace {

struct Spawn {
  Pid child;
  friend bool operator==(const Spawn&, const Spawn&) = default;
};

struct Send {
  Tag tag;
  Term value;
  Pid target;
  friend bool operator==(const Send&, const Send&) = default;
};

struct Receive {
  Tag tag;
  std::string constraint;  ///< id into the owning document's ConstraintTable
  friend bool operator==(const Receive&, const Receive&) = default;
};

using Action = std::variant<Spawn, Send, Receive>;

std::string to_string(const Action& a);

struct Event {
  Pid pid;
  Action action;
  friend bool operator==(const Event&, const Event&) = default;
};

/// Position of an action inside a trace: pid plus 0-based index.
struct EventId {
  Pid pid;
  std::size_t index = 0;

  friend bool operator==(const EventId&, const EventId&) = default;
  friend std::strong_ordering operator<=>(const EventId& a, const EventId& b) {
    if (auto c = a.pid <=> b.pid; c != 0) return c;
    return a.index <=> b.index;
  }
};

/// `p3[2]`.
std::string to_string(const EventId& e);
inline std::ostream& operator<<(std::ostream& os, const EventId& e) { return os << to_string(e); }

struct Interleaving {
  Pid initial;
  std::vector<Event> events;
  ConstraintTable constraints;
};

/// Per-process action sequences. Keys are the initial pid plus every spawned
/// pid; a spawned process without actions maps to an empty sequence.
struct Trace {
  Pid initial;
  std::map<Pid, std::vector<Action>> processes;
  ConstraintTable constraints;

  /// Empty sequence for unknown pids.
  const std::vector<Action>& of(const Pid& p) const;
  const Action& at(const EventId& e) const;
  bool contains(const EventId& e) const;
  std::size_t size() const;

  /// Adds empty entries for spawned pids missing from `processes` and drops
  /// empty entries for pids that are neither initial nor spawned.
  void normalize();

  /// Trace equality: initial pid and per-process sequences. The constraint
  /// table is context and does not take part.
  friend bool operator==(const Trace& a, const Trace& b) {
    return a.initial == b.initial && a.processes == b.processes;
  }
};

/// How a receive may pick among pending messages.
///
/// `pairwise_fifo` is the formal interleaving condition: only earlier sends
/// from the same sender to the same target constrain a receive; messages from
/// different senders may be delivered in any order.
///
/// `mailbox_order` additionally treats send order as arrival order at the
/// target mailbox (immediate delivery, as in the simulator): a receive must
/// take the oldest matching unreceived message regardless of its sender.
enum class Delivery { pairwise_fifo, mailbox_order };

struct Violation {
  /// "1".."4" for interleavings, "a".."d" for traces.
  std::string condition;
  std::optional<std::size_t> index;  ///< offending event index (interleavings)
  std::optional<EventId> at;         ///< offending event (traces)
  std::string message;
};

std::string to_string(const Violation& v);

struct Validation {
  std::optional<Violation> violation;
  bool ok() const { return !violation; }
  explicit operator bool() const { return ok(); }
};

/// Checks the four interleaving conditions in order (spawned before acting,
/// received after a matching send, per-pair ordering, unique pids and tags)
/// and reports the first violated one.
Validation validate_interleaving(const Interleaving& s,
                                 Delivery delivery = Delivery::pairwise_fifo);

/// Direct trace conditions: (a) unique pids/tags and single spawns, (b) every
/// receive has a matching send to the receiver, (c) per-pair ordering, (d) the
/// happened-before edge graph is acyclic. Under `mailbox_order`, (d) also
/// includes the arrival-order edges that a receive imposes on pending sends.
Validation validate_trace(const Trace& t, Delivery delivery = Delivery::pairwise_fifo);

std::vector<Action> actions(const Pid& p, const Interleaving& s);

/// Per-process projection; throws PreconditionError if `s` is invalid under
/// `delivery`.
Trace tr(const Interleaving& s, Delivery delivery = Delivery::pairwise_fifo);

/// Every process of `a` is a prefix of the same process in `b`. Throws
/// PreconditionError when the initial pids differ.
bool is_subtrace(const Trace& a, const Trace& b);

/// `s` is a linearization of `t`.
bool in_sched(const Interleaving& s, const Trace& t,
              Delivery delivery = Delivery::pairwise_fifo);

}  // namespace racetrace
