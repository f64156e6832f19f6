#pragma once

// Message races: race sets, the brute-force declarative check, race
// variants and orphan messages.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "racetrace/trace.hpp"

namespace racetrace {

/// How one candidate message fared against the race-set conditions for a
/// receive. Conditions are checked in this order; `reason()` names the first
/// one that fails.
struct CandidateCheck {
  Tag tag;
  EventId send;
  bool matches = false;          ///< value matches the receive's constraint
  bool after_receive = false;    ///< the receive happened before this send
  bool received_before = false;  ///< consumed by an earlier receive of the same process
  std::optional<Tag> blocked_by; ///< earlier matching, unconsumed send from the same sender

  bool races() const {
    return matches && !after_receive && !received_before && !blocked_by;
  }
  std::string reason() const;
};

struct RaceReport {
  EventId receive;
  Tag subject;
  std::set<Tag> racers;
  /// Every other message sent to the receiving process.
  std::map<Tag, CandidateCheck> candidates;
};

/// Throws PreconditionError if `t` is invalid or `subject` is never received.
RaceReport race_set(const Trace& t, const Tag& subject);

/// One report per receive event, in pid order then index order.
std::vector<RaceReport> all_races(const Trace& t);

/// Exhaustive search for a subtrace that cuts the receiving process just
/// before the receive of `subject` and can take `other` there instead.
/// Exponential; intended for small traces.
bool declarative_race(const Trace& t, const Tag& subject, const Tag& other,
                      Delivery delivery = Delivery::pairwise_fifo);

/// Tags that are sent but never received.
std::set<Tag> orphans(const Trace& t);

struct Variant {
  Trace trace;
  EventId replaced;
  Tag new_tag;
  Tag old_tag;
};

/// Removes the actions in `removed` from `t` together with everything that
/// depends on them: spawned processes are erased, and a process receiving a
/// removed send is cut just before that receive. The erased actions are
/// processed in turn. The result is normalized.
Trace remove_dependents(std::vector<Action> removed, Trace t);

/// Replaces the receive of `subject` by a receive of `racer` and drops all
/// actions that happened after it. Throws PreconditionError naming the failed
/// condition when `racer` is not in the race set.
Variant make_variant(const Trace& t, const Tag& subject, const Tag& racer);

}  // namespace racetrace
