#pragma once

// Executes programs of the actor language and records their traces.
//
// Delivery is immediate: a send appends the message to the target mailbox at
// once, so mailbox order is send order. A receive takes the oldest message
// matching its constraint. Local steps (bindings, value statements, clause
// entry and exit) run eagerly right after every global action.

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "racetrace/errors.hpp"
#include "racetrace/program.hpp"
#include "racetrace/trace.hpp"

namespace racetrace {

using Env = std::map<std::string, Term>;

struct Frame {
  const Body* body = nullptr;
  std::size_t pc = 0;
  Env saved;                         ///< environment to restore on exit (clause frames)
  std::optional<std::string> bind;   ///< receives the clause body's last value
  Term last = Term::atom("ok");
  bool clause = false;
};

struct ProcState {
  Pid pid;
  std::deque<std::pair<Tag, Term>> mailbox;
  std::vector<Frame> frames;
  Env env;
  std::size_t spawned = 0;
  std::size_t sent = 0;

  bool finished() const { return frames.empty(); }
};

struct Enabled {
  Pid pid;
  Action action;  ///< what stepping `pid` would record
};

enum class Outcome { completed, deadlock, step_limit };

std::string to_string(Outcome o);

class SysState {
 public:
  explicit SysState(std::shared_ptr<const Program> program);

  const Program& program() const { return *program_; }
  const std::map<Pid, ProcState>& processes() const { return procs_; }
  const Trace& trace() const { return trace_; }
  std::size_t steps() const { return steps_; }

  /// The action `pid` would perform next, or nothing if it is finished,
  /// blocked, or unknown.
  std::optional<Action> next_action(const Pid& pid) const;
  /// Every process that can fire, in pid order.
  std::vector<Enabled> enabled() const;
  /// Processes that are neither finished nor enabled.
  std::vector<Pid> blocked() const;

  /// Performs one global action of `pid`. Throws SimulationError if `pid` is
  /// not enabled.
  void step(const Pid& pid);

  /// Recorded trace plus the tag order of every mailbox; equal keys mean equal
  /// states.
  std::string key() const;

 private:
  const Stmt* current(const ProcState& p) const;
  std::optional<std::size_t> receivable(const ProcState& p, const Stmt& s) const;
  void settle(ProcState& p);
  void create(const Pid& pid, const FunctionDef& def, std::vector<Term> args);

  std::shared_ptr<const Program> program_;
  std::map<Pid, ProcState> procs_;
  Trace trace_;
  std::size_t steps_ = 0;
};

struct Run {
  Trace trace;
  Outcome outcome = Outcome::completed;
  std::vector<Pid> blocked;  ///< deadlock only
  std::size_t steps = 0;
};

/// Runs `state` until quiescence or `max_steps` global actions in total,
/// always stepping the smallest enabled pid.
Run run_to_completion(SysState state, std::size_t max_steps);

/// Picks uniformly among enabled pids with a seeded generator.
Run run_random(std::shared_ptr<const Program> program, std::uint64_t seed, std::size_t max_steps);

/// Thrown when a program cannot follow a prefix trace.
class Divergence : public SimulationError {
 public:
  Divergence(std::optional<EventId> at, const std::string& message)
      : SimulationError(at ? "divergence at " + to_string(*at) + ": " + message
                           : "divergence: " + message),
        at_(std::move(at)) {}
  const std::optional<EventId>& at() const { return at_; }

 private:
  std::optional<EventId> at_;
};

struct Replay {
  SysState state;
  std::map<Pid, Pid> pids;  ///< prefix name to simulator name
  std::map<Tag, Tag> tags;
};

/// Steps the program along a linearization of `prefix` in which every receive
/// takes the oldest matching message, checking each action against the
/// prefix. Names in the prefix are aligned with simulator names as they are
/// created. Throws PreconditionError if `prefix` is not a valid trace and
/// Divergence if the program cannot follow it.
Replay replay_prefix(std::shared_ptr<const Program> program, const Trace& prefix);

struct Executions {
  /// Distinct quiescent traces, ordered by canonical serialization.
  std::vector<Run> runs;
  std::size_t step_limit_branches = 0;
  std::size_t states = 0;
};

/// Depth-first over every enabled choice. Ground truth for small programs.
Executions enumerate_executions(std::shared_ptr<const Program> program, std::size_t max_steps);

}  // namespace racetrace
