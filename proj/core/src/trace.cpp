#include "racetrace/trace.hpp"

#include <algorithm>
#include <set>

#include "event_graph.hpp"
#include "racetrace/errors.hpp"

namespace racetrace {

std::string to_string(const Action& a) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Spawn>) {
          return "spawn(" + x.child.str() + ")";
        } else if constexpr (std::is_same_v<T, Send>) {
          return "send(" + x.tag.str() + ", " + to_string(x.value) + ", " + x.target.str() + ")";
        } else {
          return "rec(" + x.tag.str() + ", " + x.constraint + ")";
        }
      },
      a);
}

std::string to_string(const EventId& e) {
  return e.pid.str() + "[" + std::to_string(e.index) + "]";
}

std::string to_string(const Violation& v) {
  std::string out = "condition " + v.condition;
  if (v.index) out += " at event " + std::to_string(*v.index);
  if (v.at) out += " at " + to_string(*v.at);
  return out + ": " + v.message;
}

const std::vector<Action>& Trace::of(const Pid& p) const {
  static const std::vector<Action> empty;
  auto it = processes.find(p);
  return it == processes.end() ? empty : it->second;
}

const Action& Trace::at(const EventId& e) const {
  if (!contains(e)) throw PreconditionError("unknown event " + to_string(e));
  return processes.at(e.pid)[e.index];
}

bool Trace::contains(const EventId& e) const { return e.index < of(e.pid).size(); }

std::size_t Trace::size() const {
  std::size_t n = 0;
  for (const auto& [pid, seq] : processes) n += seq.size();
  return n;
}

void Trace::normalize() {
  std::set<Pid> spawned;
  for (const auto& [pid, seq] : processes) {
    for (const auto& a : seq) {
      if (const auto* s = std::get_if<Spawn>(&a)) spawned.insert(s->child);
    }
  }
  for (const auto& p : spawned) processes.try_emplace(p);
  processes.try_emplace(initial);
  std::erase_if(processes, [&](const auto& kv) {
    return kv.second.empty() && kv.first != initial && !spawned.contains(kv.first);
  });
}

namespace {

Validation fail_at(std::string condition, std::size_t index, std::string message) {
  return Validation{Violation{std::move(condition), index, std::nullopt, std::move(message)}};
}

Validation fail_at(std::string condition, EventId at, std::string message) {
  return Validation{Violation{std::move(condition), std::nullopt, std::move(at), std::move(message)}};
}

const Constraint* find_constraint(const ConstraintTable& table, const std::string& id) {
  auto it = table.find(id);
  return it == table.end() ? nullptr : &it->second;
}

}  // namespace

Validation validate_interleaving(const Interleaving& s, Delivery delivery) {
  const auto& ev = s.events;

  // (1) every event of a non-initial process follows its spawn by another pid.
  {
    std::set<Pid> spawned;
    for (std::size_t j = 0; j < ev.size(); ++j) {
      const Pid& p = ev[j].pid;
      if (p != s.initial && !spawned.contains(p)) {
        return fail_at("1", j, "process " + p.str() + " acts before being spawned");
      }
      if (const auto* sp = std::get_if<Spawn>(&ev[j].action); sp && sp->child != p) {
        spawned.insert(sp->child);
      }
    }
  }

  // Position of the first send of every tag.
  std::map<Tag, std::size_t> send_at;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (const auto* snd = std::get_if<Send>(&ev[i].action)) send_at.try_emplace(snd->tag, i);
  }

  // (2) every receive follows a matching send of its tag to the receiver.
  for (std::size_t j = 0; j < ev.size(); ++j) {
    const auto* r = std::get_if<Receive>(&ev[j].action);
    if (!r) continue;
    const Constraint* cs = find_constraint(s.constraints, r->constraint);
    if (!cs) return fail_at("2", j, "unknown constraint " + r->constraint);
    auto it = send_at.find(r->tag);
    if (it == send_at.end() || it->second > j) {
      return fail_at("2", j, "message " + r->tag.str() + " is received before it is sent");
    }
    const auto& snd = std::get<Send>(ev[it->second].action);
    if (snd.target != ev[j].pid) {
      return fail_at("2", j, "message " + r->tag.str() + " is addressed to " + snd.target.str());
    }
    if (!match(snd.value, *cs)) {
      return fail_at("2", j,
                     "value " + to_string(snd.value) + " of " + r->tag.str() + " does not match " +
                         cs->id);
    }
  }

  // (3) earlier matching sends on the same channel were received first.
  std::map<Tag, std::size_t> rec_at;
  for (std::size_t j = 0; j < ev.size(); ++j) {
    if (const auto* r = std::get_if<Receive>(&ev[j].action)) rec_at.try_emplace(r->tag, j);
  }
  for (std::size_t j = 0; j < ev.size(); ++j) {
    const auto* r = std::get_if<Receive>(&ev[j].action);
    if (!r) continue;
    const Constraint& cs = *find_constraint(s.constraints, r->constraint);
    std::size_t i = send_at.at(r->tag);
    const Pid& sender = ev[i].pid;
    for (std::size_t k = 0; k < i; ++k) {
      const auto* other = std::get_if<Send>(&ev[k].action);
      if (!other || other->target != ev[j].pid) continue;
      if (delivery == Delivery::pairwise_fifo && ev[k].pid != sender) continue;
      if (!match(other->value, cs)) continue;
      auto rec = rec_at.find(other->tag);
      bool earlier = rec != rec_at.end() && rec->second < j && ev[rec->second].pid == ev[j].pid;
      if (!earlier) {
        return fail_at("3", j,
                       "receive of " + r->tag.str() + " overtakes earlier matching message " +
                           other->tag.str());
      }
    }
  }

  // (4) unique pids and tags.
  {
    std::set<Pid> spawned;
    std::set<Tag> sent;
    std::set<Tag> received;
    for (std::size_t j = 0; j < ev.size(); ++j) {
      if (const auto* sp = std::get_if<Spawn>(&ev[j].action)) {
        if (sp->child == s.initial || !spawned.insert(sp->child).second) {
          return fail_at("4", j, "pid " + sp->child.str() + " is not fresh");
        }
      } else if (const auto* snd = std::get_if<Send>(&ev[j].action)) {
        if (!sent.insert(snd->tag).second) {
          return fail_at("4", j, "tag " + snd->tag.str() + " is sent twice");
        }
      } else if (const auto* r = std::get_if<Receive>(&ev[j].action)) {
        if (!received.insert(r->tag).second) {
          return fail_at("4", j, "tag " + r->tag.str() + " is received twice");
        }
      }
    }
  }
  return {};
}

Validation validate_trace(const Trace& t, Delivery delivery) {
  // (a) well-formedness: unique pids, single spawns, unique tags, known
  // constraints, no unspawned processes.
  std::map<Pid, EventId> spawn_of;
  std::set<Tag> sent;
  std::set<Tag> received;
  for (const auto& [pid, seq] : t.processes) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      EventId here{pid, i};
      if (const auto* sp = std::get_if<Spawn>(&seq[i])) {
        if (sp->child == t.initial) return fail_at("a", here, "initial pid " + t.initial.str() + " is spawned");
        if (sp->child == pid) return fail_at("a", here, "process " + pid.str() + " spawns itself");
        if (!spawn_of.emplace(sp->child, here).second) {
          return fail_at("a", here, "pid " + sp->child.str() + " is spawned twice");
        }
      } else if (const auto* snd = std::get_if<Send>(&seq[i])) {
        if (!sent.insert(snd->tag).second) return fail_at("a", here, "tag " + snd->tag.str() + " is sent twice");
      } else {
        const auto& r = std::get<Receive>(seq[i]);
        if (!received.insert(r.tag).second) {
          return fail_at("a", here, "tag " + r.tag.str() + " is received twice");
        }
        if (!find_constraint(t.constraints, r.constraint)) {
          return fail_at("a", here, "unknown constraint " + r.constraint);
        }
      }
    }
  }
  for (const auto& [pid, seq] : t.processes) {
    if (pid != t.initial && !spawn_of.contains(pid)) {
      return fail_at("a", EventId{pid, 0}, "process " + pid.str() + " is never spawned");
    }
  }

  detail::TagIndex tags(t);

  // (b) every receive has a matching send addressed to the receiver.
  for (const auto& [tag, where] : tags.receives) {
    const auto& r = std::get<Receive>(t.at(where));
    auto s = tags.sends.find(tag);
    if (s == tags.sends.end()) return fail_at("b", where, "message " + tag.str() + " is never sent");
    const auto& snd = std::get<Send>(t.at(s->second));
    if (snd.target != where.pid) {
      return fail_at("b", where, "message " + tag.str() + " is addressed to " + snd.target.str());
    }
    const Constraint& cs = t.constraints.at(r.constraint);
    if (!match(snd.value, cs)) {
      return fail_at("b", where,
                     "value " + to_string(snd.value) + " of " + tag.str() + " does not match " + cs.id);
    }
  }

  // (c) per-pair ordering: earlier matching sends from the same sender were
  // consumed before this receive.
  for (const auto& [tag, where] : tags.receives) {
    const auto& r = std::get<Receive>(t.at(where));
    const Constraint& cs = t.constraints.at(r.constraint);
    const EventId& s = tags.sends.at(tag);
    const auto& sender_seq = t.of(s.pid);
    for (std::size_t k = 0; k < s.index; ++k) {
      const auto* other = std::get_if<Send>(&sender_seq[k]);
      if (!other || other->target != where.pid || !match(other->value, cs)) continue;
      auto rec = tags.receives.find(other->tag);
      bool earlier = rec != tags.receives.end() && rec->second.pid == where.pid &&
                     rec->second.index < where.index;
      if (!earlier) {
        return fail_at("c", where,
                       "receive of " + tag.str() + " overtakes earlier matching message " +
                           other->tag.str() + " from " + s.pid.str());
      }
    }
  }

  // (d) acyclicity.
  detail::EventGraph g(t, delivery == Delivery::mailbox_order);
  if (auto n = g.find_cycle()) {
    return fail_at("d", g.nodes()[*n],
                   delivery == Delivery::mailbox_order
                       ? "happened-before and arrival-order constraints form a cycle"
                       : "happened-before relation has a cycle");
  }
  return {};
}

std::vector<Action> actions(const Pid& p, const Interleaving& s) {
  std::vector<Action> out;
  for (const auto& e : s.events) {
    if (e.pid == p) out.push_back(e.action);
  }
  return out;
}

namespace {

Trace project(const Interleaving& s) {
  Trace t;
  t.initial = s.initial;
  t.constraints = s.constraints;
  t.processes[s.initial];
  for (const auto& e : s.events) {
    t.processes[e.pid].push_back(e.action);
    if (const auto* sp = std::get_if<Spawn>(&e.action)) t.processes.try_emplace(sp->child);
  }
  return t;
}

}  // namespace

Trace tr(const Interleaving& s, Delivery delivery) {
  if (auto v = validate_interleaving(s, delivery); !v) {
    throw PreconditionError("not an interleaving: " + to_string(*v.violation));
  }
  return project(s);
}

bool is_subtrace(const Trace& a, const Trace& b) {
  if (a.initial != b.initial) {
    throw PreconditionError("initial pids differ: " + a.initial.str() + " vs " + b.initial.str());
  }
  for (const auto& [pid, seq] : a.processes) {
    const auto& full = b.of(pid);
    if (seq.size() > full.size()) return false;
    if (!std::equal(seq.begin(), seq.end(), full.begin())) return false;
  }
  return true;
}

bool in_sched(const Interleaving& s, const Trace& t, Delivery delivery) {
  if (s.initial != t.initial) return false;
  if (!validate_interleaving(s, delivery)) return false;
  return project(s) == t;
}

}  // namespace racetrace
