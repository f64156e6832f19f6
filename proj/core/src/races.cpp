#include "racetrace/races.hpp"

#include <deque>

#include "event_graph.hpp"
#include "racetrace/causality.hpp"
#include "racetrace/errors.hpp"

namespace racetrace {

std::string CandidateCheck::reason() const {
  if (!matches) return "value does not match the receive constraint";
  if (after_receive) return "send happens after the receive";
  if (received_before) return "already received before the receive";
  if (blocked_by) return "blocked by earlier message " + blocked_by->str() + " from the same sender";
  return "races";
}

namespace {

void require_valid(const Trace& t) {
  if (auto v = validate_trace(t); !v) {
    throw PreconditionError("invalid trace: " + to_string(*v.violation));
  }
}

const Constraint& constraint_of(const Trace& t, const std::string& id) {
  auto it = t.constraints.find(id);
  if (it == t.constraints.end()) throw PreconditionError("undefined constraint " + id);
  return it->second;
}

RaceReport race_set_at(const Trace& t, const HbGraph& hb, const detail::TagIndex& index,
                       const EventId& receive) {
  const auto& rec = std::get<Receive>(t.at(receive));
  const auto& cs = constraint_of(t, rec.constraint);
  const Pid& p = receive.pid;

  auto received_earlier = [&](const Tag& tag) {
    auto it = index.receives.find(tag);
    return it != index.receives.end() && it->second.pid == p && it->second.index < receive.index;
  };

  RaceReport report{receive, rec.tag, {}, {}};
  for (const auto& [sender, seq] : t.processes) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const auto* snd = std::get_if<Send>(&seq[i]);
      if (!snd || snd->target != p || snd->tag == rec.tag) continue;
      CandidateCheck c;
      c.tag = snd->tag;
      c.send = EventId{sender, i};
      c.matches = match(snd->value, cs);
      c.after_receive = hb.reaches(receive, c.send);
      c.received_before = received_earlier(snd->tag);
      // Earlier sends of the same sender, including the received message itself.
      for (std::size_t j = 0; j < i && !c.blocked_by; ++j) {
        const auto* prior = std::get_if<Send>(&seq[j]);
        if (!prior || prior->target != p) continue;
        if (match(prior->value, cs) && !received_earlier(prior->tag)) c.blocked_by = prior->tag;
      }
      if (c.races()) report.racers.insert(c.tag);
      report.candidates.emplace(c.tag, std::move(c));
    }
  }
  return report;
}

}  // namespace

RaceReport race_set(const Trace& t, const Tag& subject) {
  require_valid(t);
  detail::TagIndex index(t);
  auto it = index.receives.find(subject);
  if (it == index.receives.end()) {
    throw PreconditionError("no receive event for tag " + subject.str());
  }
  HbGraph hb(t);
  return race_set_at(t, hb, index, it->second);
}

std::vector<RaceReport> all_races(const Trace& t) {
  require_valid(t);
  detail::TagIndex index(t);
  HbGraph hb(t);
  std::vector<RaceReport> out;
  for (const auto& [pid, seq] : t.processes) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (std::holds_alternative<Receive>(seq[i])) {
        out.push_back(race_set_at(t, hb, index, EventId{pid, i}));
      }
    }
  }
  return out;
}

bool declarative_race(const Trace& t, const Tag& subject, const Tag& other, Delivery delivery) {
  if (subject == other) return false;
  detail::TagIndex index(t);
  auto it = index.receives.find(subject);
  if (it == index.receives.end()) return false;
  const EventId receive = it->second;
  const auto& rec = std::get<Receive>(t.at(receive));

  std::vector<Pid> pids;
  std::vector<std::size_t> limit;
  for (const auto& [pid, seq] : t.processes) {
    if (pid == receive.pid) continue;
    pids.push_back(pid);
    limit.push_back(seq.size());
  }

  std::vector<std::size_t> len(pids.size(), 0);
  while (true) {
    Trace sub{t.initial, {}, t.constraints};
    const auto& own = t.of(receive.pid);
    sub.processes[receive.pid] = {own.begin(), own.begin() + receive.index};
    for (std::size_t k = 0; k < pids.size(); ++k) {
      const auto& seq = t.of(pids[k]);
      sub.processes[pids[k]] = {seq.begin(), seq.begin() + len[k]};
    }
    sub.normalize();
    if (validate_trace(sub, delivery)) {
      Trace swapped = sub;
      swapped.processes[receive.pid].push_back(Receive{other, rec.constraint});
      if (validate_trace(swapped, delivery)) return true;
    }
    std::size_t k = 0;
    while (k < len.size() && len[k] == limit[k]) len[k++] = 0;
    if (k == len.size()) return false;
    ++len[k];
  }
}

std::set<Tag> orphans(const Trace& t) {
  std::set<Tag> sent;
  std::set<Tag> received;
  for (const auto& [pid, seq] : t.processes) {
    for (const auto& a : seq) {
      if (const auto* s = std::get_if<Send>(&a)) sent.insert(s->tag);
      if (const auto* r = std::get_if<Receive>(&a)) received.insert(r->tag);
    }
  }
  std::set<Tag> out;
  for (const auto& tag : sent) {
    if (!received.contains(tag)) out.insert(tag);
  }
  return out;
}

Trace remove_dependents(std::vector<Action> removed, Trace t) {
  std::deque<Action> work(removed.begin(), removed.end());
  while (!work.empty()) {
    Action a = std::move(work.front());
    work.pop_front();
    if (const auto* sp = std::get_if<Spawn>(&a)) {
      auto it = t.processes.find(sp->child);
      if (it == t.processes.end()) continue;
      work.insert(work.end(), it->second.begin(), it->second.end());
      it->second.clear();
    } else if (const auto* snd = std::get_if<Send>(&a)) {
      auto it = t.processes.find(snd->target);
      if (it == t.processes.end()) continue;
      auto& seq = it->second;
      for (std::size_t k = 0; k < seq.size(); ++k) {
        const auto* r = std::get_if<Receive>(&seq[k]);
        if (r && r->tag == snd->tag) {
          work.insert(work.end(), seq.begin() + static_cast<std::ptrdiff_t>(k) + 1, seq.end());
          seq.resize(k);
          break;
        }
      }
    }
  }
  t.normalize();
  return t;
}

Variant make_variant(const Trace& t, const Tag& subject, const Tag& racer) {
  auto report = race_set(t, subject);
  if (!report.racers.contains(racer)) {
    auto it = report.candidates.find(racer);
    std::string why = it == report.candidates.end()
                          ? "not sent to " + report.receive.pid.str()
                          : it->second.reason();
    throw PreconditionError(racer.str() + " does not race with " + subject.str() + ": " + why);
  }
  const EventId at = report.receive;
  const auto& seq = t.of(at.pid);
  const auto& rec = std::get<Receive>(seq[at.index]);
  std::vector<Action> suffix(seq.begin() + static_cast<std::ptrdiff_t>(at.index) + 1, seq.end());

  Trace base = t;
  auto& own = base.processes[at.pid];
  own.resize(at.index);
  own.push_back(Receive{racer, rec.constraint});
  Variant v{remove_dependents(std::move(suffix), std::move(base)), at, racer, subject};
  if (auto check = validate_trace(v.trace); !check) {
    throw std::logic_error("race variant is not a trace: " + to_string(*check.violation));
  }
  return v;
}

}  // namespace racetrace
