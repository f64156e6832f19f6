#pragma once

// Fixture loading, random program and trace generation, and brute-force
// oracles shared by the unit and acceptance tests.

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "racetrace/program.hpp"
#include "racetrace/trace.hpp"

namespace racetrace::testing {

std::string fixture_path(std::string_view name);
std::string read_file(const std::string& path);
std::string read_fixture(std::string_view name);
Trace fixture_trace(std::string_view name);
Interleaving fixture_interleaving(std::string_view name);
std::shared_ptr<const Program> fixture_program(std::string_view name);

/// The programs used for exploration criteria.
const std::vector<std::string>& fixture_programs();

/// Two to three spawned processes exchanging `{a,N}` / `{b,N}` messages with
/// guarded receives. Always passes the static checks.
std::string random_program_text(std::mt19937_64& rng);

/// Complete traces of random programs, at most `max_events` events each.
std::vector<Trace> random_traces(std::uint64_t seed, std::size_t count, std::size_t max_events);

/// A random edit of `t` (reorder, retarget, drop, change a value or tag),
/// normalized. Usually, but not always, invalid.
Trace mutate(const Trace& t, std::mt19937_64& rng);

/// A uniformly chosen enabled event at each step; a valid member of sched(t).
Interleaving random_linearization(const Trace& t, std::mt19937_64& rng);

/// Searches every merge of the per-process sequences for a valid
/// interleaving whose projection is `t`.
bool has_witness(const Trace& t, Delivery delivery);

/// Every interleaving over the events of `t` that is valid, regardless of
/// its projection. Per-process order is not assumed.
std::vector<Interleaving> all_valid_permutations(const Trace& t, Delivery delivery, std::size_t cap);

}  // namespace racetrace::testing
