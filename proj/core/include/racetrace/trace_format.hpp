#pragma once

// Canonical text formats for traces (`.trace`) and interleavings (`.itl`).
//
//   trace { initial: p1
//     p1: spawn(p2), spawn(p3), send(l1, {val,1}, p2)
//     p2: rec(l1, cs1)
//     p3: send(l2, {val,0}, p2), send(l3, {val,2}, p2) }
//   constraints { cs1: {val,M} when M > 0 -> .; error -> . }
//
// Interleavings use the header `interleaving { initial: p1` followed by one
// `pid: action` entry per line. Serializers emit processes in pid order,
// empty processes as `ε`, and only the constraints the document references.

#include <string>
#include <string_view>

#include "racetrace/trace.hpp"

namespace racetrace {

/// Throws ParseError (with line/column) on malformed input or references to
/// undefined constraints. The result is normalized but not validated.
Trace parse_trace(std::string_view text);
std::string serialize_trace(const Trace& t);

Interleaving parse_interleaving(std::string_view text);
std::string serialize_interleaving(const Interleaving& s);

}  // namespace racetrace
