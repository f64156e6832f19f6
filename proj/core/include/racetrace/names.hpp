#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace racetrace {

/// Compares dotted names segment by segment, numerically where both segments
/// are digit strings, so that `p1.2 < p1.10` and `p2 < p10`.
std::strong_ordering natural_compare(std::string_view a, std::string_view b);

/// True for `[a-z][A-Za-z0-9_]*` optionally followed by `.segment` parts.
bool is_dotted_name(std::string_view s);

/// A hierarchical identifier. `Kind` keeps pids and tags apart at compile time.
template <class Kind>
class Name {
 public:
  Name() = default;
  explicit Name(std::string value) : value_(std::move(value)) {}

  const std::string& str() const { return value_; }
  bool empty() const { return value_.empty(); }

  friend bool operator==(const Name&, const Name&) = default;
  friend std::strong_ordering operator<=>(const Name& a, const Name& b) {
    return natural_compare(a.value_, b.value_);
  }
  friend std::ostream& operator<<(std::ostream& os, const Name& n) {
    return os << n.value_;
  }

 private:
  std::string value_;
};

struct PidKind;
struct TagKind;

/// Process identifier. Simulator pids are `p1` for the root and
/// `parent.k` for the k-th child spawned by `parent`.
using Pid = Name<PidKind>;

/// Message tag. Simulator tags are `sender.mk` for the k-th message sent by
/// `sender`; traces loaded from files may use any dotted name such as `l1`.
using Tag = Name<TagKind>;

Pid child_pid(const Pid& parent, std::size_t k);
Tag message_tag(const Pid& sender, std::size_t k);

}  // namespace racetrace

template <class Kind>
struct std::hash<racetrace::Name<Kind>> {
  std::size_t operator()(const racetrace::Name<Kind>& n) const noexcept {
    return std::hash<std::string>{}(n.str());
  }
};
