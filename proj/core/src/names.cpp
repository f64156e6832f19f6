#include "racetrace/names.hpp"

#include <algorithm>
#include <cctype>

namespace racetrace {
namespace {

bool all_digits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::strong_ordering compare_segment(std::string_view a, std::string_view b) {
  if (all_digits(a) && all_digits(b)) {
    auto strip = [](std::string_view s) {
      auto nz = s.find_first_not_of('0');
      return nz == std::string_view::npos ? std::string_view("0") : s.substr(nz);
    };
    auto x = strip(a);
    auto y = strip(b);
    if (x.size() != y.size()) return x.size() <=> y.size();
    if (auto c = x.compare(y); c != 0) return c <=> 0;
    return a.size() <=> b.size();
  }
  // Split a leading alpha prefix from a trailing number so that p2 < p10.
  auto split = [](std::string_view s) {
    auto i = s.size();
    while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
    return std::pair{s.substr(0, i), s.substr(i)};
  };
  auto [ap, an] = split(a);
  auto [bp, bn] = split(b);
  if (auto c = ap.compare(bp); c != 0) return c <=> 0;
  if (an.empty() || bn.empty()) return an.size() <=> bn.size();
  return compare_segment(an, bn);
}

}  // namespace

std::strong_ordering natural_compare(std::string_view a, std::string_view b) {
  while (true) {
    auto da = a.find('.');
    auto db = b.find('.');
    auto sa = a.substr(0, da);
    auto sb = b.substr(0, db);
    if (auto c = compare_segment(sa, sb); c != 0) return c;
    bool ea = da == std::string_view::npos;
    bool eb = db == std::string_view::npos;
    if (ea || eb) {
      if (ea && eb) return std::strong_ordering::equal;
      return ea ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    a = a.substr(da + 1);
    b = b.substr(db + 1);
  }
}

bool is_dotted_name(std::string_view s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s.front()))) return false;
  bool segment_start = false;
  for (char ch : s.substr(1)) {
    auto c = static_cast<unsigned char>(ch);
    if (c == '.') {
      if (segment_start) return false;
      segment_start = true;
    } else if (std::isalnum(c) || c == '_') {
      segment_start = false;
    } else {
      return false;
    }
  }
  return !segment_start;
}

Pid child_pid(const Pid& parent, std::size_t k) {
  return Pid(parent.str() + "." + std::to_string(k));
}

Tag message_tag(const Pid& sender, std::size_t k) {
  return Tag(sender.str() + ".m" + std::to_string(k));
}

}  // namespace racetrace
