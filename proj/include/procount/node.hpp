#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace procount {

// A tree node: a finite sequence of naturals. std::vector's operator<
// is lexicographic with proper prefixes ordered first, which is exactly
// the order used to enumerate tree levels.
using Node = std::vector<std::uint32_t>;

inline bool is_prefix(const Node& s, const Node& t) {
  if (s.size() > t.size()) return false;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] != t[i]) return false;
  return true;
}

inline Node truncate(const Node& s, std::size_t n) {
  if (n >= s.size()) return s;
  return Node(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(n));
}

inline Node extend(Node s, std::uint32_t label) {
  s.push_back(label);
  return s;
}

// "2.0.1" for (2,0,1); empty string for the root.
inline std::string node_to_string(const Node& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(s[i]);
  }
  return out;
}

inline Node node_from_string(std::string_view text) {
  Node out;
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t dot = text.find('.', pos);
    std::string_view part = text.substr(pos, dot == std::string_view::npos ? dot : dot - pos);
    if (part.empty()) throw std::invalid_argument("bad node literal: '" + std::string(text) + "'");
    std::uint64_t v = 0;
    for (char c : part) {
      if (c < '0' || c > '9') throw std::invalid_argument("bad node literal: '" + std::string(text) + "'");
      v = v * 10 + static_cast<std::uint64_t>(c - '0');
      if (v > 0xffffffffULL) throw std::invalid_argument("node label out of range");
    }
    out.push_back(static_cast<std::uint32_t>(v));
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  return out;
}

}  // namespace procount
