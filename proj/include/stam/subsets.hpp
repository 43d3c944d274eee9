#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace stam {

// Nonempty subsets of [n] = {1,...,n} as bitmasks; bit i-1 <=> index i.
using SubsetMask = std::uint32_t;

constexpr int kMaxGroundSize = 20;

constexpr SubsetMask full_mask(int n) {
  return (SubsetMask{1} << n) - 1u;
}

constexpr int subset_size(SubsetMask s) {
  return std::popcount(s);
}

constexpr bool contains(SubsetMask s, int index) {
  return (s >> (index - 1)) & 1u;
}

inline void require_ground_size(int n) {
  if (n < 1 || n > kMaxGroundSize)
    throw std::invalid_argument("ground set size must be in [1, " +
                                std::to_string(kMaxGroundSize) + "], got " +
                                std::to_string(n));
}

inline void require_nonempty_subset(SubsetMask s, int n) {
  if (s == 0) throw std::invalid_argument("empty subset not allowed");
  if (s > full_mask(n))
    throw std::invalid_argument("subset mask " + std::to_string(s) +
                                " out of range for n=" + std::to_string(n));
}

// Ascending 1-based indices of s.
inline std::vector<int> subset_indices(SubsetMask s) {
  std::vector<int> out;
  for (int i = 1; s != 0; ++i, s >>= 1)
    if (s & 1u) out.push_back(i);
  return out;
}

// "1,3" style rendering used in all JSON schemas.
inline std::string format_subset(SubsetMask s) {
  std::string out;
  for (int i : subset_indices(s)) {
    if (!out.empty()) out += ',';
    out += std::to_string(i);
  }
  return out;
}

// Parses "1,3"; validates indices against n and rejects duplicates.
inline SubsetMask parse_subset(const std::string& text, int n) {
  SubsetMask mask = 0;
  std::size_t pos = 0;
  if (text.empty()) throw std::invalid_argument("empty subset string");
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    const std::string tok = text.substr(pos, next - pos);
    std::size_t used = 0;
    int idx = 0;
    try {
      idx = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad subset token '" + tok + "'");
    }
    if (used != tok.size() || idx < 1 || idx > n)
      throw std::invalid_argument("bad subset index '" + tok + "' for n=" +
                                  std::to_string(n));
    const SubsetMask bit = SubsetMask{1} << (idx - 1);
    if (mask & bit)
      throw std::invalid_argument("duplicate index in subset '" + text + "'");
    mask |= bit;
  }
  return mask;
}

}  // namespace stam
