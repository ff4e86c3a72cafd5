#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

namespace oriented {

/// Non-increasing positive parts.
using Partition = std::vector<int>;

/// Partitions of w with at most `max_parts` parts (negative: unbounded),
/// largest first in reverse lexicographic order.
inline std::vector<Partition> partitions_of(int w, int max_parts = -1) {
  std::vector<Partition> out;
  if (w < 0) return out;
  Partition cur;
  std::function<void(int, int)> rec = [&](int left, int largest) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    if (max_parts >= 0 && static_cast<int>(cur.size()) >= max_parts) return;
    for (int k = std::min(left, largest); k >= 1; --k) {
      cur.push_back(k);
      rec(left - k, k);
      cur.pop_back();
    }
  };
  rec(w, w);
  return out;
}

inline std::vector<Partition> partitions_with_exactly(int w, int parts) {
  std::vector<Partition> out;
  for (auto& p : partitions_of(w, parts))
    if (static_cast<int>(p.size()) == parts) out.push_back(std::move(p));
  return out;
}

inline Partition merge(const Partition& a, const Partition& b) {
  Partition out(a);
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

inline int size_of(const Partition& p) {
  int s = 0;
  for (int x : p) s += x;
  return s;
}

/// "b3*b1^2"-style label; the empty partition is "1".
inline std::string partition_label(const Partition& p, const std::string& prefix) {
  if (p.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < p.size();) {
    std::size_t j = i;
    while (j < p.size() && p[j] == p[i]) ++j;
    if (!out.empty()) out += "*";
    out += prefix + std::to_string(p[i]);
    if (j - i > 1) out += "^" + std::to_string(j - i);
    i = j;
  }
  return out;
}

}  // namespace oriented
