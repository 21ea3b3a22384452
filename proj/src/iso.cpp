#include "skewlat/iso.hpp"

#include <algorithm>
#include <map>

namespace skewlat {

namespace {

// 1-dimensional refinement of element colors by operation behavior.
std::vector<int> refine_colors(const std::vector<const SqTable*>& ops, int n) {
  std::vector<int> color(n, 0);
  for (int round = 0; round < n; ++round) {
    std::vector<std::vector<int>> sig(n);
    for (int x = 0; x < n; ++x) {
      sig[x].push_back(color[x]);
      for (const SqTable* op : ops) {
        std::vector<int> row;
        for (int y = 0; y < n; ++y) {
          row.push_back(color[op->at(x, y)]);
          row.push_back(color[op->at(y, x)]);
        }
        std::sort(row.begin(), row.end());
        sig[x].insert(sig[x].end(), row.begin(), row.end());
      }
    }
    // Ids ranked by sorted signature so colors are comparable across
    // structures refined independently.
    std::vector<std::vector<int>> distinct(sig.begin(), sig.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()),
                   distinct.end());
    std::map<std::vector<int>, int> ids;
    for (size_t i = 0; i < distinct.size(); ++i) ids[distinct[i]] = (int)i;
    std::vector<int> next(n);
    for (int x = 0; x < n; ++x) next[x] = ids[sig[x]];
    if (next == color) break;
    color = next;
  }
  return color;
}

struct IsoSearch {
  const std::vector<const SqTable*>& ops_a;
  const std::vector<const SqTable*>& ops_b;
  int n;
  std::vector<int> color_a, color_b;
  std::vector<int> map;     // a -> b, -1 unset
  std::vector<char> used;   // b side

  bool consistent(int x) const {
    for (size_t k = 0; k < ops_a.size(); ++k) {
      const SqTable& A = *ops_a[k];
      const SqTable& B = *ops_b[k];
      for (int y = 0; y < n; ++y) {
        if (map[y] < 0) continue;
        int xy = A.at(x, y), yx = A.at(y, x);
        if (map[xy] >= 0 && B.at(map[x], map[y]) != map[xy]) return false;
        if (map[yx] >= 0 && B.at(map[y], map[x]) != map[yx]) return false;
      }
    }
    return true;
  }

  bool extend(int x) {
    if (x == n) return true;
    for (int b = 0; b < n; ++b) {
      if (used[b] || color_b[b] != color_a[x]) continue;
      map[x] = b;
      used[b] = 1;
      if (consistent(x) && extend(x + 1)) return true;
      map[x] = -1;
      used[b] = 0;
    }
    return false;
  }
};

}  // namespace

std::optional<std::vector<int>> find_op_isomorphism(
    const std::vector<const SqTable*>& ops_a,
    const std::vector<const SqTable*>& ops_b) {
  if (ops_a.size() != ops_b.size() || ops_a.empty()) return std::nullopt;
  int n = ops_a[0]->n;
  if (ops_b[0]->n != n) return std::nullopt;

  IsoSearch s{ops_a, ops_b, n, refine_colors(ops_a, n), refine_colors(ops_b, n),
              std::vector<int>(n, -1), std::vector<char>(n, 0)};
  // Color class sizes must match.
  {
    std::vector<int> ca = s.color_a, cb = s.color_b;
    std::sort(ca.begin(), ca.end());
    std::sort(cb.begin(), cb.end());
    if (ca != cb) return std::nullopt;
  }
  if (s.extend(0)) return s.map;
  return std::nullopt;
}

}  // namespace skewlat
