#ifndef SKEWLAT_TABLE_HPP
#define SKEWLAT_TABLE_HPP

#include <cstdint>
#include <vector>

#include "skewlat/check.hpp"

namespace skewlat {

// n x n operation table over element indices 0..n-1, row major.
struct SqTable {
  int n = 0;
  std::vector<int> v;

  SqTable() = default;
  explicit SqTable(int size, int fill = 0) : n(size), v(size * size, fill) {}

  int at(int a, int b) const { return v[a * n + b]; }
  int& at(int a, int b) { return v[a * n + b]; }

  bool operator==(const SqTable& o) const = default;
};

// Builds a table from nested rows, checking squareness and entry range.
SqTable table_from_rows(const std::vector<std::vector<int>>& rows);

// Point-set bitmask; bit p = point p. Spaces are capped well below 32 points.
using Mask = std::uint32_t;

inline Mask full_mask(int points) {
  return points == 32 ? ~Mask(0) : (Mask(1) << points) - 1;
}
inline bool mask_has(Mask m, int p) { return (m >> p) & 1u; }
inline bool subset_of(Mask a, Mask b) { return (a & ~b) == 0; }

std::vector<int> mask_to_list(Mask m);
Mask mask_from_list(const std::vector<int>& pts, int points);

}  // namespace skewlat

#endif
