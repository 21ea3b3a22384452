#ifndef SKEWLAT_ISO_HPP
#define SKEWLAT_ISO_HPP

#include <optional>
#include <vector>

#include "skewlat/table.hpp"

namespace skewlat {

// Bijection f with f(opA(x,y)) = opB(f(x),f(y)) for each paired table.
// Backtracking over refinement classes, lexicographic tie-breaking, so the
// returned isomorphism is deterministic.
std::optional<std::vector<int>> find_op_isomorphism(
    const std::vector<const SqTable*>& ops_a,
    const std::vector<const SqTable*>& ops_b);

}  // namespace skewlat

#endif
