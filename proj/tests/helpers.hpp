#ifndef SKEWLAT_TESTS_HELPERS_HPP
#define SKEWLAT_TESTS_HELPERS_HPP

#include "skewlat/duality.hpp"
#include "skewlat/lattice.hpp"
#include "skewlat/sheaf.hpp"
#include "skewlat/skew.hpp"
#include "skewlat/space.hpp"

namespace fixtures {

using namespace skewlat;

// 0 < 1 < ... < n-1
inline FiniteLattice chain(int n) {
  SqTable mt(n), jt(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      mt.at(i, j) = std::min(i, j);
      jt.at(i, j) = std::max(i, j);
    }
  return validate_lattice(mt, jt);
}

// Powerset of k generators; element index is the subset mask.
inline FiniteLattice powerset(int k) {
  int n = 1 << k;
  SqTable mt(n), jt(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      mt.at(i, j) = i & j;
      jt.at(i, j) = i | j;
    }
  return validate_lattice(mt, jt);
}

inline FiniteLattice chain3() { return chain(3); }
inline FiniteLattice bool2() { return powerset(2); }

// Three incomparable atoms below a common top: not distributive.
inline FiniteLattice m3() {
  int n = 5;  // 0 bottom, 1..3 atoms, 4 top
  SqTable mt(n), jt(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        mt.at(i, j) = i;
        jt.at(i, j) = i;
      } else {
        mt.at(i, j) = (i == 4) ? j : (j == 4 ? i : 0);
        jt.at(i, j) = (i == 0) ? j : (j == 0 ? i : 4);
      }
    }
  return validate_lattice(mt, jt);
}

inline FiniteSpace sier() { return space_from_lists(2, {{}, {1}, {0, 1}}); }
inline FiniteSpace disc2() {
  return space_from_lists(2, {{}, {0}, {1}, {0, 1}});
}
inline FiniteSpace indiscrete2() { return space_from_lists(2, {{}, {0, 1}}); }
inline FiniteSpace point_space() { return space_from_lists(1, {{}, {0}}); }
// Opens nested as a chain: {} < {2} < {1,2} < {0,1,2}.
inline FiniteSpace chain3_space() {
  return space_from_lists(3, {{}, {2}, {1, 2}, {0, 1, 2}});
}

// H(SIER, stalks 1 at the closed point 0 and 2 at the open point 1).
inline HContext nc5_context() {
  FiniteSpace y = sier();
  return make_H(y, sheaf_with_stalks(front_topology(y), {1, 2}));
}
inline FiniteSkewLattice nc5() { return nc5_context().h.skew; }

inline FiniteSkewLattice p22() { return partial_function_skew(2, 2); }

}  // namespace fixtures

#endif
