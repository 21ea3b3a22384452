#ifndef SKEWLAT_LATTICE_HPP
#define SKEWLAT_LATTICE_HPP

#include <optional>
#include <string>
#include <vector>

#include "skewlat/check.hpp"
#include "skewlat/table.hpp"

namespace skewlat {

// Bounded lattice as validated operation tables. The order is derived:
// a <= b iff meet(a,b) = a.
struct FiniteLattice {
  int n = 0;
  SqTable meet;
  SqTable join;
  int bottom = 0;
  int top = 0;
  std::vector<std::string> labels;  // reporting only, never semantic

  int meet_of(int a, int b) const { return meet.at(a, b); }
  int join_of(int a, int b) const { return join.at(a, b); }
  bool leq(int a, int b) const { return meet.at(a, b) == a; }
};

// A lattice together with a checked distributivity certificate.
class FiniteFrame {
 public:
  static FiniteFrame certify(FiniteLattice l);

  const FiniteLattice& lat() const { return lat_; }
  int size() const { return lat_.n; }
  int meet_of(int a, int b) const { return lat_.meet_of(a, b); }
  int join_of(int a, int b) const { return lat_.join_of(a, b); }
  bool leq(int a, int b) const { return lat_.leq(a, b); }
  int bottom() const { return lat_.bottom; }
  int top() const { return lat_.top; }

 private:
  explicit FiniteFrame(FiniteLattice l) : lat_(std::move(l)) {}
  FiniteLattice lat_;
};

// Prime filter of a lattice, stored in both views: the upward closed member
// set and the 0/1 table of the corresponding morphism to the 2-element frame.
struct Point {
  std::vector<char> in;      // in[a] = 1 iff a is in the filter
  std::vector<int> members;  // sorted

  bool contains(int a) const { return in[a] != 0; }
  bool operator==(const Point& o) const { return in == o.in; }
  bool operator<(const Point& o) const { return in < o.in; }
};

inline constexpr unsigned law_meet = 1u;
inline constexpr unsigned law_join = 2u;
inline constexpr unsigned law_zero = 4u;
inline constexpr unsigned law_one = 8u;
inline constexpr unsigned law_proper = 16u;
inline constexpr unsigned laws_lattice_hom = law_meet | law_join;
inline constexpr unsigned laws_frame_hom =
    law_meet | law_join | law_zero | law_one;

// Element-indexed function table with the set of laws it was verified
// against. `checked` holds exactly the laws that passed.
struct TableMorphism {
  int source_n = 0;
  int target_n = 0;
  std::vector<int> map;
  unsigned checked = 0;

  int operator()(int a) const { return map[a]; }
};

inline constexpr int kMaxCarrier = 256;  // O(n^3) identity scans stay exact

FiniteLattice validate_lattice(const SqTable& meet, const SqTable& join,
                               std::vector<std::string> labels = {});

// Distributivity scan; witness is a violating (x,y,z) triple.
CheckResult is_frame(const FiniteLattice& l);

// Elements j with j != 0 that are not joins of two strictly smaller elements.
std::vector<int> join_irreducibles(const FiniteLattice& l);

// All morphisms L -> 2 as prime filters, in increasing order of their
// characteristic vectors. Default route extracts them from join-irreducibles.
std::vector<Point> points(const FiniteFrame& l);
// Independent oracle: scans all 2^n labelings. Requires n <= 16.
std::vector<Point> points_bruteforce(const FiniteFrame& l);

// max{ c : meet(c,a) <= b }; total on finite distributive lattices.
int heyting_implication(const FiniteFrame& l, int a, int b);

// Boolean subalgebra of the powerset of points(l) generated by the sets
// a^ = { p : p(a) = 1 }, plus the generating embedding.
struct BooleanEnvelope {
  FiniteLattice algebra;
  std::vector<Mask> element_sets;  // point set per algebra element, ascending
  TableMorphism embedding;         // a -> index of a^
};
BooleanEnvelope boolean_envelope(const FiniteFrame& l);

// Verifies the requested laws for a raw map; throws LawViolation on the
// first failure, otherwise returns the morphism with `checked` = laws.
TableMorphism check_morphism(const std::vector<int>& map,
                             const FiniteLattice& src,
                             const FiniteLattice& tgt, unsigned laws);
// Non-throwing variant.
CheckResult morphism_laws(const std::vector<int>& map, const FiniteLattice& src,
                          const FiniteLattice& tgt, unsigned laws);

bool lattice_isomorphic(const FiniteLattice& a, const FiniteLattice& b,
                        std::vector<int>* iso = nullptr);

// True iff every element has a complement (meet = bottom, join = top).
bool is_boolean(const FiniteLattice& l);

}  // namespace skewlat

#endif
