#ifndef SKEWLAT_ASSEMBLY_HPP
#define SKEWLAT_ASSEMBLY_HPP

#include <string>
#include <vector>

#include "skewlat/check.hpp"
#include "skewlat/lattice.hpp"
#include "skewlat/sheaf.hpp"
#include "skewlat/space.hpp"

namespace skewlat {

struct Nucleus {
  std::vector<int> table;

  bool operator==(const Nucleus& o) const = default;
  bool operator<(const Nucleus& o) const { return table < o.table; }
};

// N1 inflationary, N2 meet-preserving, N3 idempotent.
CheckResult is_nucleus(const FiniteFrame& l, const std::vector<int>& table);

// All nuclei under the pointwise order, as a validated frame.
struct Assembly {
  std::vector<Nucleus> nuclei;  // lexicographic by table
  FiniteFrame lattice;

  int index_of(const std::vector<int>& table) const;  // -1 when absent
};
Assembly enumerate_nuclei(const FiniteFrame& l, int cap = 8);

// nu_S(U) = union of all opens V with V cap S inside U, on opens_lattice(y).
Nucleus nucleus_of_sublocale(const FiniteSpace& y, Mask s);

// a -> nu_a with nu_a(b) = a join b; verified injective frame morphism.
TableMorphism open_nucleus_embedding(const FiniteFrame& l, const Assembly& a);

struct DissolutionReport {
  bool sobrified = false;   // input was replaced by its sobrification
  int nucleus_count = 0;
  int points = 0;           // points of the opens lattice
  bool count_matches = false;  // nucleus_count == 2^points
  bool boolean = false;
  bool envelope_iso = false;   // assembly isomorphic to the boolean envelope
  bool front_iso = false;      // pt(assembly) homeomorphic to the front space
};
DissolutionReport dissolution_checks(const FiniteSpace& y, int cap = 8);

// Instance check of the stable gluing condition against pushforward
// sheafhood, for functorial section data on the patch space of Spec(O(Y)).
struct StableSheafReport {
  bool stable_ok = false;
  std::string stable_law;
  std::vector<int> stable_witness;
  bool pushforward_ok = false;
  std::string pushforward_law;
  std::vector<int> pushforward_witness;
  bool nonempty_global = false;  // theorem hypothesis
  bool agree = false;
};
StableSheafReport stable_sheaf_check(const FiniteSpace& y,
                                     const FiniteSheaf& g);

}  // namespace skewlat

#endif
