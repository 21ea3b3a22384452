#ifndef SKEWLAT_SKEW_HPP
#define SKEWLAT_SKEW_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skewlat/check.hpp"
#include "skewlat/lattice.hpp"
#include "skewlat/table.hpp"

namespace skewlat {

struct FiniteSkewLattice {
  int n = 0;
  SqTable meet;
  SqTable join;
  std::optional<int> zero;
  std::vector<std::string> labels;

  int meet_of(int a, int b) const { return meet.at(a, b); }
  int join_of(int a, int b) const { return join.at(a, b); }
  // a <= b iff a&b = b&a = a, equivalently a|b = b = b|a.
  bool natural_leq(int a, int b) const {
    return meet.at(a, b) == a && meet.at(b, a) == a;
  }
  bool commute(int a, int b) const {
    return meet.at(a, b) == meet.at(b, a) && join.at(a, b) == join.at(b, a);
  }
};

// Green's D-classes with the natural partial order they inherit.
struct DStructure {
  std::vector<int> class_of;               // element -> class id
  std::vector<std::vector<int>> classes;   // sorted members, classes ordered
                                           // by least member
  std::vector<char> leq_elem;              // n*n natural order on elements
  std::vector<char> class_leq;             // k*k order on classes
  std::optional<int> top_class;

  bool elem_leq(int a, int b, int n) const { return leq_elem[a * n + b]; }
  bool cls_leq(int u, int v) const {
    return class_leq[u * (int)classes.size() + v];
  }
};

// Identity-catalog verdicts, each an exhaustive quantifier scan.
struct PropertyReport {
  bool left_handed = false;
  bool right_handed = false;
  bool strongly_distributive = false;
  bool symmetric = false;
  bool distributive = false;
  bool normal = false;
  bool has_zero = false;
  bool join_complete = false;
  bool ncframe = false;
  bool has_top_class = false;
  // join_complete (and hence ncframe) was decided from bounded-size subsets
  // plus sampled maximal cliques rather than the full subset scan.
  bool sampled = false;
  std::map<std::string, std::vector<int>> witnesses;
};

struct ClassifyOptions {
  int full_subset_cap = 12;   // exhaustive commuting-subset scan up to here
  int inf_dist_cap = 8;       // direct infinite-distributivity cross-check
  int sample_count = 1000;    // sampled maximal cliques beyond the cap
  std::uint64_t seed = 0;
};

FiniteSkewLattice validate_skew(const SqTable& meet, const SqTable& join,
                                std::optional<int> zero = std::nullopt,
                                std::vector<std::string> labels = {});

PropertyReport classify(const FiniteSkewLattice& s,
                        const ClassifyOptions& opt = {});

DStructure green_D(const FiniteSkewLattice& s);

// Quotient by D (the maximal lattice image) plus the natural projection.
struct Shadow {
  FiniteLattice lattice;
  TableMorphism projection;  // element -> class id; meet/join verified
  DStructure d;
};
Shadow shadow(const FiniteSkewLattice& s);

// Unique b <= a with [b] = u; requires a strongly distributive input.
int restrict_to_class(const FiniteSkewLattice& s, const DStructure& d, int a,
                      int u);

// Greatest lower bound of a nonempty subset in the natural order.
int intersection(const FiniteSkewLattice& s, const std::vector<int>& c);

// All partial functions r-set -> s-set under restriction/override. Element
// index encodes the function in base s+1 (digit 0 = undefined), so index 0
// is the empty function.
FiniteSkewLattice partial_function_skew(int r, int s, int cap = kMaxCarrier);

// Left-handed primitive skew lattice: 0 plus a rectangular class of t tops.
FiniteSkewLattice primitive(int t);

// Detects the (unique) element z with x|z = x = z|x for all x.
std::optional<int> find_zero(const FiniteSkewLattice& s);

// All maps preserving meet and join (and zero when both sides have one),
// enumerated lexicographically.
std::vector<std::vector<int>> enumerate_skew_homs(const FiniteSkewLattice& a,
                                                  const FiniteSkewLattice& b,
                                                  long cap = 1000000);

bool skew_isomorphic(const FiniteSkewLattice& a, const FiniteSkewLattice& b,
                     std::vector<int>* iso = nullptr);

// Commuting subsets and suprema in the natural order; shared by classify,
// morphism verification and the duality module. Enumeration cost is
// proportional to the number of commuting subsets; `node_cap` bounds it.
std::optional<int> natural_sup(const FiniteSkewLattice& s,
                               const std::vector<int>& subset);
std::vector<std::vector<int>> commuting_subsets(const FiniteSkewLattice& s,
                                                int max_size = -1,
                                                long node_cap = 1000000);

}  // namespace skewlat

#endif
