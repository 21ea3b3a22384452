#ifndef SKEWLAT_SPACE_HPP
#define SKEWLAT_SPACE_HPP

#include <optional>
#include <vector>

#include "skewlat/check.hpp"
#include "skewlat/lattice.hpp"
#include "skewlat/table.hpp"

namespace skewlat {

inline constexpr int kMaxPoints = 12;

// Finite topological space stored with its full open family (not a basis),
// opens ascending by mask value.
struct FiniteSpace {
  int points = 0;
  std::vector<Mask> opens;
  std::vector<Mask> min_open;  // per point, the least open containing it

  Mask full() const { return full_mask(points); }
  bool is_open(Mask m) const;
  int open_index(Mask m) const;  // -1 when not open

  bool operator==(const FiniteSpace& o) const {
    return points == o.points && opens == o.opens;
  }
};

FiniteSpace validate_space(int points, std::vector<Mask> opens);
FiniteSpace space_from_lists(int points,
                             const std::vector<std::vector<int>>& opens);

// Family closure helpers; shared with the duality module.
std::vector<Mask> generate_topology(std::vector<Mask> subbasis, int points);

// x <= y iff x lies in the closure of {y}.
struct SpecializationOrder {
  int points = 0;
  std::vector<char> leq;
  bool t0 = true;
  std::vector<int> witness;  // indistinguishable pair when not T0

  bool at(int x, int y) const { return leq[x * points + y]; }
};
SpecializationOrder specialization(const FiniteSpace& y);

// Topology generated by the locally closed sets. Also generated from the
// subbasis of all opens and closeds; both routes are computed and compared.
FiniteSpace front_topology(const FiniteSpace& y);

CheckResult is_sober(const FiniteSpace& y);

struct Sobrification {
  FiniteSpace space;
  std::vector<Point> pts;      // points of the opens lattice, canonical order
  std::vector<int> point_map;  // y -> index of its evaluation point
};
Sobrification sobrify(const FiniteSpace& y);

// The open-set family as a frame; element i is opens[i].
FiniteFrame opens_lattice(const FiniteSpace& y);

struct Spectrum {
  FiniteSpace space;
  std::vector<Point> filters;  // prime filters, canonical order
  std::vector<Mask> hat;       // per lattice element, its basic open
};
Spectrum spectrum(const FiniteLattice& d);

FiniteSpace patch_topology(const FiniteSpace& x);

// (Spec D, patch, <=) with both topologies kept.
struct PriestleyData {
  int carrier = 0;
  std::vector<char> order;  // filter inclusion = specialization order
  FiniteSpace spectral;
  FiniteSpace patch;

  bool leq(int x, int y) const { return order[x * carrier + y]; }
};
PriestleyData priestley_of(const FiniteFrame& d);
bool is_esakia(const PriestleyData& p);
bool is_ext_ord_disconnected(const PriestleyData& p);

bool spaces_homeomorphic(const FiniteSpace& a, const FiniteSpace& b,
                         std::vector<int>* map = nullptr);

}  // namespace skewlat

#endif
