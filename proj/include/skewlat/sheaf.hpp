#ifndef SKEWLAT_SHEAF_HPP
#define SKEWLAT_SHEAF_HPP

#include <map>
#include <utility>
#include <vector>

#include "skewlat/check.hpp"
#include "skewlat/space.hpp"

namespace skewlat {

// Sections per open with restriction tables for every nested pair of opens.
// Section ids are dense 0..sections[u]-1.
struct FiniteSheaf {
  FiniteSpace space;
  std::vector<int> sections;  // count per open index
  std::map<std::pair<int, int>, std::vector<int>> res;  // (U,V), V subset of U

  int sec(int u) const { return sections[u]; }
  int restrict_sec(int u, int v, int s) const {
    return u == v ? s : res.at({u, v})[s];
  }
};

// Functoriality only (identity and composition of restriction tables).
FiniteSheaf validate_presheaf(FiniteSpace space, std::vector<int> sections,
                              std::map<std::pair<int, int>, std::vector<int>> res);
// Functoriality plus gluing over every open cover.
FiniteSheaf validate_sheaf(FiniteSpace space, std::vector<int> sections,
                           std::map<std::pair<int, int>, std::vector<int>> res);
// Non-throwing gluing check for presheaf data.
CheckResult sheaf_gluing(const FiniteSheaf& e);

// Stalk at p is the section set over the minimal open around p.
int stalk_open(const FiniteSheaf& e, int p);     // open index of min_open(p)
int stalk_size(const FiniteSheaf& e, int p);
// Germ of section s over open u at p, as a stalk section id.
int germ_at(const FiniteSheaf& e, int u, int s, int p);
// All germs of s over u, indexed by the points of u in ascending order.
std::vector<int> germ_tuple(const FiniteSheaf& e, int u, int s);

// Total space of germs; germ ids are offset[p] + stalk section id.
struct EtaleSpace {
  FiniteSpace base;
  FiniteSpace total;                        // topology on germ indices
  std::vector<int> proj;                    // germ -> base point
  std::vector<std::pair<int, int>> germ_id; // germ -> (point, stalk id)
  std::vector<int> offset;                  // per base point

  int germ_index(int p, int sid) const { return offset[p] + sid; }
};

// Continuity of proj and the local homeomorphism property.
CheckResult etale_laws(const EtaleSpace& et);

EtaleSpace etale_space(const FiniteSheaf& e);
// Sections of a local homeomorphism; throws NotLocalHomeo otherwise.
// When given, `choices_out` receives the germ-choice vector of every
// section, per open, in section-id order.
FiniteSheaf sheaf_from_etale(
    const EtaleSpace& et,
    std::vector<std::vector<std::vector<int>>>* choices_out = nullptr);

// (f_*E)(W) = E(f^-1(W)); f is a point table into `target`.
FiniteSheaf pushforward(const std::vector<int>& f, const FiniteSpace& target,
                        const FiniteSheaf& e);

// Sheaf built from stalk data on the distinct minimal opens: section sets
// per node and restriction maps for nested nodes; sections over U are the
// compatible tuples over the nodes inside U.
struct StalkDiagram {
  std::vector<Mask> nodes;  // distinct minimal opens, ascending
  std::vector<int> sizes;
  std::map<std::pair<int, int>, std::vector<int>> maps;  // nested node pairs
};
StalkDiagram diagram_of(const FiniteSpace& y);  // nodes only, sizes/maps empty
FiniteSheaf sheaf_from_stalks(const FiniteSpace& y, const StalkDiagram& d);

// Stalk sizes per point with identity transition maps; on a discrete space
// this is the sheaf with the given stalks, in general the constant-like
// sheaf of locally constant choices.
FiniteSheaf sheaf_with_stalks(const FiniteSpace& y,
                              const std::vector<int>& point_stalk_sizes);
FiniteSheaf constant_sheaf(const FiniteSpace& y, int stalk);

}  // namespace skewlat

#endif
