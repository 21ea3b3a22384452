#ifndef SKEWLAT_DUALITY_HPP
#define SKEWLAT_DUALITY_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skewlat/check.hpp"
#include "skewlat/sheaf.hpp"
#include "skewlat/skew.hpp"
#include "skewlat/space.hpp"

namespace skewlat {

// A noncommutative frame built from pairs (open, section); element i is the
// pair element_labels[i] = (open index, section id).
struct NcFramePresentation {
  FiniteSkewLattice skew;
  std::vector<std::pair<int, int>> element_labels;
  std::string provenance;
};

// H input/output bundle, kept together for the morphism calculus.
struct HContext {
  FiniteSpace y;
  FiniteSpace front;
  FiniteSheaf e;
  NcFramePresentation h;
  std::map<std::pair<int, int>, int> elem_index;

  int element(int open_idx, int sid) const {
    return elem_index.at({open_idx, sid});
  }
};

HContext make_H(const FiniteSpace& y, const FiniteSheaf& e);
NcFramePresentation H(const FiniteSpace& y, const FiniteSheaf& e);

// a and b agree in p when some c,d with p(c)=0, p(d)=1 give
// (a&d)|c = (b&d)|c. p is a point of the commutative shadow.
bool agree_in_p(const FiniteSkewLattice& a, const Shadow& sh, const Point& p,
                int x, int y);

struct PrimitiveQuotient {
  Point point;
  std::vector<std::vector<int>> classes;  // partition of {x : p([x]) = 1}
  std::vector<int> projection;            // element -> 0 or 1 + class index
  FiniteSkewLattice quotient;             // primitive, carrier {0} + classes
};
PrimitiveQuotient primitive_quotient(const FiniteSkewLattice& a,
                                     const Shadow& sh, const Point& p);

// G(A) = (Y_A, E_A): spectrum of the shadow, the quotient-class etale space
// over its front topology, and the recovered sheaf.
struct GOutput {
  Shadow sh;
  std::vector<Point> points;  // points of the shadow, canonical order
  FiniteSpace base;           // spectral topology on the points
  FiniteSpace front;
  EtaleSpace etale;           // over front
  FiniteSheaf sheaf;          // on front
  std::vector<std::vector<std::vector<int>>> choices;  // germ vectors per open
  std::vector<std::vector<int>> class_of_elem;  // [point][element] or -1
  std::vector<int> stalk_sizes;                 // classes per point
  std::vector<Mask> u_of;                       // U_a per element
  std::vector<int> section_of;                  // s_a per element
};
GOutput G(const FiniteSkewLattice& a);

CheckResult ncframe_morphism_laws(const FiniteSkewLattice& a,
                                  const FiniteSkewLattice& b,
                                  const std::vector<int>& h,
                                  bool* exact = nullptr,
                                  const ClassifyOptions& opt = {});

std::vector<std::vector<int>> enumerate_ncframe_morphisms(
    const FiniteSkewLattice& a, const FiniteSkewLattice& b,
    long cap = 1000000);

struct SigmaResult {
  GOutput ga;
  HContext hga;
  std::vector<int> table;  // a -> (U_a, s_a)
  bool bijective = false;  // spatiality verdict
};
SigmaResult unit_sigma(const FiniteSkewLattice& a);

// Morphism (Y,E) -> G(A) in the sheaf-pair category: a continuous point map
// into the base and, per base point and stalk class, a section over the
// fiber. Components over larger front opens are the forced gluings.
struct ShMorphism {
  std::vector<int> f;
  std::map<std::pair<int, int>, int> lambda;
};

ShMorphism transpose(const FiniteSkewLattice& a, const GOutput& ga,
                     const HContext& hy, const std::vector<int>& phi);
std::vector<int> transpose_inv(const FiniteSkewLattice& a, const GOutput& ga,
                               const HContext& hy, const ShMorphism& m);

std::vector<ShMorphism> enumerate_sh_morphisms(const HContext& hy,
                                               const GOutput& ga,
                                               long cap = 1000000);

// Counit component at (Y,E): the transpose of the identity on H(Y,E).
struct CounitResult {
  GOutput ga;
  ShMorphism m;
  bool iso = false;
};
CounitResult counit(const HContext& hy);

// General morphism (Y,E) -> (Y',E') of sheaf pairs: a continuous point map
// and natural components E'(W) -> E(f^-1 W) per front-open W of Y'.
struct ShPairMorphism {
  std::vector<int> f;
  std::vector<std::vector<int>> lambda;  // indexed by dst front-open
};

CheckResult sh_pair_morphism_laws(const HContext& src, const HContext& dst,
                                  const ShPairMorphism& m);
ShPairMorphism identity_sh_morphism(const HContext& hy);
// Composite of a -> b and b -> c: the point maps compose and the component
// at W is the b-component at f2^-1(W) after the c-component at W.
ShPairMorphism compose_sh(const HContext& a, const HContext& b,
                          const HContext& c, const ShPairMorphism& ab,
                          const ShPairMorphism& bc);
// Contravariant action: H(m) : H(dst) -> H(src), (U,s) -> (f^-1 U, lambda(s)).
std::vector<int> H_on_morphism(const HContext& src, const HContext& dst,
                               const ShPairMorphism& m);
// All morphisms src -> dst; requires a T0 destination base.
std::vector<ShPairMorphism> enumerate_sh_pair_morphisms(const HContext& src,
                                                        const HContext& dst,
                                                        long cap = 100000);

struct SeparationResult {
  int witness_point = -1;      // index into the shadow points
  std::vector<int> q;          // table into primitive(2); 1 = q(a), 2 = q(b)
  FiniteSkewLattice target;
};
// Morphism to the two-top primitive with q(x) != q(y), if one exists.
std::optional<SeparationResult> separate(const FiniteSkewLattice& a, int x,
                                         int y);
// Same, with the shadow and its points precomputed by the caller.
std::optional<SeparationResult> separate(const FiniteSkewLattice& a,
                                         const Shadow& sh,
                                         const std::vector<Point>& pts, int x,
                                         int y);

// The Priestley star: pairs (upward closed set, section over it).
NcFramePresentation star(const PriestleyData& p, const FiniteSheaf& f);

// The general-duality frame at finite scale; same carrier convention as H
// but meets/joins are computed through germ tuples.
NcFramePresentation dissolution_frame(const FiniteSpace& y,
                                      const FiniteSheaf& f);

// Germ-table embedding into the partial-function frame on (points, stalks).
struct Embedding {
  FiniteSkewLattice target;
  std::vector<int> table;
};
Embedding embed_into_partial_functions(const FiniteSkewLattice& a,
                                       const GOutput& ga);

}  // namespace skewlat

#endif
