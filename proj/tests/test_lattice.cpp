#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "generators.hpp"
#include "helpers.hpp"

using namespace skewlat;
using namespace fixtures;

TEST_CASE("one-element lattice validates") {
  FiniteLattice l = validate_lattice(table_from_rows({{0}}), table_from_rows({{0}}));
  CHECK(l.bottom == 0);
  CHECK(l.top == 0);
}

TEST_CASE("chain3 validates with the expected bounds") {
  FiniteLattice l = chain3();
  CHECK(l.bottom == 0);
  CHECK(l.top == 2);
  CHECK(l.leq(0, 1));
  CHECK(l.leq(1, 2));
  CHECK(!l.leq(2, 1));
}

TEST_CASE("broken absorption is reported with a witness") {
  // meet = min on a 2-chain, join constant top except on the diagonal.
  SqTable mt(2), jt(2);
  mt.at(0, 0) = 0; mt.at(0, 1) = 0; mt.at(1, 0) = 0; mt.at(1, 1) = 1;
  jt.at(0, 0) = 0; jt.at(0, 1) = 0; jt.at(1, 0) = 0; jt.at(1, 1) = 1;
  try {
    validate_lattice(mt, jt);
    FAIL("expected a validation error");
  } catch (const Error& e) {
    CHECK(e.code == "AxiomViolation");
  }
}

TEST_CASE("is_frame: chains and boolean algebras yes, M3 no") {
  CHECK(is_frame(chain3()).ok);
  CHECK(is_frame(bool2()).ok);
  CheckResult r = is_frame(m3());
  CHECK(!r.ok);
  REQUIRE(r.witness.size() == 3);
  // The witness triple really violates distributivity.
  FiniteLattice l = m3();
  int x = r.witness[0], y = r.witness[1], z = r.witness[2];
  CHECK(l.meet_of(x, l.join_of(y, z)) !=
        l.join_of(l.meet_of(x, y), l.meet_of(x, z)));
}

TEST_CASE("points of small frames") {
  auto pts = points(FiniteFrame::certify(chain3()));
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].members == std::vector<int>{2});      // filter {top}
  CHECK(pts[1].members == std::vector<int>{1, 2});   // filter {a, top}
  CHECK(points(FiniteFrame::certify(bool2())).size() == 2);
  FiniteLattice one = validate_lattice(table_from_rows({{0}}), table_from_rows({{0}}));
  CHECK(points(FiniteFrame::certify(one)).empty());
}

TEST_CASE("points agree with the brute-force oracle on all small frames") {
  for (const FiniteLattice& l : gen::all_distributive_upto_iso(6)) {
    FiniteFrame f = FiniteFrame::certify(l);
    CHECK(points(f) == points_bruteforce(f));
    // Birkhoff: as many points as join-irreducibles.
    CHECK(points(f).size() == join_irreducibles(l).size());
  }
}

TEST_CASE("finite frames are spatial: points separate elements") {
  for (const FiniteLattice& l : gen::all_distributive_upto_iso(6)) {
    FiniteFrame f = FiniteFrame::certify(l);
    auto pts = points(f);
    for (int a = 0; a < l.n; ++a)
      for (int b = a + 1; b < l.n; ++b) {
        bool separated = false;
        for (const Point& p : pts)
          if (p.contains(a) != p.contains(b)) separated = true;
        CHECK(separated);
      }
  }
}

TEST_CASE("heyting implication examples and adjunction") {
  FiniteFrame c3 = FiniteFrame::certify(chain3());
  CHECK(heyting_implication(c3, 0, 1) == 2);  // weaker from stronger: top
  CHECK(heyting_implication(c3, 2, 1) == 1);  // 1 -> a  gives a
  FiniteFrame b2 = FiniteFrame::certify(bool2());
  CHECK(heyting_implication(b2, 1, 0) == 2);  // complement of {x} is {y}

  for (const FiniteLattice& l : gen::all_distributive_upto_iso(5)) {
    FiniteFrame f = FiniteFrame::certify(l);
    for (int a = 0; a < l.n; ++a)
      for (int b = 0; b < l.n; ++b) {
        int imp = heyting_implication(f, a, b);
        for (int c = 0; c < l.n; ++c)
          CHECK(l.leq(l.meet_of(c, a), b) == l.leq(c, imp));
      }
  }
}

TEST_CASE("boolean envelope of chain3 is the 4-element boolean algebra") {
  BooleanEnvelope env = boolean_envelope(FiniteFrame::certify(chain3()));
  CHECK(env.algebra.n == 4);
  CHECK(is_boolean(env.algebra));
  CHECK((env.embedding.checked & laws_frame_hom) == laws_frame_hom);
}

TEST_CASE("boolean input is its own envelope; degenerate case") {
  BooleanEnvelope env = boolean_envelope(FiniteFrame::certify(bool2()));
  CHECK(env.algebra.n == 4);
  CHECK(lattice_isomorphic(env.algebra, bool2()));
  FiniteLattice one = validate_lattice(table_from_rows({{0}}), table_from_rows({{0}}));
  CHECK(boolean_envelope(FiniteFrame::certify(one)).algebra.n == 1);
}

TEST_CASE("boolean envelope is idempotent up to isomorphism") {
  for (const FiniteLattice& l : gen::all_distributive_upto_iso(5)) {
    BooleanEnvelope e1 = boolean_envelope(FiniteFrame::certify(l));
    BooleanEnvelope e2 = boolean_envelope(FiniteFrame::certify(e1.algebra));
    CHECK(lattice_isomorphic(e1.algebra, e2.algebra));
  }
}

TEST_CASE("check_morphism verifies the requested laws") {
  FiniteLattice c3 = chain3();
  std::vector<int> id{0, 1, 2};
  TableMorphism m = check_morphism(id, c3, c3,
                                   laws_frame_hom | law_proper);
  CHECK(m.checked == (laws_frame_hom | law_proper));

  std::vector<int> const_top{2, 2, 2};
  CHECK(morphism_laws(const_top, c3, c3, law_meet | law_join).ok);
  try {
    check_morphism(const_top, c3, c3, law_zero);
    FAIL("expected LawViolation");
  } catch (const Error& e) {
    CHECK(e.code == "LawViolation");
    CHECK(e.law == "preserves-0");
  }

  BooleanEnvelope env = boolean_envelope(FiniteFrame::certify(chain3()));
  CHECK(morphism_laws(env.embedding.map, chain3(), env.algebra, laws_frame_hom).ok);
}

TEST_CASE("lattice enumerator matches the known unlabeled counts") {
  auto all = gen::all_lattices_upto_iso(6);
  int counts[7] = {0, 0, 0, 0, 0, 0, 0};
  for (const FiniteLattice& l : all) counts[l.n]++;
  CHECK(counts[1] == 1);
  CHECK(counts[2] == 1);
  CHECK(counts[3] == 1);
  CHECK(counts[4] == 2);
  CHECK(counts[5] == 5);
  CHECK(counts[6] == 15);
}
