// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "generators.hpp"
#include "helpers.hpp"
#include "skewlat/assembly.hpp"

using namespace skewlat;
using namespace fixtures;

namespace {

struct Failure {
  std::string note;
};

struct Runner {
  bool all_ok = true;

  void run(int id, const std::string& name, double limit_s,
           const std::function<std::string()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    std::string note;
    bool ok = true;
    try {
      note = body();
    } catch (const Error& e) {
      ok = false;
      note = std::string("error: ") + e.what();
    } catch (const Failure& f) {
      ok = false;
      note = f.note;
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    if (limit_s > 0 && secs > limit_s) {
      ok = false;
      note += " [over time budget]";
    }
    all_ok = all_ok && ok;
    std::printf("[%s] %2d %-28s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", id,
                name.c_str(), secs, note.empty() ? "" : " ", note.c_str());
    std::fflush(stdout);
  }
};

void expect(bool cond, const std::string& note) {
  if (!cond) throw Failure{note};
}

std::string count_note(long n, const char* what) {
  return std::to_string(n) + " " + what;
}

// ---- shared instance generation ------------------------------------------

std::vector<FiniteSkewLattice> exhaustive_and_random() {
  std::vector<FiniteSkewLattice> out;
  for (int n = 1; n <= 4; ++n)
    gen::all_skew_lattices(n, [&](const FiniteSkewLattice& s) {
      out.push_back(s);
    });
  for (FiniteSkewLattice& s : gen::random_skew_instances(0, 500, 8))
    out.push_back(std::move(s));
  return out;
}

struct HInstance {
  FiniteSpace y;
  FiniteSheaf e;
  HContext ctx;
};

std::vector<HInstance> all_h_instances(int max_points, int max_stalk) {
  std::vector<HInstance> out;
  for (int pts = 1; pts <= max_points; ++pts)
    for (const FiniteSpace& y : gen::all_topologies(pts)) {
      FiniteSpace front = front_topology(y);
      for (const FiniteSheaf& e : gen::all_sheaves(front, max_stalk)) {
        if (e.sec(front.open_index(front.full())) == 0) continue;
        out.push_back({y, e, make_H(y, e)});
      }
    }
  return out;
}

struct NamedSkew {
  FiniteSkewLattice skew;
  std::string kind;
};

std::vector<NamedSkew> spatial_instances(const std::vector<HInstance>& hs) {
  std::vector<NamedSkew> out;
  for (const HInstance& h : hs) out.push_back({h.ctx.h.skew, "H"});
  for (const FiniteLattice& base : {chain3(), bool2()}) {
    PriestleyData p = priestley_of(FiniteFrame::certify(base));
    for (int bits = 0; bits < 4; ++bits) {
      std::vector<int> stalks{(bits & 1) + 1, ((bits >> 1) & 1) + 1};
      out.push_back({star(p, sheaf_with_stalks(p.patch, stalks)).skew, "star"});
    }
  }
  for (int t = 1; t <= 6; ++t) out.push_back({primitive(t), "primitive"});
  for (int r = 0; r <= 3; ++r)
    for (int s = 1; s <= 3; ++s)
      out.push_back({partial_function_skew(r, s), "partial"});
  return out;
}

// ---- criteria --------------------------------------------------------------

std::string criterion1() {
  auto instances = exhaustive_and_random();
  for (const FiniteSkewLattice& s : instances) {
    PropertyReport a = classify(s);
    gen::NaiveReport b = gen::naive_classify(s);
    bool same = a.left_handed == b.left_handed &&
                a.right_handed == b.right_handed &&
                a.strongly_distributive == b.strongly_distributive &&
                a.symmetric == b.symmetric &&
                a.distributive == b.distributive && a.normal == b.normal &&
                a.has_zero == b.has_zero &&
                a.join_complete == b.join_complete && a.ncframe == b.ncframe;
    expect(same, "classifier disagrees with the naive oracle");
    expect(!a.sampled, "sampled verdict inside the exact regime");
  }
  return count_note((long)instances.size(), "instances, all verdicts agree");
}

std::string criterion2() {
  auto instances = exhaustive_and_random();
  for (const FiniteSkewLattice& s : instances) {
    Shadow sh = shadow(s);  // validates the quotient as a lattice
    for (int a = 0; a < s.n; ++a)
      for (int b = 0; b < s.n; ++b) {
        expect(sh.d.class_of[s.meet_of(a, b)] ==
                   sh.lattice.meet_of(sh.d.class_of[a], sh.d.class_of[b]),
               "projection breaks meet");
        expect(sh.d.class_of[s.join_of(a, b)] ==
                   sh.lattice.join_of(sh.d.class_of[a], sh.d.class_of[b]),
               "projection breaks join");
      }
    PropertyReport r = classify(s);
    if (r.strongly_distributive)
      expect(r.symmetric && r.distributive && r.normal,
             "strong distributivity without symmetric+distributive+normal");
  }
  return count_note((long)instances.size(), "instances, zero counterexamples");
}

std::string criterion3() {
  long checked = 0;
  for (int r = 0; r <= 3; ++r)
    for (int s = 1; s <= 3; ++s) {
      FiniteSkewLattice p = partial_function_skew(r, s);
      auto digits = [&](int e) {
        std::vector<int> d(r);
        for (int i = 0; i < r; ++i) {
          d[i] = e % (s + 1);
          e /= (s + 1);
        }
        return d;
      };
      DStructure dd = green_D(p);
      for (int f = 0; f < p.n; ++f)
        for (int g = 0; g < p.n; ++g) {
          auto df = digits(f), dg = digits(g);
          bool same_dom = true, restr = true;
          for (int i = 0; i < r; ++i) {
            if ((df[i] == 0) != (dg[i] == 0)) same_dom = false;
            if (df[i] != 0 && df[i] != dg[i]) restr = false;
            if (df[i] == 0) continue;
          }
          expect((dd.class_of[f] == dd.class_of[g]) == same_dom,
                 "D-class differs from equal-domain");
          expect(p.natural_leq(f, g) == restr,
                 "natural order differs from restriction");
        }
      Shadow sh = shadow(p);
      expect(lattice_isomorphic(sh.lattice, powerset(r)),
             "shadow is not the powerset");
      ClassifyOptions opt;
      opt.full_subset_cap = 64;  // every commuting family fits under a total map
      PropertyReport rep = classify(p, opt);
      expect(rep.ncframe && rep.left_handed && rep.strongly_distributive,
             "P(r,s) fails the ncframe verdict");
      expect(!rep.sampled, "sampled verdict in the exact P(r,s) check");
      ++checked;
    }
  return count_note(checked, "parameter pairs, all clauses exact");
}

std::string criterion4() {
  auto hs = all_h_instances(3, 2);
  long pairs = 0;
  for (const HInstance& h : hs) {
    Shadow sh = shadow(h.ctx.h.skew);
    FiniteSpace front = h.ctx.front;
    for (int p = 0; p < h.y.points; ++p) {
      Point pt;
      pt.in.assign(sh.d.classes.size(), 0);
      for (size_t c = 0; c < sh.d.classes.size(); ++c) {
        int u = h.ctx.h.element_labels[sh.d.classes[c][0]].first;
        pt.in[c] = mask_has(h.y.opens[u], p) ? 1 : 0;
      }
      for (size_t c = 0; c < pt.in.size(); ++c)
        if (pt.in[c]) pt.members.push_back((int)c);
      for (int i = 0; i < h.ctx.h.skew.n; ++i)
        for (int j = 0; j < h.ctx.h.skew.n; ++j) {
          auto [u, s] = h.ctx.h.element_labels[i];
          auto [v, t] = h.ctx.h.element_labels[j];
          if (!mask_has(h.y.opens[u], p) || !mask_has(h.y.opens[v], p))
            continue;
          int fu = front.open_index(h.y.opens[u]);
          int fv = front.open_index(h.y.opens[v]);
          bool germs = germ_at(h.e, fu, s, p) == germ_at(h.e, fv, t, p);
          expect(agree_in_p(h.ctx.h.skew, sh, pt, i, j) == germs,
                 "agreement differs from germ equality");
          ++pairs;
        }
    }
  }
  return std::to_string(pairs) + " point-pair checks over " +
         std::to_string(hs.size()) + " sheaf pairs";
}

std::string criterion5() {
  auto hs = all_h_instances(3, 2);
  auto instances = spatial_instances(hs);
  for (const NamedSkew& inst : instances) {
    SigmaResult r = unit_sigma(inst.skew);
    expect(r.bijective, "sigma not bijective on a " + inst.kind + " instance");
  }
  long counits = 0;
  for (const HInstance& h : hs) {
    if (!is_sober(h.y)) continue;
    CounitResult c = counit(h.ctx);
    expect(c.iso, "counit not an isomorphism over a sober base");
    ++counits;
  }
  return count_note((long)instances.size(), "instances spatial; ") +
         std::to_string(counits) + " sober counits iso";
}

std::string criterion6() {
  FiniteSkewLattice a = nc5();
  GOutput ga = G(a);
  long targets = 0, homs_total = 0;
  for (const HInstance& h : all_h_instances(3, 2)) {
    if (h.ctx.h.skew.n > 9) continue;
    auto homs = enumerate_ncframe_morphisms(a, h.ctx.h.skew);
    auto shs = enumerate_sh_morphisms(h.ctx, ga);
    expect(homs.size() == shs.size(), "hom-set sizes differ");
    for (const auto& phi : homs) {
      ShMorphism m = transpose(a, ga, h.ctx, phi);
      expect(transpose_inv(a, ga, h.ctx, m) == phi,
             "transpose_inv(transpose) is not the identity");
    }
    for (const ShMorphism& m : shs) {
      std::vector<int> phi = transpose_inv(a, ga, h.ctx, m);
      expect(ncframe_morphism_laws(a, h.ctx.h.skew, phi).ok,
             "transposed map is not a morphism");
      ShMorphism back = transpose(a, ga, h.ctx, phi);
      expect(back.f == m.f && back.lambda == m.lambda,
             "transpose(transpose_inv) is not the identity");
    }
    ++targets;
    homs_total += (long)homs.size();
  }
  return std::to_string(homs_total) + " morphisms over " +
         std::to_string(targets) + " targets, bijection exact";
}

std::string criterion7() {
  auto hs = all_h_instances(3, 2);
  auto instances = spatial_instances(hs);
  long pairs = 0;
  for (const NamedSkew& inst : instances) {
    const FiniteSkewLattice& s = inst.skew;
    SigmaResult rs = unit_sigma(s);
    Shadow sh = shadow(s);
    std::vector<Point> pts = points(FiniteFrame::certify(sh.lattice));
    for (int x = 0; x < s.n; ++x)
      for (int y = x + 1; y < s.n; ++y) {
        if (sh.d.class_of[x] != sh.d.class_of[y]) continue;
        auto q = separate(s, sh, pts, x, y);
        expect(q.has_value() == (rs.table[x] != rs.table[y]),
               "separation differs from sigma injectivity");
        if (q.has_value()) {
          expect(q->q[x] == 1 && q->q[y] == 2, "separating values wrong");
          expect(ncframe_morphism_laws(s, q->target, q->q).ok,
                 "separating map is not a verified morphism");
        }
        ++pairs;
      }
    // Germ-table embedding into the partial-function frame.
    Embedding em = embed_into_partial_functions(s, rs.ga);
    expect((int)em.table.size() == s.n, "embedding incomplete");
  }
  return std::to_string(pairs) + " same-class pairs over " +
         std::to_string(instances.size()) + " instances";
}

std::string criterion8() {
  auto lattices = gen::all_distributive_upto_iso(6);
  for (const FiniteLattice& l : lattices) {
    FiniteFrame f = FiniteFrame::certify(l);
    Assembly a = enumerate_nuclei(f);
    int pts = (int)points(f).size();
    expect((int)a.nuclei.size() == (1 << pts), "nucleus count is not 2^points");
    expect(is_boolean(a.lattice.lat()), "assembly is not boolean");
    expect(lattice_isomorphic(a.lattice.lat(), boolean_envelope(f).algebra),
           "assembly differs from the boolean envelope");
    DissolutionReport r = dissolution_checks(spectrum(l).space);
    expect(r.front_iso, "points of the assembly differ from the front space");
    expect(r.count_matches && r.boolean && r.envelope_iso,
           "dissolution checks fail on the sober space");
  }
  return count_note((long)lattices.size(),
                    "distributive lattices up to iso, all equalities exact");
}

std::string criterion9() {
  auto hs = all_h_instances(3, 2);
  for (const HInstance& h : hs) {
    NcFramePresentation d = dissolution_frame(h.y, h.e);
    expect(d.skew.meet == h.ctx.h.skew.meet && d.skew.join == h.ctx.h.skew.join,
           "dissolution tables differ from H");
    expect(d.element_labels == h.ctx.h.element_labels,
           "dissolution carrier differs from H");
  }
  return count_note((long)hs.size(), "instances structurally equal");
}

std::string criterion10() {
  long instances = 0;
  bool on_chain = true;
  for (const FiniteLattice& base : {chain3(), bool2()}) {
    FiniteFrame f = FiniteFrame::certify(base);
    PriestleyData p = priestley_of(f);
    bool seen_nc5 = false, seen_p22 = false;
    for (int bits = 0; bits < 4; ++bits) {
      std::vector<int> stalks{(bits & 1) + 1, ((bits >> 1) & 1) + 1};
      NcFramePresentation s = star(p, sheaf_with_stalks(p.patch, stalks));
      if (skew_isomorphic(s.skew, nc5())) seen_nc5 = true;
      if (skew_isomorphic(s.skew, p22())) seen_p22 = true;
      // Shadow is the upset lattice of the order.
      std::vector<Mask> ups;
      for (Mask m = 0;; ++m) {
        bool up = true;
        for (int x = 0; x < p.carrier && up; ++x)
          for (int z = 0; z < p.carrier; ++z)
            if (mask_has(m, x) && p.leq(x, z) && !mask_has(m, z)) {
              up = false;
              break;
            }
        if (up) ups.push_back(m);
        if (m == full_mask(p.carrier)) break;
      }
      int k = (int)ups.size();
      SqTable mt(k), jt(k);
      auto idx = [&](Mask m) {
        return (int)(std::lower_bound(ups.begin(), ups.end(), m) - ups.begin());
      };
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          mt.at(i, j) = idx(ups[i] & ups[j]);
          jt.at(i, j) = idx(ups[i] | ups[j]);
        }
      expect(lattice_isomorphic(shadow(s.skew).lattice,
                                validate_lattice(mt, jt)),
             "star shadow is not the upset lattice");
      ++instances;
    }
    if (on_chain)
      expect(seen_nc5, "no stalk vector over chain3 reproduces NC5");
    else
      expect(seen_p22, "no stalk vector over bool2 reproduces P(2,2)");
    on_chain = false;
  }
  return count_note(instances, "star instances exact");
}

}  // namespace

int main() {
  Runner r;
  r.run(1, "axiom-soundness", 60, criterion1);
  r.run(2, "leech-shadow", 0, criterion2);
  r.run(3, "partial-function-conformance", 0, criterion3);
  r.run(4, "stalk-agreement-lemma", 0, criterion4);
  r.run(5, "finite-spatiality", 0, criterion5);
  r.run(6, "adjunction", 120, criterion6);
  r.run(7, "separation", 0, criterion7);
  r.run(8, "assembly-counts", 60, criterion8);
  r.run(9, "general-duality-collapse", 0, criterion9);
  r.run(10, "priestley-star", 0, criterion10);
  return r.all_ok ? 0 : 1;
}
