#include "skewlat/duality.hpp"

#include <algorithm>
#include <set>

namespace skewlat {

namespace {

std::string set_label(Mask m) {
  std::string s = "{";
  for (int p : mask_to_list(m)) {
    if (s.size() > 1) s += ",";
    s += std::to_string(p);
  }
  return s + "}";
}

std::string pair_label(Mask open, int sid) {
  return "(" + set_label(open) + ",s" + std::to_string(sid) + ")";
}

// D-classes must group exactly by the open component, and the class map
// open <-> class must carry meet/join to intersection/union.
void assert_shadow_is_opens(const FiniteSkewLattice& skew, const Shadow& sh,
                            const std::vector<std::pair<int, int>>& labels,
                            const std::vector<Mask>& opens) {
  for (int i = 0; i < skew.n; ++i)
    for (int j = 0; j < skew.n; ++j)
      if ((sh.d.class_of[i] == sh.d.class_of[j]) !=
          (labels[i].first == labels[j].first))
        throw internal_check("D-classes do not match the open components",
                             {i, j});
  int k = (int)sh.d.classes.size();
  if (k != (int)opens.size())
    throw internal_check("shadow size differs from the open family");
  std::vector<Mask> class_open(k);
  for (int u = 0; u < k; ++u)
    class_open[u] = opens[labels[sh.d.classes[u][0]].first];
  for (int u = 0; u < k; ++u)
    for (int v = 0; v < k; ++v) {
      if (class_open[sh.lattice.meet_of(u, v)] !=
          (class_open[u] & class_open[v]))
        throw internal_check("shadow meet is not intersection", {u, v});
      if (class_open[sh.lattice.join_of(u, v)] !=
          (class_open[u] | class_open[v]))
        throw internal_check("shadow join is not union", {u, v});
    }
}

}  // namespace

HContext make_H(const FiniteSpace& y, const FiniteSheaf& e) {
  HContext c;
  c.y = y;
  c.front = front_topology(y);
  if (!(e.space == c.front))
    throw Error("SheafNotOnFront",
                "the sheaf must live on the front topology of the space");
  c.e = e;
  if (e.sec(c.front.open_index(c.front.full())) == 0)
    throw Error("EmptyGlobalSections", "sheaf has no global sections");

  int ny = (int)y.opens.size();
  std::vector<int> fidx(ny);
  for (int u = 0; u < ny; ++u) fidx[u] = c.front.open_index(y.opens[u]);

  std::vector<std::pair<int, int>> elems;
  for (int u = 0; u < ny; ++u)
    for (int s = 0; s < e.sec(fidx[u]); ++s) {
      c.elem_index[{u, s}] = (int)elems.size();
      elems.push_back({u, s});
    }
  int n = (int)elems.size();
  if (n > kMaxCarrier) throw size_limit("H carrier larger than 256");

  SqTable mt(n), jt(n);
  for (int i = 0; i < n; ++i) {
    auto [u, s] = elems[i];
    for (int j = 0; j < n; ++j) {
      auto [v, t] = elems[j];
      int w = y.open_index(y.opens[u] & y.opens[v]);
      mt.at(i, j) =
          c.elem_index.at({w, e.restrict_sec(fidx[u], fidx[w], s)});

      int wj = y.open_index(y.opens[u] | y.opens[v]);
      int fd = c.front.open_index(y.opens[u] & ~y.opens[v]);
      if (fd < 0) throw internal_check("open difference is not front-open");
      int sd = e.restrict_sec(fidx[u], fd, s);
      int found = -1;
      for (int z = 0; z < e.sec(fidx[wj]); ++z)
        if (e.restrict_sec(fidx[wj], fd, z) == sd &&
            e.restrict_sec(fidx[wj], fidx[v], z) == t) {
          if (found >= 0)
            throw internal_check("overwrite gluing not unique", {i, j});
          found = z;
        }
      if (found < 0) throw internal_check("overwrite gluing missing", {i, j});
      jt.at(i, j) = c.elem_index.at({wj, found});
    }
  }
  std::vector<std::string> labels(n);
  for (int i = 0; i < n; ++i)
    labels[i] = pair_label(y.opens[elems[i].first], elems[i].second);

  c.h.skew = validate_skew(mt, jt, c.elem_index.at({0, 0}), std::move(labels));
  c.h.element_labels = elems;
  c.h.provenance = "H";

  PropertyReport rep = classify(c.h.skew);
  if (!rep.left_handed || !rep.ncframe)
    throw internal_check("H output is not a left-handed ncframe");
  Shadow sh = shadow(c.h.skew);
  assert_shadow_is_opens(c.h.skew, sh, elems, y.opens);
  // Top class = global sections.
  if (!sh.d.top_class)
    throw internal_check("H output has no top class");
  for (int x : sh.d.classes[*sh.d.top_class])
    if (y.opens[elems[x].first] != y.full())
      throw internal_check("top class is not the global sections", {x});
  return c;
}

NcFramePresentation H(const FiniteSpace& y, const FiniteSheaf& e) {
  return make_H(y, e).h;
}

bool agree_in_p(const FiniteSkewLattice& a, const Shadow& sh, const Point& p,
                int x, int y) {
  if (!p.contains(sh.d.class_of[x]) || !p.contains(sh.d.class_of[y]))
    throw Error("PointMismatch", "both elements must satisfy p = 1", "",
                {x, y});
  for (int c = 0; c < a.n; ++c) {
    if (p.contains(sh.d.class_of[c])) continue;
    for (int d = 0; d < a.n; ++d) {
      if (!p.contains(sh.d.class_of[d])) continue;
      if (a.join_of(a.meet_of(x, d), c) == a.join_of(a.meet_of(y, d), c))
        return true;
    }
  }
  return false;
}

PrimitiveQuotient primitive_quotient(const FiniteSkewLattice& a,
                                     const Shadow& sh, const Point& p) {
  std::vector<int> members;
  for (int x = 0; x < a.n; ++x)
    if (p.contains(sh.d.class_of[x])) members.push_back(x);
  int m = (int)members.size();

  std::vector<char> rel(m * m, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      rel[i * m + j] = agree_in_p(a, sh, p, members[i], members[j]) ? 1 : 0;
  for (int i = 0; i < m; ++i)
    if (!rel[i * m + i]) throw internal_check("agreement not reflexive");
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (rel[i * m + j] != rel[j * m + i])
        throw internal_check("agreement not symmetric");
      for (int l = 0; l < m && rel[i * m + j]; ++l)
        if (rel[j * m + l] && !rel[i * m + l])
          throw internal_check("agreement not transitive",
                               {members[i], members[j], members[l]});
    }

  PrimitiveQuotient q;
  q.point = p;
  q.projection.assign(a.n, 0);
  for (int i = 0; i < m; ++i) {
    if (q.projection[members[i]] != 0) continue;
    std::vector<int> cls;
    for (int j = i; j < m; ++j)
      if (rel[i * m + j]) {
        cls.push_back(members[j]);
        q.projection[members[j]] = 1 + (int)q.classes.size();
      }
    q.classes.push_back(std::move(cls));
  }

  int k = (int)q.classes.size();
  SqTable mt(k + 1), jt(k + 1);
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k; ++j) {
      if (i == 0 || j == 0) {
        mt.at(i, j) = 0;
        jt.at(i, j) = i == 0 ? j : i;
      } else {
        int ri = q.classes[i - 1][0], rj = q.classes[j - 1][0];
        mt.at(i, j) = q.projection[a.meet_of(ri, rj)];
        jt.at(i, j) = q.projection[a.join_of(ri, rj)];
      }
    }
  // The projection must be a morphism on the nose, which also shows the
  // tables are independent of the chosen representatives.
  for (int x = 0; x < a.n; ++x)
    for (int y = 0; y < a.n; ++y) {
      if (q.projection[a.meet_of(x, y)] !=
          mt.at(q.projection[x], q.projection[y]))
        throw internal_check("quotient meet ill-defined", {x, y});
      if (q.projection[a.join_of(x, y)] !=
          jt.at(q.projection[x], q.projection[y]))
        throw internal_check("quotient join ill-defined", {x, y});
    }
  q.quotient = validate_skew(mt, jt, 0);
  DStructure qd = green_D(q.quotient);
  if ((int)qd.classes.size() != (k > 0 ? 2 : 1))
    throw internal_check("quotient is not primitive");
  return q;
}

GOutput G(const FiniteSkewLattice& a) {
  PropertyReport rep = classify(a);
  if (!rep.ncframe)
    throw Error("NotNcFrame", "input does not satisfy the ncframe verdict");
  if (!rep.left_handed)
    throw Error("NotLeftHanded", "input is not left-handed");

  GOutput g;
  g.sh = shadow(a);
  Spectrum sp = spectrum(g.sh.lattice);
  g.points = sp.filters;
  g.base = sp.space;
  g.front = front_topology(g.base);

  int np = (int)g.points.size();
  g.class_of_elem.assign(np, std::vector<int>(a.n, -1));
  g.stalk_sizes.assign(np, 0);
  for (int i = 0; i < np; ++i) {
    PrimitiveQuotient q = primitive_quotient(a, g.sh, g.points[i]);
    for (int x = 0; x < a.n; ++x)
      g.class_of_elem[i][x] = q.projection[x] - 1;
    g.stalk_sizes[i] = (int)q.classes.size();
  }
  g.u_of.assign(a.n, 0);
  for (int x = 0; x < a.n; ++x) {
    for (int i = 0; i < np; ++i)
      if (g.class_of_elem[i][x] >= 0) g.u_of[x] |= Mask(1) << i;
    if (g.u_of[x] != sp.hat[g.sh.d.class_of[x]])
      throw internal_check("U_a differs from the spectral basic open", {x});
  }

  int total = 0;
  std::vector<int> offset(np, 0);
  for (int i = 0; i < np; ++i) {
    offset[i] = total;
    total += g.stalk_sizes[i];
  }
  if (total > kMaxPoints) throw size_limit("etale space larger than 12 germs");

  EtaleSpace et;
  et.base = g.front;
  et.offset = offset;
  et.proj.assign(total, 0);
  for (int i = 0; i < np; ++i)
    for (int s = 0; s < g.stalk_sizes[i]; ++s) {
      et.proj[offset[i] + s] = i;
      et.germ_id.push_back({i, s});
    }

  // Subbasis s_a(Z) for locally closed Z inside U_a.
  std::set<Mask> locally_closed;
  for (Mask u : g.base.opens)
    for (Mask v : g.base.opens) locally_closed.insert(u & ~v);
  std::vector<Mask> sub;
  for (int x = 0; x < a.n; ++x)
    for (Mask z : locally_closed) {
      if (!subset_of(z, g.u_of[x])) continue;
      Mask img = 0;
      for (int i : mask_to_list(z))
        img |= Mask(1) << (offset[i] + g.class_of_elem[i][x]);
      sub.push_back(img);
    }
  et.total = validate_space(total, generate_topology(std::move(sub), total));

  CheckResult laws = etale_laws(et);
  if (!laws)
    throw internal_check("etale projection fails: " + laws.law, laws.witness);
  g.etale = et;
  g.sheaf = sheaf_from_etale(et, &g.choices);

  g.section_of.assign(a.n, -1);
  for (int x = 0; x < a.n; ++x) {
    std::vector<int> want;
    for (int i : mask_to_list(g.u_of[x]))
      want.push_back(offset[i] + g.class_of_elem[i][x]);
    int fu = g.front.open_index(g.u_of[x]);
    const auto& cand = g.choices[fu];
    auto it = std::find(cand.begin(), cand.end(), want);
    if (it == cand.end())
      throw internal_check("s_a is not a continuous section", {x});
    g.section_of[x] = (int)(it - cand.begin());
  }
  return g;
}

CheckResult ncframe_morphism_laws(const FiniteSkewLattice& a,
                                  const FiniteSkewLattice& b,
                                  const std::vector<int>& h, bool* exact,
                                  const ClassifyOptions& opt) {
  if (exact) *exact = true;
  if ((int)h.size() != a.n) return CheckResult::fail("total-map", {});
  for (int x = 0; x < a.n; ++x)
    if (h[x] < 0 || h[x] >= b.n) return CheckResult::fail("range", {x});
  for (int x = 0; x < a.n; ++x)
    for (int y = 0; y < a.n; ++y) {
      if (h[a.meet_of(x, y)] != b.meet_of(h[x], h[y]))
        return CheckResult::fail("preserves-meet", {x, y});
      if (h[a.join_of(x, y)] != b.join_of(h[x], h[y]))
        return CheckResult::fail("preserves-join", {x, y});
    }
  auto za = a.zero ? a.zero : find_zero(a);
  auto zb = b.zero ? b.zero : find_zero(b);
  if (!za || !zb) return CheckResult::fail("zero-missing", {});
  if (h[*za] != *zb) return CheckResult::fail("preserves-zero", {*za});

  DStructure da = green_D(a), db = green_D(b);
  if (!da.top_class || !db.top_class)
    return CheckResult::fail("top-class-missing", {});
  for (int x : da.classes[*da.top_class])
    if (db.class_of[h[x]] != *db.top_class)
      return CheckResult::fail("preserves-top-class", {x});

  // Suprema of commuting subsets. Bijections with hom inverses preserve the
  // natural order both ways, so all suprema transfer; otherwise enumerate.
  bool shortcut = false;
  if (a.n == b.n) {
    std::vector<int> inv(b.n, -1);
    bool bij = true;
    for (int x = 0; x < a.n && bij; ++x) {
      if (inv[h[x]] >= 0) bij = false;
      inv[h[x]] = x;
    }
    if (bij) {
      shortcut = true;
      for (int x = 0; x < b.n && shortcut; ++x)
        for (int y = 0; y < b.n && shortcut; ++y) {
          if (inv[b.meet_of(x, y)] != a.meet_of(inv[x], inv[y])) shortcut = false;
          if (inv[b.join_of(x, y)] != a.join_of(inv[x], inv[y])) shortcut = false;
        }
    }
  }
  if (shortcut) return CheckResult::pass();

  std::vector<std::vector<int>> subsets;
  if (a.n <= opt.full_subset_cap) {
    subsets = commuting_subsets(a, -1);
  } else {
    if (exact) *exact = false;
    subsets = commuting_subsets(a, 3);
  }
  for (const auto& c : subsets) {
    auto va = natural_sup(a, c);
    if (!va) return CheckResult::fail("source-not-join-complete", c);
    std::vector<int> img;
    for (int x : c) img.push_back(h[x]);
    auto vb = natural_sup(b, img);
    if (!vb || *vb != h[*va]) {
      std::vector<int> w = c;
      return CheckResult::fail("preserves-suprema", w);
    }
  }
  return CheckResult::pass();
}

std::vector<std::vector<int>> enumerate_ncframe_morphisms(
    const FiniteSkewLattice& a, const FiniteSkewLattice& b, long cap) {
  std::vector<std::vector<int>> out;
  for (const auto& h : enumerate_skew_homs(a, b, cap))
    if (ncframe_morphism_laws(a, b, h)) out.push_back(h);
  return out;
}

SigmaResult unit_sigma(const FiniteSkewLattice& a) {
  SigmaResult r{G(a), {}, {}, false};
  r.hga = make_H(r.ga.base, r.ga.sheaf);
  r.table.assign(a.n, -1);
  for (int x = 0; x < a.n; ++x) {
    int u = r.ga.base.open_index(r.ga.u_of[x]);
    r.table[x] = r.hga.element(u, r.ga.section_of[x]);
  }
  CheckResult laws = ncframe_morphism_laws(a, r.hga.h.skew, r.table);
  if (!laws)
    throw internal_check("sigma is not an ncframe morphism: " + laws.law,
                         laws.witness);
  std::vector<char> hit(r.hga.h.skew.n, 0);
  r.bijective = true;
  for (int x = 0; x < a.n; ++x) {
    if (hit[r.table[x]]) r.bijective = false;
    hit[r.table[x]] = 1;
  }
  if (a.n != r.hga.h.skew.n) r.bijective = false;
  return r;
}

namespace {

Mask fiber_mask(const std::vector<int>& f, int i) {
  Mask m = 0;
  for (int y = 0; y < (int)f.size(); ++y)
    if (f[y] == i) m |= Mask(1) << y;
  return m;
}

}  // namespace

ShMorphism transpose(const FiniteSkewLattice& a, const GOutput& ga,
                     const HContext& hy, const std::vector<int>& phi) {
  int k = (int)ga.sh.d.classes.size();
  std::vector<int> phiD(k, -1);
  for (int x = 0; x < a.n; ++x) {
    int u = hy.h.element_labels[phi[x]].first;
    int c = ga.sh.d.class_of[x];
    if (phiD[c] < 0)
      phiD[c] = u;
    else if (phiD[c] != u)
      throw Error("NotMorphism", "map is not D-compatible", "", {x});
  }

  ShMorphism m;
  m.f.assign(hy.y.points, -1);
  int np = (int)ga.points.size();
  for (int yp = 0; yp < hy.y.points; ++yp) {
    std::vector<char> in(k, 0);
    for (int c = 0; c < k; ++c)
      in[c] = mask_has(hy.y.opens[phiD[c]], yp) ? 1 : 0;
    for (int i = 0; i < np; ++i)
      if (ga.points[i].in == in) {
        m.f[yp] = i;
        break;
      }
    if (m.f[yp] < 0)
      throw Error("NotMorphism", "evaluation filter is not a point", "", {yp});
  }
  for (Mask u : ga.base.opens) {
    Mask pre = 0;
    for (int yp = 0; yp < hy.y.points; ++yp)
      if (mask_has(u, m.f[yp])) pre |= Mask(1) << yp;
    if (!hy.y.is_open(pre))
      throw Error("NotMorphism", "induced point map is not continuous", "",
                  {(int)u});
  }

  for (int i = 0; i < np; ++i) {
    Mask w = fiber_mask(m.f, i);
    int fw = hy.front.open_index(w);
    if (fw < 0) throw internal_check("fiber is not front-open", {i});
    for (int c = 0; c < ga.stalk_sizes[i]; ++c) {
      int sid = -1;
      for (int x = 0; x < a.n; ++x) {
        if (ga.class_of_elem[i][x] != c) continue;
        auto [vx, tx] = hy.h.element_labels[phi[x]];
        int fvx = hy.front.open_index(hy.y.opens[vx]);
        if (!subset_of(w, hy.y.opens[vx]))
          throw internal_check("fiber escapes the section domain", {i, x});
        int rx = hy.e.restrict_sec(fvx, fw, tx);
        if (sid < 0)
          sid = rx;
        else if (sid != rx)
          throw internal_check("lambda ill-defined on a stalk class", {i, x});
      }
      if (sid < 0) throw internal_check("empty stalk class", {i, c});
      m.lambda[{i, c}] = sid;
    }
  }
  return m;
}

std::vector<int> transpose_inv(const FiniteSkewLattice& a, const GOutput& ga,
                               const HContext& hy, const ShMorphism& m) {
  int np = (int)ga.points.size();
  std::vector<Mask> fiber(np);
  for (int i = 0; i < np; ++i) fiber[i] = fiber_mask(m.f, i);

  std::vector<int> phi(a.n, -1);
  for (int x = 0; x < a.n; ++x) {
    Mask pre = 0;
    for (int i : mask_to_list(ga.u_of[x])) pre |= fiber[i];
    int u = hy.y.open_index(pre);
    if (u < 0)
      throw Error("NotMorphism", "preimage of U_a is not open", "", {x});
    int fu = hy.front.open_index(pre);
    int found = -1;
    for (int t = 0; t < hy.e.sec(fu); ++t) {
      bool ok = true;
      for (int i : mask_to_list(ga.u_of[x])) {
        int fw = hy.front.open_index(fiber[i]);
        if (hy.e.restrict_sec(fu, fw, t) !=
            m.lambda.at({i, ga.class_of_elem[i][x]})) {
          ok = false;
          break;
        }
      }
      if (ok) {
        if (found >= 0) throw internal_check("glued section not unique", {x});
        found = t;
      }
    }
    if (found < 0) throw internal_check("glued section missing", {x});
    phi[x] = hy.element(u, found);
  }
  return phi;
}

std::vector<ShMorphism> enumerate_sh_morphisms(const HContext& hy,
                                               const GOutput& ga, long cap) {
  int np = (int)ga.points.size();
  std::vector<ShMorphism> out;
  long visited = 0;

  std::vector<int> f(hy.y.points, 0);
  auto emit_lambdas = [&](const std::vector<int>& fmap) {
    std::vector<std::pair<int, int>> slots;
    std::vector<int> limits;
    for (int i = 0; i < np; ++i) {
      int fw = hy.front.open_index(fiber_mask(fmap, i));
      if (fw < 0) throw internal_check("fiber is not front-open");
      for (int c = 0; c < ga.stalk_sizes[i]; ++c) {
        slots.push_back({i, c});
        limits.push_back(hy.e.sec(fw));
      }
    }
    std::vector<int> pick(slots.size(), 0);
    auto rec = [&](auto&& self, size_t idx) -> void {
      if (idx == slots.size()) {
        ShMorphism m;
        m.f = fmap;
        for (size_t j = 0; j < slots.size(); ++j) m.lambda[slots[j]] = pick[j];
        out.push_back(std::move(m));
        return;
      }
      for (int v = 0; v < limits[idx]; ++v) {
        if (++visited > cap) throw size_limit("sh-morphism cap exceeded");
        pick[idx] = v;
        self(self, idx + 1);
      }
    };
    rec(rec, 0);
  };

  auto rec_f = [&](auto&& self, int yp) -> void {
    if (yp == hy.y.points) {
      for (Mask u : ga.base.opens) {
        Mask pre = 0;
        for (int q = 0; q < hy.y.points; ++q)
          if (mask_has(u, f[q])) pre |= Mask(1) << q;
        if (!hy.y.is_open(pre)) return;
      }
      emit_lambdas(f);
      return;
    }
    for (int i = 0; i < np; ++i) {
      if (++visited > cap) throw size_limit("sh-morphism cap exceeded");
      f[yp] = i;
      self(self, yp + 1);
    }
  };
  if (np == 0) {
    if (hy.y.points == 0) emit_lambdas({});
    return out;
  }
  rec_f(rec_f, 0);
  return out;
}

CounitResult counit(const HContext& hy) {
  const FiniteSkewLattice& a = hy.h.skew;
  CounitResult r{G(a), {}, false};
  std::vector<int> id(a.n);
  for (int x = 0; x < a.n; ++x) id[x] = x;
  r.m = transpose(a, r.ga, hy, id);

  int np = (int)r.ga.points.size();
  bool iso = hy.y.points == np;
  std::vector<char> hit(np, 0);
  for (int yp = 0; yp < hy.y.points && iso; ++yp) {
    if (hit[r.m.f[yp]]) iso = false;
    hit[r.m.f[yp]] = 1;
  }
  if (iso) {
    // f must carry opens to opens bijectively.
    std::vector<Mask> mapped;
    for (Mask u : hy.y.opens) {
      Mask v = 0;
      for (int yp = 0; yp < hy.y.points; ++yp)
        if (mask_has(u, yp)) v |= Mask(1) << r.m.f[yp];
      mapped.push_back(v);
    }
    std::sort(mapped.begin(), mapped.end());
    if (mapped != r.ga.base.opens) iso = false;
  }
  for (int i = 0; i < np && iso; ++i) {
    int fw = hy.front.open_index(fiber_mask(r.m.f, i));
    if (r.ga.stalk_sizes[i] != hy.e.sec(fw)) iso = false;
    std::set<int> seen;
    for (int c = 0; c < r.ga.stalk_sizes[i] && iso; ++c)
      if (!seen.insert(r.m.lambda.at({i, c})).second) iso = false;
  }
  r.iso = iso;
  return r;
}

namespace {

Mask point_preimage(const std::vector<int>& f, Mask w) {
  Mask pre = 0;
  for (int y = 0; y < (int)f.size(); ++y)
    if (mask_has(w, f[y])) pre |= Mask(1) << y;
  return pre;
}

}  // namespace

CheckResult sh_pair_morphism_laws(const HContext& src, const HContext& dst,
                                  const ShPairMorphism& m) {
  if ((int)m.f.size() != src.y.points) return CheckResult::fail("total-map", {});
  for (int v : m.f)
    if (v < 0 || v >= dst.y.points) return CheckResult::fail("range", {v});
  for (Mask w : dst.y.opens)
    if (!src.y.is_open(point_preimage(m.f, w)))
      return CheckResult::fail("continuous", {(int)w});
  for (Mask w : dst.front.opens)
    if (!src.front.is_open(point_preimage(m.f, w)))
      return CheckResult::fail("front-continuous", {(int)w});

  int nw = (int)dst.front.opens.size();
  if ((int)m.lambda.size() != nw) return CheckResult::fail("components", {});
  std::vector<int> pre(nw);
  for (int w = 0; w < nw; ++w) {
    pre[w] = src.front.open_index(point_preimage(m.f, dst.front.opens[w]));
    if ((int)m.lambda[w].size() != dst.e.sec(w))
      return CheckResult::fail("component-size", {w});
    for (int s : m.lambda[w])
      if (s < 0 || s >= src.e.sec(pre[w]))
        return CheckResult::fail("component-range", {w});
  }
  for (int w = 0; w < nw; ++w)
    for (int w2 = 0; w2 < nw; ++w2) {
      if (w == w2 || !subset_of(dst.front.opens[w2], dst.front.opens[w]))
        continue;
      for (int s = 0; s < dst.e.sec(w); ++s)
        if (m.lambda[w2][dst.e.restrict_sec(w, w2, s)] !=
            src.e.restrict_sec(pre[w], pre[w2], m.lambda[w][s]))
          return CheckResult::fail("natural", {w, w2, s});
    }
  return CheckResult::pass();
}

ShPairMorphism identity_sh_morphism(const HContext& hy) {
  ShPairMorphism m;
  m.f.resize(hy.y.points);
  for (int p = 0; p < hy.y.points; ++p) m.f[p] = p;
  m.lambda.resize(hy.front.opens.size());
  for (int w = 0; w < (int)hy.front.opens.size(); ++w) {
    m.lambda[w].resize(hy.e.sec(w));
    for (int s = 0; s < hy.e.sec(w); ++s) m.lambda[w][s] = s;
  }
  return m;
}

ShPairMorphism compose_sh(const HContext& a, const HContext& b,
                          const HContext& c, const ShPairMorphism& ab,
                          const ShPairMorphism& bc) {
  (void)a;
  ShPairMorphism m;
  m.f.resize(ab.f.size());
  for (size_t y = 0; y < ab.f.size(); ++y) m.f[y] = bc.f[ab.f[y]];
  int nw = (int)c.front.opens.size();
  m.lambda.resize(nw);
  for (int w = 0; w < nw; ++w) {
    int wb = b.front.open_index(point_preimage(bc.f, c.front.opens[w]));
    m.lambda[w].resize(c.e.sec(w));
    for (int s = 0; s < c.e.sec(w); ++s)
      m.lambda[w][s] = ab.lambda[wb][bc.lambda[w][s]];
  }
  return m;
}

std::vector<int> H_on_morphism(const HContext& src, const HContext& dst,
                               const ShPairMorphism& m) {
  std::vector<int> table(dst.h.skew.n);
  for (int i = 0; i < dst.h.skew.n; ++i) {
    auto [u, s] = dst.h.element_labels[i];
    Mask upre = point_preimage(m.f, dst.y.opens[u]);
    int fu = dst.front.open_index(dst.y.opens[u]);
    table[i] = src.element(src.y.open_index(upre), m.lambda[fu][s]);
  }
  return table;
}

std::vector<ShPairMorphism> enumerate_sh_pair_morphisms(const HContext& src,
                                                        const HContext& dst,
                                                        long cap) {
  if (!specialization(dst.y).t0)
    throw size_limit("enumeration needs a T0 destination base");
  std::vector<ShPairMorphism> out;
  long visited = 0;

  // Minimal front opens of a T0 base are the singletons; components there
  // determine the rest by gluing over disjoint fibers.
  std::vector<int> f(src.y.points, 0);
  std::vector<std::vector<int>> stalk_pick(dst.y.points);

  auto build = [&]() {
    ShPairMorphism m;
    m.f = f;
    int nw = (int)dst.front.opens.size();
    m.lambda.assign(nw, {});
    for (int w = 0; w < nw; ++w) {
      int prew = src.front.open_index(point_preimage(f, dst.front.opens[w]));
      for (int s = 0; s < dst.e.sec(w); ++s) {
        int found = -1;
        for (int t = 0; t < src.e.sec(prew); ++t) {
          bool ok = true;
          for (int p : mask_to_list(dst.front.opens[w])) {
            int wp = dst.front.open_index(Mask(1) << p);
            int prep = src.front.open_index(point_preimage(f, Mask(1) << p));
            if (src.e.restrict_sec(prew, prep, t) !=
                stalk_pick[p][dst.e.restrict_sec(w, wp, s)]) {
              ok = false;
              break;
            }
          }
          if (ok) {
            if (found >= 0) return;  // gluing not unique: not a sheaf
            found = t;
          }
        }
        if (found < 0) return;
        m.lambda[w].push_back(found);
      }
    }
    if (sh_pair_morphism_laws(src, dst, m))
      out.push_back(std::move(m));
  };

  auto rec_stalks = [&](auto&& self, int p) -> void {
    if (p == dst.y.points) {
      build();
      return;
    }
    int wp = dst.front.open_index(Mask(1) << p);
    int prep = src.front.open_index(point_preimage(f, Mask(1) << p));
    std::vector<int>& pick = stalk_pick[p];
    pick.assign(dst.e.sec(wp), 0);
    auto fill = [&](auto&& fself, int s) -> void {
      if (s == dst.e.sec(wp)) {
        self(self, p + 1);
        return;
      }
      for (int t = 0; t < src.e.sec(prep); ++t) {
        if (++visited > cap) throw size_limit("sh-pair cap exceeded");
        pick[s] = t;
        fself(fself, s + 1);
      }
    };
    fill(fill, 0);
  };

  auto rec_f = [&](auto&& self, int yp) -> void {
    if (yp == src.y.points) {
      bool cont = true;
      for (Mask w : dst.y.opens)
        if (!src.y.is_open(point_preimage(f, w))) cont = false;
      if (cont) rec_stalks(rec_stalks, 0);
      return;
    }
    for (int i = 0; i < dst.y.points; ++i) {
      if (++visited > cap) throw size_limit("sh-pair cap exceeded");
      f[yp] = i;
      self(self, yp + 1);
    }
  };
  if (dst.y.points == 0) {
    if (src.y.points == 0) rec_stalks(rec_stalks, 0);
    return out;
  }
  rec_f(rec_f, 0);
  return out;
}

std::optional<SeparationResult> separate(const FiniteSkewLattice& a, int x,
                                         int y) {
  Shadow sh = shadow(a);
  std::vector<Point> pts = points(FiniteFrame::certify(sh.lattice));
  return separate(a, sh, pts, x, y);
}

std::optional<SeparationResult> separate(const FiniteSkewLattice& a,
                                         const Shadow& sh,
                                         const std::vector<Point>& pts, int x,
                                         int y) {
  if (x == y || sh.d.class_of[x] != sh.d.class_of[y])
    throw Error("NotSameClass", "elements must be distinct and D-related", "",
                {x, y});
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j)
      if (a.meet_of(a.meet_of(i, j), i) != a.meet_of(i, j))
        throw Error("NotLeftHanded", "separation needs a left-handed input", "",
                    {i, j});
  for (int i = 0; i < (int)pts.size(); ++i) {
    if (!pts[i].contains(sh.d.class_of[x])) continue;
    if (agree_in_p(a, sh, pts[i], x, y)) continue;

    PrimitiveQuotient q = primitive_quotient(a, sh, pts[i]);
    SeparationResult r;
    r.witness_point = i;
    r.target = primitive(2);
    r.q.assign(a.n, 0);
    int cy = q.projection[y];
    for (int e = 0; e < a.n; ++e)
      if (q.projection[e] != 0) r.q[e] = q.projection[e] == cy ? 2 : 1;
    CheckResult laws = ncframe_morphism_laws(a, r.target, r.q);
    if (!laws)
      throw internal_check("separating map is not a morphism: " + laws.law,
                           laws.witness);
    return r;
  }
  return std::nullopt;
}

NcFramePresentation star(const PriestleyData& p, const FiniteSheaf& f) {
  if (!(f.space == p.patch))
    throw Error("SheafNotOnPatch",
                "the sheaf must live on the patch topology");
  Mask full = full_mask(p.carrier);
  std::vector<Mask> ups;
  for (Mask m = 0;; ++m) {
    bool up = true;
    for (int x = 0; x < p.carrier && up; ++x)
      for (int z = 0; z < p.carrier && up; ++z)
        if (mask_has(m, x) && p.leq(x, z) && !mask_has(m, z)) up = false;
    if (up) {
      if (!p.patch.is_open(m))
        throw internal_check("an upset is not patch-open", {(int)m});
      ups.push_back(m);
    }
    if (m == full) break;
  }

  std::vector<int> pidx(ups.size());
  for (size_t i = 0; i < ups.size(); ++i) pidx[i] = p.patch.open_index(ups[i]);
  std::vector<std::pair<int, int>> elems;
  std::map<std::pair<int, int>, int> index;
  for (int u = 0; u < (int)ups.size(); ++u)
    for (int s = 0; s < f.sec(pidx[u]); ++s) {
      index[{u, s}] = (int)elems.size();
      elems.push_back({u, s});
    }
  int n = (int)elems.size();
  if (n > kMaxCarrier) throw size_limit("star carrier larger than 256");
  auto up_index = [&](Mask m) {
    auto it = std::lower_bound(ups.begin(), ups.end(), m);
    if (it == ups.end() || *it != m)
      throw internal_check("result set is not an upset");
    return (int)(it - ups.begin());
  };

  SqTable mt(n), jt(n);
  for (int i = 0; i < n; ++i) {
    auto [u, s] = elems[i];
    for (int j = 0; j < n; ++j) {
      auto [v, t] = elems[j];
      int w = up_index(ups[u] & ups[v]);
      mt.at(i, j) = index.at({w, f.restrict_sec(pidx[u], pidx[w], s)});

      int wj = up_index(ups[u] | ups[v]);
      int fd = p.patch.open_index(ups[u] & ~ups[v]);
      if (fd < 0) throw internal_check("patch difference not open");
      int sd = f.restrict_sec(pidx[u], fd, s);
      int found = -1;
      for (int z = 0; z < f.sec(pidx[wj]); ++z)
        if (f.restrict_sec(pidx[wj], fd, z) == sd &&
            f.restrict_sec(pidx[wj], pidx[v], z) == t) {
          if (found >= 0) throw internal_check("star gluing not unique");
          found = z;
        }
      if (found < 0) throw internal_check("star gluing missing");
      jt.at(i, j) = index.at({wj, found});
    }
  }
  std::vector<std::string> labels(n);
  for (int i = 0; i < n; ++i)
    labels[i] = pair_label(ups[elems[i].first], elems[i].second);

  NcFramePresentation out;
  out.skew = validate_skew(mt, jt, index.at({0, 0}), std::move(labels));
  out.element_labels = elems;
  out.provenance = "star";

  PropertyReport rep = classify(out.skew);
  if (!rep.left_handed || !rep.strongly_distributive || !rep.has_zero)
    throw internal_check("star output fails the expected identities");
  Shadow sh = shadow(out.skew);
  assert_shadow_is_opens(out.skew, sh, elems, ups);
  return out;
}

NcFramePresentation dissolution_frame(const FiniteSpace& y,
                                      const FiniteSheaf& f) {
  FiniteSpace front = front_topology(y);
  if (!(f.space == front))
    throw Error("SheafNotOnFront",
                "the sheaf must live on the front topology of the space");
  if (f.sec(front.open_index(front.full())) == 0)
    throw Error("EmptyGlobalSections", "sheaf has no global sections");

  int ny = (int)y.opens.size();
  std::vector<int> fidx(ny);
  for (int u = 0; u < ny; ++u) fidx[u] = front.open_index(y.opens[u]);
  std::vector<std::pair<int, int>> elems;
  std::map<std::pair<int, int>, int> index;
  for (int u = 0; u < ny; ++u)
    for (int s = 0; s < f.sec(fidx[u]); ++s) {
      index[{u, s}] = (int)elems.size();
      elems.push_back({u, s});
    }
  int n = (int)elems.size();
  if (n > kMaxCarrier) throw size_limit("carrier larger than 256");

  // Germ tuple per element, indexed by the points of its open.
  std::vector<std::vector<int>> germs(n);
  for (int i = 0; i < n; ++i)
    germs[i] = germ_tuple(f, fidx[elems[i].first], elems[i].second);

  auto find_by_germs = [&](int u, const std::vector<int>& want) {
    int found = -1;
    for (int s = 0; s < f.sec(fidx[u]); ++s)
      if (germ_tuple(f, fidx[u], s) == want) {
        if (found >= 0)
          throw internal_check("two sections share a germ tuple", {u});
        found = s;
      }
    if (found < 0) throw internal_check("no section with the germ tuple", {u});
    return index.at({u, found});
  };

  SqTable mt(n), jt(n);
  for (int i = 0; i < n; ++i) {
    auto [u, s] = elems[i];
    std::vector<int> pu = mask_to_list(y.opens[u]);
    for (int j = 0; j < n; ++j) {
      auto [v, t] = elems[j];
      std::vector<int> pv = mask_to_list(y.opens[v]);

      Mask mw = y.opens[u] & y.opens[v];
      std::vector<int> want;
      for (size_t q = 0; q < pu.size(); ++q)
        if (mask_has(mw, pu[q])) want.push_back(germs[i][q]);
      mt.at(i, j) = find_by_germs(y.open_index(mw), want);

      Mask jw = y.opens[u] | y.opens[v];
      want.clear();
      for (int pt : mask_to_list(jw)) {
        if (mask_has(y.opens[v], pt)) {
          auto it = std::find(pv.begin(), pv.end(), pt);
          want.push_back(germs[j][it - pv.begin()]);
        } else {
          auto it = std::find(pu.begin(), pu.end(), pt);
          want.push_back(germs[i][it - pu.begin()]);
        }
      }
      jt.at(i, j) = find_by_germs(y.open_index(jw), want);
    }
  }
  std::vector<std::string> labels(n);
  for (int i = 0; i < n; ++i)
    labels[i] = pair_label(y.opens[elems[i].first], elems[i].second);

  NcFramePresentation out;
  out.skew = validate_skew(mt, jt, index.at({0, 0}), std::move(labels));
  out.element_labels = elems;
  out.provenance = "dissolution";
  return out;
}

Embedding embed_into_partial_functions(const FiniteSkewLattice& a,
                                       const GOutput& ga) {
  int k = (int)ga.points.size();
  int s = 1;
  for (int sz : ga.stalk_sizes) s = std::max(s, sz);

  Embedding em;
  em.target = partial_function_skew(k, s);
  em.table.assign(a.n, 0);
  for (int x = 0; x < a.n; ++x) {
    int code = 0;
    for (int i = k - 1; i >= 0; --i) {
      int digit = ga.class_of_elem[i][x] + 1;
      code = code * (s + 1) + digit;
    }
    em.table[x] = code;
  }
  for (int x = 0; x < a.n; ++x)
    for (int y = 0; y < a.n; ++y) {
      if (x < y && em.table[x] == em.table[y])
        throw internal_check("germ-table embedding not injective", {x, y});
      if (em.table[a.meet_of(x, y)] !=
          em.target.meet_of(em.table[x], em.table[y]))
        throw internal_check("embedding breaks meet", {x, y});
      if (em.table[a.join_of(x, y)] !=
          em.target.join_of(em.table[x], em.table[y]))
        throw internal_check("embedding breaks join", {x, y});
    }
  return em;
}

}  // namespace skewlat
