#include "skewlat/assembly.hpp"

#include <algorithm>

namespace skewlat {

CheckResult is_nucleus(const FiniteFrame& l, const std::vector<int>& table) {
  int n = l.size();
  if ((int)table.size() != n) return CheckResult::fail("total-map", {});
  for (int a = 0; a < n; ++a)
    if (table[a] < 0 || table[a] >= n) return CheckResult::fail("range", {a});
  for (int a = 0; a < n; ++a)
    if (!l.leq(a, table[a])) return CheckResult::fail("N1", {a});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (table[l.meet_of(a, b)] != l.meet_of(table[a], table[b]))
        return CheckResult::fail("N2", {a, b});
  for (int a = 0; a < n; ++a)
    if (table[table[a]] != table[a]) return CheckResult::fail("N3", {a});
  return CheckResult::pass();
}

int Assembly::index_of(const std::vector<int>& table) const {
  Nucleus probe{table};
  auto it = std::lower_bound(nuclei.begin(), nuclei.end(), probe);
  if (it == nuclei.end() || !(*it == probe)) return -1;
  return (int)(it - nuclei.begin());
}

Assembly enumerate_nuclei(const FiniteFrame& l, int cap) {
  int n = l.size();
  if (n > cap) throw size_limit("nucleus enumeration cap exceeded");

  std::vector<Nucleus> found;
  std::vector<int> t(n, -1);
  auto rec = [&](auto&& self, int a) -> void {
    if (a == n) {
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          if (t[l.meet_of(x, y)] != l.meet_of(t[x], t[y])) return;
      for (int x = 0; x < n; ++x)
        if (t[t[x]] != t[x]) return;
      found.push_back(Nucleus{t});
      return;
    }
    for (int v = 0; v < n; ++v) {
      if (!l.leq(a, v)) continue;  // N1
      t[a] = v;
      bool ok = true;
      for (int b = 0; b < a && ok; ++b) {
        if (l.leq(a, b) && !l.leq(v, t[b])) ok = false;
        if (l.leq(b, a) && !l.leq(t[b], v)) ok = false;
        int m = l.meet_of(a, b);
        if (ok && m <= a && t[m] >= 0 && t[m] != l.meet_of(v, t[b])) ok = false;
      }
      if (ok) self(self, a + 1);
      t[a] = -1;
    }
  };
  rec(rec, 0);
  std::sort(found.begin(), found.end());

  int k = (int)found.size();
  auto leq_nu = [&](const Nucleus& x, const Nucleus& y) {
    for (int a = 0; a < n; ++a)
      if (!l.leq(x.table[a], y.table[a])) return false;
    return true;
  };
  auto index_of = [&](const std::vector<int>& table) {
    Nucleus probe{table};
    auto it = std::lower_bound(found.begin(), found.end(), probe);
    if (it == found.end() || !(*it == probe)) return -1;
    return (int)(it - found.begin());
  };
  SqTable mt(k), jt(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      // Pointwise meet of nuclei is a nucleus.
      std::vector<int> pm(n);
      for (int a = 0; a < n; ++a)
        pm[a] = l.meet_of(found[i].table[a], found[j].table[a]);
      int mi = index_of(pm);
      if (mi < 0)
        throw internal_check("pointwise meet of nuclei is not a nucleus",
                             {i, j});
      mt.at(i, j) = mi;
      // Join is the least upper bound in the enumerated order.
      int best = -1;
      for (int u = 0; u < k; ++u) {
        if (!leq_nu(found[i], found[u]) || !leq_nu(found[j], found[u]))
          continue;
        if (best < 0 || leq_nu(found[u], found[best])) best = u;
      }
      if (best < 0 || !leq_nu(found[i], found[best]) ||
          !leq_nu(found[j], found[best]))
        throw internal_check("no least upper bound of nuclei", {i, j});
      for (int u = 0; u < k; ++u)
        if (leq_nu(found[i], found[u]) && leq_nu(found[j], found[u]) &&
            !leq_nu(found[best], found[u]))
          throw internal_check("upper bounds of nuclei have no least element",
                               {i, j, u});
      jt.at(i, j) = best;
    }
  return Assembly{std::move(found),
                  FiniteFrame::certify(validate_lattice(mt, jt))};
}

Nucleus nucleus_of_sublocale(const FiniteSpace& y, Mask s) {
  if (s & ~y.full()) throw parse_error("subset contains unknown points");
  int n = (int)y.opens.size();
  Nucleus nu;
  nu.table.assign(n, 0);
  for (int u = 0; u < n; ++u) {
    Mask acc = 0;
    for (Mask v : y.opens)
      if (subset_of(v & s, y.opens[u])) acc |= v;
    int idx = y.open_index(acc);
    if (idx < 0) throw internal_check("sublocale union not open", {u});
    nu.table[u] = idx;
  }
  CheckResult c = is_nucleus(opens_lattice(y), nu.table);
  if (!c)
    throw internal_check("sublocale formula is not a nucleus: " + c.law,
                         c.witness);
  return nu;
}

TableMorphism open_nucleus_embedding(const FiniteFrame& l, const Assembly& a) {
  int n = l.size();
  std::vector<int> map(n);
  for (int x = 0; x < n; ++x) {
    std::vector<int> t(n);
    for (int b = 0; b < n; ++b) t[b] = l.join_of(x, b);
    map[x] = a.index_of(t);
    if (map[x] < 0)
      throw internal_check("open nucleus missing from the assembly", {x});
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y && map[x] == map[y])
        throw internal_check("open nucleus embedding not injective", {x, y});
  return check_morphism(map, l.lat(), a.lattice.lat(), laws_frame_hom);
}

namespace {

DissolutionReport dissolution_checks_impl(const FiniteSpace& y, int cap,
                                          bool sobrified) {
  DissolutionReport r;
  r.sobrified = sobrified;
  FiniteFrame l = opens_lattice(y);
  Assembly a = enumerate_nuclei(l, cap);
  r.nucleus_count = (int)a.nuclei.size();
  r.points = (int)points(l).size();
  r.count_matches = r.nucleus_count == (1 << r.points);
  r.boolean = is_boolean(a.lattice.lat());
  BooleanEnvelope env = boolean_envelope(l);
  r.envelope_iso = lattice_isomorphic(a.lattice.lat(), env.algebra);
  Spectrum pt_asm = spectrum(a.lattice.lat());
  r.front_iso = spaces_homeomorphic(pt_asm.space, front_topology(y));
  return r;
}

}  // namespace

DissolutionReport dissolution_checks(const FiniteSpace& y, int cap) {
  if (is_sober(y)) return dissolution_checks_impl(y, cap, false);
  return dissolution_checks_impl(sobrify(y).space, cap, true);
}

namespace {

// Unique-gluing check for a family of (open index, section) pieces covering
// `target` inside the patch sheaf g.
int amalgamation_count(const FiniteSheaf& g, int target,
                       const std::vector<int>& piece_open,
                       const std::vector<int>& piece_sec) {
  int count = 0;
  for (int s = 0; s < g.sec(target); ++s) {
    bool ok = true;
    for (size_t i = 0; i < piece_open.size() && ok; ++i)
      if (g.restrict_sec(target, piece_open[i], s) != piece_sec[i]) ok = false;
    if (ok) ++count;
  }
  return count;
}

}  // namespace

StableSheafReport stable_sheaf_check(const FiniteSpace& y,
                                     const FiniteSheaf& g) {
  FiniteFrame l = opens_lattice(y);
  Spectrum x = spectrum(l.lat());
  FiniteSpace xp = patch_topology(x.space);
  if (!(g.space == xp))
    throw parse_error("section data must live on the patch space of Spec(O(Y))");
  if ((int)x.space.opens.size() > 10 || x.space.points > 5)
    throw size_limit("stable-sheaf scan is capped at 10 opens / 5 points");

  StableSheafReport r;
  r.nonempty_global = g.sec(xp.open_index(xp.full())) > 0;

  // (b) the restriction of g to the spectral opens is a sheaf there.
  {
    std::vector<int> sections;
    std::map<std::pair<int, int>, std::vector<int>> res;
    std::vector<int> pidx(x.space.opens.size());
    for (size_t u = 0; u < x.space.opens.size(); ++u)
      pidx[u] = xp.open_index(x.space.opens[u]);
    for (size_t u = 0; u < x.space.opens.size(); ++u)
      sections.push_back(g.sec(pidx[u]));
    for (size_t u = 0; u < x.space.opens.size(); ++u)
      for (size_t v = 0; v < x.space.opens.size(); ++v) {
        if (u == v || !subset_of(x.space.opens[v], x.space.opens[u])) continue;
        std::vector<int> tbl;
        for (int s = 0; s < sections[u]; ++s)
          tbl.push_back(g.restrict_sec(pidx[u], pidx[v], s));
        res[{(int)u, (int)v}] = std::move(tbl);
      }
    FiniteSheaf push = validate_presheaf(x.space, sections, res);
    CheckResult gl = sheaf_gluing(push);
    r.pushforward_ok = gl.ok;
    r.pushforward_law = gl.law;
    r.pushforward_witness = gl.witness;
  }

  // (a) stable gluing: covers {U_i} of a compact open U, trimmed by any
  // patch-clopen Z.
  r.stable_ok = true;
  int nopen = (int)x.space.opens.size();
  for (int u = 0; u < nopen && r.stable_ok; ++u) {
    std::vector<int> below;
    for (int v = 0; v < nopen; ++v)
      if (subset_of(x.space.opens[v], x.space.opens[u])) below.push_back(v);
    for (Mask pick = 1; pick < (Mask(1) << below.size()) && r.stable_ok;
         ++pick) {
      Mask uni = 0;
      std::vector<int> cover;
      for (size_t i = 0; i < below.size(); ++i)
        if (mask_has(pick, (int)i)) {
          cover.push_back(below[i]);
          uni |= x.space.opens[below[i]];
        }
      if (uni != x.space.opens[u]) continue;
      for (Mask z = 0;; ++z) {
        if (xp.is_open(z) && xp.is_open(xp.full() & ~z)) {
          int target = xp.open_index(x.space.opens[u] & z);
          std::vector<int> piece_open(cover.size());
          for (size_t i = 0; i < cover.size(); ++i)
            piece_open[i] = xp.open_index(x.space.opens[cover[i]] & z);
          // Enumerate matching families over the trimmed cover.
          std::vector<int> piece_sec(cover.size(), -1);
          bool failed = false;
          auto rec = [&](auto&& self, size_t i) -> void {
            if (failed) return;
            if (i == cover.size()) {
              if (amalgamation_count(g, target, piece_open, piece_sec) != 1) {
                failed = true;
                r.stable_law = "stable-gluing";
                r.stable_witness = {u, (int)z};
                for (int s : piece_sec) r.stable_witness.push_back(s);
              }
              return;
            }
            for (int s = 0; s < g.sec(piece_open[i]) && !failed; ++s) {
              bool match = true;
              for (size_t j = 0; j < i && match; ++j) {
                int common = xp.open_index(xp.opens[piece_open[i]] &
                                           xp.opens[piece_open[j]]);
                if (g.restrict_sec(piece_open[i], common, s) !=
                    g.restrict_sec(piece_open[j], common, piece_sec[j]))
                  match = false;
              }
              if (match) {
                piece_sec[i] = s;
                self(self, i + 1);
                piece_sec[i] = -1;
              }
            }
          };
          rec(rec, 0);
          if (failed) {
            r.stable_ok = false;
            break;
          }
        }
        if (z == xp.full()) break;
      }
    }
  }
  r.agree = r.stable_ok == r.pushforward_ok;
  return r;
}

}  // namespace skewlat
