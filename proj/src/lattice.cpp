#include "skewlat/lattice.hpp"

#include <algorithm>

#include "skewlat/iso.hpp"

namespace skewlat {

SqTable table_from_rows(const std::vector<std::vector<int>>& rows) {
  int n = (int)rows.size();
  if (n == 0) throw parse_error("empty operation table");
  SqTable t(n);
  for (int i = 0; i < n; ++i) {
    if ((int)rows[i].size() != n)
      throw parse_error("operation table is not square");
    for (int j = 0; j < n; ++j) {
      int e = rows[i][j];
      if (e < 0 || e >= n) throw parse_error("table entry out of range");
      t.at(i, j) = e;
    }
  }
  return t;
}

std::vector<int> mask_to_list(Mask m) {
  std::vector<int> out;
  for (int p = 0; p < 32; ++p)
    if (mask_has(m, p)) out.push_back(p);
  return out;
}

Mask mask_from_list(const std::vector<int>& pts, int points) {
  Mask m = 0;
  for (int p : pts) {
    if (p < 0 || p >= points) throw parse_error("point index out of range");
    m |= Mask(1) << p;
  }
  return m;
}

namespace {

void check_band_laws(const SqTable& t, const char* name_idem,
                     const char* name_assoc) {
  int n = t.n;
  for (int x = 0; x < n; ++x)
    if (t.at(x, x) != x) throw axiom_violation(name_idem, {x});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (t.at(x, t.at(y, z)) != t.at(t.at(x, y), z))
          throw axiom_violation(name_assoc, {x, y, z});
}

void check_commutative(const SqTable& t, const char* name) {
  for (int x = 0; x < t.n; ++x)
    for (int y = 0; y < t.n; ++y)
      if (t.at(x, y) != t.at(y, x)) throw axiom_violation(name, {x, y});
}

}  // namespace

FiniteLattice validate_lattice(const SqTable& meet, const SqTable& join,
                               std::vector<std::string> labels) {
  int n = meet.n;
  if (n < 1 || join.n != n)
    throw parse_error("meet/join tables must be square and equally sized");
  if (n > kMaxCarrier) throw size_limit("carrier larger than 256");
  if (!labels.empty() && (int)labels.size() != n)
    throw parse_error("labels size mismatch");

  check_band_laws(meet, "meet-idempotent", "meet-associative");
  check_band_laws(join, "join-idempotent", "join-associative");
  check_commutative(meet, "meet-commutative");
  check_commutative(join, "join-commutative");
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (meet.at(x, join.at(x, y)) != x)
        throw axiom_violation("absorption", {x, y});
      if (join.at(x, meet.at(x, y)) != x)
        throw axiom_violation("absorption", {x, y});
    }

  // Derived order must have a least and a greatest element.
  FiniteLattice l{n, meet, join, 0, 0, std::move(labels)};
  int bot = 0, top = 0;
  for (int x = 0; x < n; ++x) {
    bot = meet.at(bot, x);
    top = join.at(top, x);
  }
  for (int x = 0; x < n; ++x) {
    if (!l.leq(bot, x)) throw Error("NoBound", "no bottom element", "bottom");
    if (!l.leq(x, top)) throw Error("NoBound", "no top element", "top");
  }
  l.bottom = bot;
  l.top = top;

  // Antisymmetry of the derived order; reflexivity/transitivity follow from
  // the band laws.
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y && l.leq(x, y) && l.leq(y, x))
        throw axiom_violation("order-antisymmetric", {x, y});
  return l;
}

CheckResult is_frame(const FiniteLattice& l) {
  for (int x = 0; x < l.n; ++x)
    for (int y = 0; y < l.n; ++y)
      for (int z = 0; z < l.n; ++z) {
        int lhs = l.meet_of(x, l.join_of(y, z));
        int rhs = l.join_of(l.meet_of(x, y), l.meet_of(x, z));
        if (lhs != rhs) return CheckResult::fail("distributivity", {x, y, z});
      }
  return CheckResult::pass();
}

FiniteFrame FiniteFrame::certify(FiniteLattice l) {
  CheckResult d = is_frame(l);
  if (!d) throw axiom_violation(d.law, d.witness);
  return FiniteFrame(std::move(l));
}

std::vector<int> join_irreducibles(const FiniteLattice& l) {
  std::vector<int> out;
  for (int j = 0; j < l.n; ++j) {
    if (j == l.bottom) continue;
    bool irr = true;
    for (int x = 0; x < l.n && irr; ++x)
      for (int y = 0; y < l.n && irr; ++y)
        if (x != j && y != j && l.join_of(x, y) == j) irr = false;
    if (irr) out.push_back(j);
  }
  return out;
}

namespace {

Point filter_point(const FiniteLattice& l, const std::vector<char>& in) {
  Point p;
  p.in = in;
  for (int a = 0; a < l.n; ++a)
    if (in[a]) p.members.push_back(a);
  return p;
}

}  // namespace

std::vector<Point> points(const FiniteFrame& f) {
  const FiniteLattice& l = f.lat();
  std::vector<Point> out;
  for (int j : join_irreducibles(l)) {
    std::vector<char> in(l.n, 0);
    for (int x = 0; x < l.n; ++x) in[x] = l.leq(j, x) ? 1 : 0;
    out.push_back(filter_point(l, in));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Point> points_bruteforce(const FiniteFrame& f) {
  const FiniteLattice& l = f.lat();
  if (l.n > 16) throw size_limit("points_bruteforce requires n <= 16");
  std::vector<Point> out;
  for (unsigned long bits = 0; bits < (1ul << l.n); ++bits) {
    std::vector<char> in(l.n, 0);
    for (int a = 0; a < l.n; ++a) in[a] = (bits >> a) & 1;
    if (in[l.bottom] || !in[l.top]) continue;
    bool ok = true;
    for (int x = 0; x < l.n && ok; ++x)
      for (int y = 0; y < l.n && ok; ++y) {
        if ((in[x] && in[y]) != (bool)in[l.meet_of(x, y)]) ok = false;
        if ((in[x] || in[y]) != (bool)in[l.join_of(x, y)]) ok = false;
      }
    if (ok) out.push_back(filter_point(l, in));
  }
  std::sort(out.begin(), out.end());
  return out;
}

int heyting_implication(const FiniteFrame& f, int a, int b) {
  const FiniteLattice& l = f.lat();
  int r = l.bottom;
  for (int c = 0; c < l.n; ++c)
    if (l.leq(l.meet_of(c, a), b)) r = l.join_of(r, c);
  if (!l.leq(l.meet_of(r, a), b))
    throw internal_check("heyting implication not a candidate", {a, b, r});
  return r;
}

BooleanEnvelope boolean_envelope(const FiniteFrame& f) {
  const FiniteLattice& l = f.lat();
  std::vector<Point> pts = points(f);
  int k = (int)pts.size();
  // The envelope lives on subsets of points and must stay within the
  // carrier cap.
  if (k > 8) throw size_limit("boolean envelope over more than 8 points");

  // a^ = { p : p(a) = 1 } as a mask over point indices.
  std::vector<Mask> hat(l.n, 0);
  for (int a = 0; a < l.n; ++a)
    for (int i = 0; i < k; ++i)
      if (pts[i].contains(a)) hat[a] |= Mask(1) << i;

  Mask all = full_mask(k);
  std::vector<char> seen(std::size_t(1) << k, 0);
  std::vector<Mask> elems;
  auto add = [&](Mask m) {
    if (!seen[m]) {
      seen[m] = 1;
      elems.push_back(m);
    }
  };
  for (int a = 0; a < l.n; ++a) add(hat[a]);
  for (size_t i = 0; i < elems.size(); ++i) {
    add(all & ~elems[i]);
    for (size_t j = 0; j <= i; ++j) {
      add(elems[i] & elems[j]);
      add(elems[i] | elems[j]);
    }
  }
  std::sort(elems.begin(), elems.end());

  int m = (int)elems.size();
  auto index_of = [&](Mask x) {
    return (int)(std::lower_bound(elems.begin(), elems.end(), x) -
                 elems.begin());
  };
  SqTable mt(m), jt(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      mt.at(i, j) = index_of(elems[i] & elems[j]);
      jt.at(i, j) = index_of(elems[i] | elems[j]);
    }
  std::vector<std::string> labels(m);
  for (int i = 0; i < m; ++i) {
    std::string s = "{";
    for (int p : mask_to_list(elems[i])) {
      if (s.size() > 1) s += ",";
      s += "p" + std::to_string(p);
    }
    labels[i] = s + "}";
  }
  BooleanEnvelope env;
  env.algebra = validate_lattice(mt, jt, std::move(labels));
  env.element_sets = elems;

  std::vector<int> emb(l.n);
  for (int a = 0; a < l.n; ++a) emb[a] = index_of(hat[a]);
  for (int a = 0; a < l.n; ++a)
    for (int b = 0; b < l.n; ++b)
      if (a != b && emb[a] == emb[b])
        throw internal_check("envelope embedding not injective", {a, b});
  env.embedding = check_morphism(emb, l, env.algebra, laws_frame_hom);
  return env;
}

CheckResult morphism_laws(const std::vector<int>& map, const FiniteLattice& src,
                          const FiniteLattice& tgt, unsigned laws) {
  if ((int)map.size() != src.n)
    return CheckResult::fail("total-map", {(int)map.size()});
  for (int a = 0; a < src.n; ++a)
    if (map[a] < 0 || map[a] >= tgt.n) return CheckResult::fail("range", {a});
  if (laws & law_zero)
    if (map[src.bottom] != tgt.bottom)
      return CheckResult::fail("preserves-0", {src.bottom});
  if (laws & law_one)
    if (map[src.top] != tgt.top) return CheckResult::fail("preserves-1", {src.top});
  if (laws & law_meet)
    for (int a = 0; a < src.n; ++a)
      for (int b = 0; b < src.n; ++b)
        if (map[src.meet_of(a, b)] != tgt.meet_of(map[a], map[b]))
          return CheckResult::fail("preserves-meet", {a, b});
  if (laws & law_join)
    for (int a = 0; a < src.n; ++a)
      for (int b = 0; b < src.n; ++b)
        if (map[src.join_of(a, b)] != tgt.join_of(map[a], map[b]))
          return CheckResult::fail("preserves-join", {a, b});
  if (laws & law_proper)
    for (int y = 0; y < tgt.n; ++y) {
      bool dominated = false;
      for (int x = 0; x < src.n && !dominated; ++x)
        if (tgt.leq(y, map[x])) dominated = true;
      if (!dominated) return CheckResult::fail("proper", {y});
    }
  return CheckResult::pass();
}

TableMorphism check_morphism(const std::vector<int>& map,
                             const FiniteLattice& src,
                             const FiniteLattice& tgt, unsigned laws) {
  CheckResult r = morphism_laws(map, src, tgt, laws);
  if (!r) throw law_violation(r.law, r.witness);
  return TableMorphism{src.n, tgt.n, map, laws};
}

bool lattice_isomorphic(const FiniteLattice& a, const FiniteLattice& b,
                        std::vector<int>* iso) {
  if (a.n != b.n) return false;
  auto m = find_op_isomorphism({&a.meet, &a.join}, {&b.meet, &b.join});
  if (!m) return false;
  if (iso) *iso = *m;
  return true;
}

bool is_boolean(const FiniteLattice& l) {
  if (!is_frame(l)) return false;
  for (int x = 0; x < l.n; ++x) {
    bool has = false;
    for (int y = 0; y < l.n && !has; ++y)
      if (l.meet_of(x, y) == l.bottom && l.join_of(x, y) == l.top) has = true;
    if (!has) return false;
  }
  return true;
}

}  // namespace skewlat
