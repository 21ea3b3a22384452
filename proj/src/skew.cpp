#include "skewlat/skew.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <random>

#include "skewlat/iso.hpp"

namespace skewlat {

namespace {

// Bitset over carrier indices, sized for kMaxCarrier.
struct Bits {
  std::array<std::uint64_t, 4> w{};
  void set(int i) { w[i >> 6] |= 1ull << (i & 63); }
  bool get(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }
  Bits& operator&=(const Bits& o) {
    for (int i = 0; i < 4; ++i) w[i] &= o.w[i];
    return *this;
  }
  bool contains(const Bits& o) const {
    for (int i = 0; i < 4; ++i)
      if (o.w[i] & ~w[i]) return false;
    return true;
  }
  bool empty() const { return !(w[0] | w[1] | w[2] | w[3]); }
};

std::vector<Bits> above_rows(const FiniteSkewLattice& s) {
  std::vector<Bits> above(s.n);
  for (int a = 0; a < s.n; ++a)
    for (int b = 0; b < s.n; ++b)
      if (s.natural_leq(a, b)) above[a].set(b);
  return above;
}

std::optional<int> sup_from_above(const FiniteSkewLattice& s,
                                  const std::vector<Bits>& above,
                                  const std::vector<int>& subset) {
  Bits ub;
  for (int i = 0; i < s.n; ++i) ub.set(i);
  for (int c : subset) ub &= above[c];
  if (ub.empty()) return std::nullopt;
  for (int u = 0; u < s.n; ++u)
    if (ub.get(u) && above[u].contains(ub)) return u;
  return std::nullopt;
}

}  // namespace

FiniteSkewLattice validate_skew(const SqTable& meet, const SqTable& join,
                                std::optional<int> zero,
                                std::vector<std::string> labels) {
  int n = meet.n;
  if (n < 1 || join.n != n)
    throw parse_error("meet/join tables must be square and equally sized");
  if (n > kMaxCarrier) throw size_limit("carrier larger than 256");
  if (!labels.empty() && (int)labels.size() != n)
    throw parse_error("labels size mismatch");
  if (zero && (*zero < 0 || *zero >= n))
    throw parse_error("zero index out of range");

  for (int x = 0; x < n; ++x) {
    if (meet.at(x, x) != x) throw axiom_violation("meet-idempotent", {x});
    if (join.at(x, x) != x) throw axiom_violation("join-idempotent", {x});
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        if (meet.at(x, meet.at(y, z)) != meet.at(meet.at(x, y), z))
          throw axiom_violation("meet-associative", {x, y, z});
        if (join.at(x, join.at(y, z)) != join.at(join.at(x, y), z))
          throw axiom_violation("join-associative", {x, y, z});
      }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (meet.at(x, join.at(x, y)) != x ||
          join.at(x, meet.at(x, y)) != x ||
          join.at(meet.at(x, y), y) != y ||
          meet.at(join.at(x, y), y) != y)
        throw axiom_violation("absorption", {x, y});
    }
  if (zero) {
    int z = *zero;
    for (int x = 0; x < n; ++x)
      if (join.at(x, z) != x || join.at(z, x) != x || meet.at(x, z) != z ||
          meet.at(z, x) != z)
        throw axiom_violation("zero", {x});
  }
  return FiniteSkewLattice{n, meet, join, zero, std::move(labels)};
}

std::optional<int> find_zero(const FiniteSkewLattice& s) {
  for (int z = 0; z < s.n; ++z) {
    bool ok = true;
    for (int x = 0; x < s.n && ok; ++x)
      if (s.join_of(x, z) != x || s.join_of(z, x) != x) ok = false;
    if (ok) return z;
  }
  return std::nullopt;
}

DStructure green_D(const FiniteSkewLattice& s) {
  int n = s.n;
  auto related = [&](int a, int b) {
    bool by_meet = s.meet_of(s.meet_of(a, b), a) == a &&
                   s.meet_of(s.meet_of(b, a), b) == b;
    bool by_join = s.join_of(s.join_of(a, b), a) == a &&
                   s.join_of(s.join_of(b, a), b) == b;
    if (by_meet != by_join)
      throw internal_check("D-relation meet/join formulations disagree",
                           {a, b});
    return by_meet;
  };

  DStructure d;
  d.class_of.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    if (d.class_of[a] >= 0) continue;
    int id = (int)d.classes.size();
    d.classes.push_back({});
    for (int b = a; b < n; ++b)
      if (d.class_of[b] < 0 && related(a, b)) {
        d.class_of[b] = id;
        d.classes[id].push_back(b);
      }
  }

  // D must be compatible with both operations.
  for (int u = 0; u < (int)d.classes.size(); ++u)
    for (size_t i = 0; i + 1 < d.classes[u].size(); ++i) {
      int a = d.classes[u][i], a2 = d.classes[u][i + 1];
      for (int b = 0; b < n; ++b) {
        if (d.class_of[s.meet_of(a, b)] != d.class_of[s.meet_of(a2, b)] ||
            d.class_of[s.meet_of(b, a)] != d.class_of[s.meet_of(b, a2)] ||
            d.class_of[s.join_of(a, b)] != d.class_of[s.join_of(a2, b)] ||
            d.class_of[s.join_of(b, a)] != d.class_of[s.join_of(b, a2)])
          throw Error("CongruenceFailure", "D is not a congruence", "",
                      {a, a2, b});
      }
    }

  d.leq_elem.assign(n * n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (s.natural_leq(a, b)) d.leq_elem[a * n + b] = 1;

  int k = (int)d.classes.size();
  d.class_leq.assign(k * k, 0);
  for (int u = 0; u < k; ++u)
    for (int v = 0; v < k; ++v) {
      int a = d.classes[u][0], b = d.classes[v][0];
      if (d.class_of[s.meet_of(a, b)] == u) d.class_leq[u * k + v] = 1;
    }

  // The class order is the image of the element order.
  for (int u = 0; u < k; ++u)
    for (int v = 0; v < k; ++v) {
      bool image = false;
      for (int a : d.classes[u]) {
        for (int b : d.classes[v])
          if (s.natural_leq(a, b)) {
            image = true;
            break;
          }
        if (image) break;
      }
      if (image != (bool)d.class_leq[u * k + v])
        throw internal_check("class order differs from image of natural order",
                             {u, v});
    }

  for (int t = 0; t < k; ++t) {
    bool top = true;
    for (int u = 0; u < k && top; ++u)
      if (!d.class_leq[u * k + t]) top = false;
    if (top) {
      d.top_class = t;
      break;
    }
  }
  return d;
}

Shadow shadow(const FiniteSkewLattice& s) {
  DStructure d = green_D(s);
  int k = (int)d.classes.size();
  SqTable mt(k), jt(k);
  for (int u = 0; u < k; ++u)
    for (int v = 0; v < k; ++v) {
      int a = d.classes[u][0], b = d.classes[v][0];
      mt.at(u, v) = d.class_of[s.meet_of(a, b)];
      jt.at(u, v) = d.class_of[s.join_of(a, b)];
    }
  std::vector<std::string> labels(k);
  for (int u = 0; u < k; ++u) {
    std::string lbl = "{";
    for (int a : d.classes[u]) {
      if (lbl.size() > 1) lbl += ",";
      lbl += (a < (int)s.labels.size() && !s.labels[a].empty())
                 ? s.labels[a]
                 : std::to_string(a);
    }
    labels[u] = lbl + "}";
  }
  Shadow sh{validate_lattice(mt, jt, std::move(labels)), {}, std::move(d)};

  unsigned laws = law_meet | law_join;
  for (int a = 0; a < s.n; ++a)
    for (int b = 0; b < s.n; ++b) {
      if (sh.d.class_of[s.meet_of(a, b)] !=
          sh.lattice.meet_of(sh.d.class_of[a], sh.d.class_of[b]))
        throw internal_check("projection breaks meet", {a, b});
      if (sh.d.class_of[s.join_of(a, b)] !=
          sh.lattice.join_of(sh.d.class_of[a], sh.d.class_of[b]))
        throw internal_check("projection breaks join", {a, b});
    }
  if (s.zero) {
    if (sh.d.class_of[*s.zero] != sh.lattice.bottom)
      throw internal_check("projection breaks zero", {*s.zero});
    laws |= law_zero;
  }
  sh.projection = TableMorphism{s.n, k, sh.d.class_of, laws};
  return sh;
}

std::optional<int> natural_sup(const FiniteSkewLattice& s,
                               const std::vector<int>& subset) {
  return sup_from_above(s, above_rows(s), subset);
}

std::vector<std::vector<int>> commuting_subsets(const FiniteSkewLattice& s,
                                                int max_size, long node_cap) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto extend = [&](auto&& self, int start) -> void {
    for (int i = start; i < s.n; ++i) {
      bool ok = true;
      for (int c : cur)
        if (!s.commute(c, i)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      cur.push_back(i);
      if ((long)out.size() >= node_cap)
        throw size_limit("too many commuting subsets");
      out.push_back(cur);
      if (max_size < 0 || (int)cur.size() < max_size) self(self, i + 1);
      cur.pop_back();
    }
  };
  extend(extend, 0);
  return out;
}

namespace {

struct JoinCompleteResult {
  bool complete = true;
  bool sampled = false;
  std::vector<int> witness;
};

JoinCompleteResult join_complete_check(const FiniteSkewLattice& s,
                                       const std::vector<Bits>& above,
                                       const ClassifyOptions& opt) {
  JoinCompleteResult r;
  auto check = [&](const std::vector<int>& subset) {
    if (!sup_from_above(s, above, subset)) {
      r.complete = false;
      r.witness = subset;
      return false;
    }
    return true;
  };

  if (s.n <= opt.full_subset_cap) {
    for (const auto& c : commuting_subsets(s, -1))
      if (!check(c)) return r;
    return r;
  }

  r.sampled = true;
  for (const auto& c : commuting_subsets(s, 3))
    if (!check(c)) return r;

  std::mt19937_64 rng(opt.seed);
  std::vector<int> perm(s.n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int t = 0; t < opt.sample_count; ++t) {
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> clique;
    for (int e : perm) {
      bool ok = true;
      for (int c : clique)
        if (!s.commute(c, e)) {
          ok = false;
          break;
        }
      if (ok) clique.push_back(e);
    }
    std::sort(clique.begin(), clique.end());
    if (!check(clique)) return r;
  }
  return r;
}

// Direct check of the two infinite distributive laws over all commuting
// subsets that have suprema.
bool infinite_distributive_ok(const FiniteSkewLattice& s,
                              const std::vector<Bits>& above,
                              std::vector<int>* witness) {
  for (const auto& c : commuting_subsets(s, -1)) {
    auto v = sup_from_above(s, above, c);
    if (!v) continue;
    for (int y = 0; y < s.n; ++y) {
      std::vector<int> left, right;
      for (int x : c) {
        left.push_back(s.meet_of(x, y));
        right.push_back(s.meet_of(y, x));
      }
      auto sl = sup_from_above(s, above, left);
      auto sr = sup_from_above(s, above, right);
      if (!sl || *sl != s.meet_of(*v, y) || !sr || *sr != s.meet_of(y, *v)) {
        if (witness) {
          *witness = c;
          witness->push_back(y);
        }
        return false;
      }
    }
  }
  return true;
}

}  // namespace

PropertyReport classify(const FiniteSkewLattice& s,
                        const ClassifyOptions& opt) {
  int n = s.n;
  PropertyReport r;
  auto fail = [&](bool& flag, const std::string& name, std::vector<int> w) {
    flag = false;
    if (!r.witnesses.count(name)) r.witnesses[name] = std::move(w);
  };

  // The meet- and join-formulations of handedness are equivalent as whole
  // identities (not pointwise); both are computed and compared at the end.
  bool lh_meet = true, lh_join = true, rh_meet = true, rh_join = true;
  r.symmetric = true;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      int mxy = s.meet_of(x, y), myx = s.meet_of(y, x);
      int jxy = s.join_of(x, y), jyx = s.join_of(y, x);
      if (lh_meet && s.meet_of(mxy, x) != mxy) {
        lh_meet = false;
        r.witnesses.emplace("left-handed", std::vector<int>{x, y});
      }
      if (lh_join && s.join_of(jxy, x) != jyx) lh_join = false;
      if (rh_meet && s.meet_of(mxy, x) != myx) {
        rh_meet = false;
        r.witnesses.emplace("right-handed", std::vector<int>{x, y});
      }
      if (rh_join && s.join_of(jxy, x) != jxy) rh_join = false;
      if (r.symmetric && ((mxy == myx) != (jxy == jyx)))
        fail(r.symmetric, "symmetric", {x, y});
    }
  if (lh_meet != lh_join)
    throw internal_check("left-handed formulations disagree");
  if (rh_meet != rh_join)
    throw internal_check("right-handed formulations disagree");
  r.left_handed = lh_meet;
  r.right_handed = rh_meet;
  if (r.left_handed) r.witnesses.erase("left-handed");
  if (r.right_handed) r.witnesses.erase("right-handed");

  r.strongly_distributive = true;
  r.distributive = true;
  r.normal = true;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        if (r.strongly_distributive) {
          bool a = s.meet_of(s.join_of(x, y), z) ==
                   s.join_of(s.meet_of(x, z), s.meet_of(y, z));
          bool b = s.meet_of(x, s.join_of(y, z)) ==
                   s.join_of(s.meet_of(x, y), s.meet_of(x, z));
          if (!a || !b)
            fail(r.strongly_distributive, "strongly-distributive", {x, y, z});
        }
        if (r.distributive) {
          bool a = s.meet_of(s.meet_of(x, s.join_of(y, z)), x) ==
                   s.join_of(s.meet_of(s.meet_of(x, y), x),
                             s.meet_of(s.meet_of(x, z), x));
          bool b = s.join_of(s.join_of(x, s.meet_of(y, z)), x) ==
                   s.meet_of(s.join_of(s.join_of(x, y), x),
                             s.join_of(s.join_of(x, z), x));
          if (!a || !b) fail(r.distributive, "distributive", {x, y, z});
        }
        if (r.normal) {
          if (s.meet_of(s.meet_of(s.meet_of(x, y), z), x) !=
              s.meet_of(s.meet_of(s.meet_of(x, z), y), x))
            fail(r.normal, "normal", {x, y, z});
        }
      }

  auto z = find_zero(s);
  if (s.zero && z && *s.zero != *z)
    throw internal_check("declared zero differs from detected zero");
  r.has_zero = z.has_value();
  if (!r.has_zero) r.witnesses["zero"] = {};

  auto above = above_rows(s);
  JoinCompleteResult jc = join_complete_check(s, above, opt);
  r.join_complete = jc.complete;
  r.sampled = jc.sampled;
  if (!jc.complete) r.witnesses["join-complete"] = jc.witness;

  Shadow sh = shadow(s);
  r.has_top_class = sh.d.top_class.has_value();
  if (r.join_complete && !r.has_top_class)
    throw Error("NoTopClass", "join complete but no maximal D-class");

  bool shadow_frame = (bool)is_frame(sh.lattice);
  if (!shadow_frame) r.witnesses["shadow-frame"] = is_frame(sh.lattice).witness;

  r.ncframe = r.has_zero && r.strongly_distributive && shadow_frame &&
              r.join_complete && r.has_top_class;
  if (r.ncframe && n <= opt.inf_dist_cap) {
    std::vector<int> w;
    if (!infinite_distributive_ok(s, above, &w)) {
      r.ncframe = false;
      r.witnesses["infinite-distributivity"] = w;
    }
  }
  return r;
}

int restrict_to_class(const FiniteSkewLattice& s, const DStructure& d, int a,
                      int u) {
  int ua = d.class_of[a];
  if (!d.cls_leq(u, ua))
    throw Error("NoSuchClass", "class is not below the class of a", "",
                {a, u});
  int found = -1;
  for (int b : d.classes[u])
    if (s.natural_leq(b, a)) {
      if (found >= 0)
        throw Error("NonUnique", "restriction is not unique", "", {a, u});
      found = b;
    }
  if (found < 0)
    throw internal_check("no restriction below a in a comparable class",
                         {a, u});
  return found;
}

int intersection(const FiniteSkewLattice& s, const std::vector<int>& c) {
  if (c.empty()) throw parse_error("intersection of empty subset");
  std::vector<int> lower;
  for (int x = 0; x < s.n; ++x) {
    bool lb = true;
    for (int ci : c)
      if (!s.natural_leq(x, ci)) {
        lb = false;
        break;
      }
    if (lb) lower.push_back(x);
  }
  for (int g : lower) {
    bool greatest = true;
    for (int x : lower)
      if (!s.natural_leq(x, g)) {
        greatest = false;
        break;
      }
    if (greatest) return g;
  }
  throw internal_check("no greatest lower bound; input not normal with 0?");
}

FiniteSkewLattice partial_function_skew(int r, int s, int cap) {
  if (r < 0 || s < 1) throw parse_error("need r >= 0, s >= 1");
  long count = 1;
  for (int i = 0; i < r; ++i) {
    count *= (s + 1);
    if (count > cap) throw size_limit("(s+1)^r exceeds the configured cap");
  }
  int n = (int)count;

  auto digits = [&](int e) {
    std::vector<int> d(r);
    for (int i = 0; i < r; ++i) {
      d[i] = e % (s + 1);
      e /= (s + 1);
    }
    return d;
  };
  auto encode = [&](const std::vector<int>& d) {
    int e = 0;
    for (int i = r - 1; i >= 0; --i) e = e * (s + 1) + d[i];
    return e;
  };

  SqTable mt(n), jt(n);
  for (int f = 0; f < n; ++f) {
    auto df = digits(f);
    for (int g = 0; g < n; ++g) {
      auto dg = digits(g);
      std::vector<int> dm(r), dj(r);
      for (int i = 0; i < r; ++i) {
        dm[i] = (df[i] != 0 && dg[i] != 0) ? df[i] : 0;
        dj[i] = dg[i] != 0 ? dg[i] : df[i];
      }
      mt.at(f, g) = encode(dm);
      jt.at(f, g) = encode(dj);
    }
  }
  std::vector<std::string> labels(n);
  for (int f = 0; f < n; ++f) {
    auto d = digits(f);
    std::string lbl;
    for (int i = 0; i < r; ++i)
      lbl += d[i] == 0 ? '-' : char('0' + d[i] - 1);
    labels[f] = lbl;
  }
  return validate_skew(mt, jt, 0, std::move(labels));
}

FiniteSkewLattice primitive(int t) {
  if (t < 1) throw parse_error("primitive needs at least one top element");
  int n = t + 1;
  if (n > kMaxCarrier) throw size_limit("carrier larger than 256");
  SqTable mt(n), jt(n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      mt.at(x, y) = (x == 0 || y == 0) ? 0 : x;
      jt.at(x, y) = x == 0 ? y : (y == 0 ? x : y);
    }
  std::vector<std::string> labels(n);
  labels[0] = "0";
  for (int i = 1; i < n; ++i) labels[i] = "t" + std::to_string(i);
  return validate_skew(mt, jt, 0, std::move(labels));
}

std::vector<std::vector<int>> enumerate_skew_homs(const FiniteSkewLattice& a,
                                                  const FiniteSkewLattice& b,
                                                  long cap) {
  std::vector<std::vector<int>> out;
  std::vector<int> h(a.n, -1);
  long visited = 0;

  auto consistent = [&](int k) {
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j <= k; ++j) {
        int m = a.meet_of(i, j), jn = a.join_of(i, j);
        if (m <= k && b.meet_of(h[i], h[j]) != h[m]) return false;
        if (jn <= k && b.join_of(h[i], h[j]) != h[jn]) return false;
      }
    return true;
  };
  auto rec = [&](auto&& self, int k) -> void {
    if (k == a.n) {
      out.push_back(h);
      return;
    }
    for (int v = 0; v < b.n; ++v) {
      if (a.zero && b.zero && k == *a.zero && v != *b.zero) continue;
      if (++visited > cap) throw size_limit("hom enumeration cap exceeded");
      h[k] = v;
      if (consistent(k)) self(self, k + 1);
      h[k] = -1;
    }
  };
  rec(rec, 0);
  return out;
}

bool skew_isomorphic(const FiniteSkewLattice& a, const FiniteSkewLattice& b,
                     std::vector<int>* iso) {
  if (a.n != b.n) return false;
  auto m = find_op_isomorphism({&a.meet, &a.join}, {&b.meet, &b.join});
  if (!m) return false;
  if (iso) *iso = *m;
  return true;
}

}  // namespace skewlat
