#include "skewlat/space.hpp"

#include <algorithm>
#include <set>

namespace skewlat {

bool FiniteSpace::is_open(Mask m) const {
  return std::binary_search(opens.begin(), opens.end(), m);
}

int FiniteSpace::open_index(Mask m) const {
  auto it = std::lower_bound(opens.begin(), opens.end(), m);
  if (it == opens.end() || *it != m) return -1;
  return (int)(it - opens.begin());
}

FiniteSpace validate_space(int points, std::vector<Mask> opens) {
  if (points < 0 || points > kMaxPoints)
    throw size_limit("spaces are capped at 12 points");
  Mask full = full_mask(points);
  std::sort(opens.begin(), opens.end());
  opens.erase(std::unique(opens.begin(), opens.end()), opens.end());
  for (Mask m : opens)
    if (m & ~full) throw parse_error("open contains out-of-range point");

  FiniteSpace y;
  y.points = points;
  y.opens = std::move(opens);
  if (!y.is_open(0) || !y.is_open(full))
    throw Error("NotClosed", "family must contain the empty and full sets");
  for (Mask a : y.opens)
    for (Mask b : y.opens) {
      if (!y.is_open(a | b))
        throw Error("NotClosed", "family not closed under union", "",
                    {(int)a, (int)b});
      if (!y.is_open(a & b))
        throw Error("NotClosed", "family not closed under intersection", "",
                    {(int)a, (int)b});
    }
  y.min_open.assign(points, 0);
  for (int p = 0; p < points; ++p) {
    Mask m = full;
    for (Mask u : y.opens)
      if (mask_has(u, p)) m &= u;
    y.min_open[p] = m;
  }
  return y;
}

FiniteSpace space_from_lists(int points,
                             const std::vector<std::vector<int>>& opens) {
  std::vector<Mask> ms;
  for (const auto& o : opens) ms.push_back(mask_from_list(o, points));
  return validate_space(points, std::move(ms));
}

std::vector<Mask> generate_topology(std::vector<Mask> subbasis, int points) {
  Mask full = full_mask(points);
  std::set<Mask> fam(subbasis.begin(), subbasis.end());
  fam.insert(0);
  fam.insert(full);
  // Intersection closure, then union closure; unions of an
  // intersection-closed family stay intersection-closed.
  for (int phase = 0; phase < 2; ++phase) {
    std::vector<Mask> work(fam.begin(), fam.end());
    for (size_t i = 0; i < work.size(); ++i)
      for (size_t j = 0; j < i; ++j) {
        Mask c = phase == 0 ? (work[i] & work[j]) : (work[i] | work[j]);
        if (fam.insert(c).second) work.push_back(c);
      }
  }
  return std::vector<Mask>(fam.begin(), fam.end());
}

SpecializationOrder specialization(const FiniteSpace& y) {
  SpecializationOrder o;
  o.points = y.points;
  o.leq.assign(y.points * y.points, 0);
  for (int x = 0; x < y.points; ++x)
    for (int z = 0; z < y.points; ++z) {
      // x in cl{z} iff every open around x contains z.
      o.leq[x * y.points + z] = mask_has(y.min_open[x], z) ? 1 : 0;
      if (x != z && o.leq[x * y.points + z] && mask_has(y.min_open[z], x) &&
          o.t0) {
        o.t0 = false;
        o.witness = {std::min(x, z), std::max(x, z)};
      }
    }
  return o;
}

FiniteSpace front_topology(const FiniteSpace& y) {
  Mask full = y.full();
  // Generator 1: locally closed sets as a basis.
  std::set<Mask> basis;
  for (Mask u : y.opens)
    for (Mask v : y.opens) basis.insert(u & (full & ~v));
  std::set<Mask> fam1{0};
  {
    std::vector<Mask> work(fam1.begin(), fam1.end());
    for (Mask b : basis)
      if (fam1.insert(b).second) work.push_back(b);
    for (size_t i = 0; i < work.size(); ++i)
      for (size_t j = 0; j < i; ++j) {
        Mask c = work[i] | work[j];
        if (fam1.insert(c).second) work.push_back(c);
      }
  }
  // Generator 2: subbasis of all opens and all closeds.
  std::vector<Mask> sub;
  for (Mask u : y.opens) {
    sub.push_back(u);
    sub.push_back(full & ~u);
  }
  std::vector<Mask> fam2 = generate_topology(std::move(sub), y.points);

  std::vector<Mask> fam(fam1.begin(), fam1.end());
  if (fam != fam2)
    throw internal_check("front topology generators disagree");
  return validate_space(y.points, std::move(fam));
}

namespace {

Mask closure_of(const FiniteSpace& y, Mask s) {
  Mask cl = y.full();
  for (Mask u : y.opens)
    if ((u & s) == 0) cl &= ~u;
  return cl & y.full();
}

}  // namespace

CheckResult is_sober(const FiniteSpace& y) {
  Mask full = y.full();
  for (Mask u : y.opens) {
    Mask c = full & ~u;
    if (c == 0) continue;
    bool irreducible = true;
    for (Mask a : y.opens) {
      if ((a & c) == 0) continue;
      for (Mask b : y.opens) {
        if ((b & c) == 0) continue;
        if ((a & b & c) == 0) {
          irreducible = false;
          break;
        }
      }
      if (!irreducible) break;
    }
    if (!irreducible) continue;
    int generic = 0;
    for (int p = 0; p < y.points; ++p)
      if (closure_of(y, Mask(1) << p) == c) ++generic;
    if (generic != 1)
      return CheckResult::fail(generic == 0 ? "irreducible-closed-no-generic"
                                            : "irreducible-closed-two-generics",
                               mask_to_list(c));
  }
  return CheckResult::pass();
}

FiniteFrame opens_lattice(const FiniteSpace& y) {
  int n = (int)y.opens.size();
  SqTable mt(n), jt(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      mt.at(i, j) = y.open_index(y.opens[i] & y.opens[j]);
      jt.at(i, j) = y.open_index(y.opens[i] | y.opens[j]);
    }
  std::vector<std::string> labels(n);
  for (int i = 0; i < n; ++i) {
    std::string s = "{";
    for (int p : mask_to_list(y.opens[i])) {
      if (s.size() > 1) s += ",";
      s += std::to_string(p);
    }
    labels[i] = s + "}";
  }
  return FiniteFrame::certify(validate_lattice(mt, jt, std::move(labels)));
}

namespace {

// Shared by sobrify and spectrum: the point space of a frame.
Spectrum point_space(const FiniteFrame& f) {
  Spectrum sp;
  sp.filters = points(f);
  int k = (int)sp.filters.size();
  if (k > kMaxPoints) throw size_limit("point space larger than 12 points");
  sp.hat.assign(f.size(), 0);
  for (int a = 0; a < f.size(); ++a)
    for (int i = 0; i < k; ++i)
      if (sp.filters[i].contains(a)) sp.hat[a] |= Mask(1) << i;
  std::vector<Mask> opens(sp.hat.begin(), sp.hat.end());
  std::sort(opens.begin(), opens.end());
  opens.erase(std::unique(opens.begin(), opens.end()), opens.end());
  sp.space = validate_space(k, std::move(opens));
  return sp;
}

}  // namespace

Spectrum spectrum(const FiniteLattice& d) {
  return point_space(FiniteFrame::certify(d));
}

Sobrification sobrify(const FiniteSpace& y) {
  FiniteFrame f = opens_lattice(y);
  Spectrum sp = point_space(f);
  Sobrification s;
  s.space = sp.space;
  s.pts = sp.filters;
  s.point_map.assign(y.points, -1);
  for (int p = 0; p < y.points; ++p) {
    std::vector<char> in(f.size(), 0);
    for (int o = 0; o < f.size(); ++o)
      if (mask_has(y.opens[o], p)) in[o] = 1;
    for (int i = 0; i < (int)sp.filters.size(); ++i)
      if (sp.filters[i].in == in) {
        s.point_map[p] = i;
        break;
      }
    if (s.point_map[p] < 0)
      throw internal_check("evaluation filter is not a point", {p});
  }
  return s;
}

FiniteSpace patch_topology(const FiniteSpace& x) {
  std::vector<Mask> sub;
  Mask full = x.full();
  for (Mask u : x.opens) {
    sub.push_back(u);
    sub.push_back(full & ~u);
  }
  return validate_space(x.points, generate_topology(std::move(sub), x.points));
}

PriestleyData priestley_of(const FiniteFrame& d) {
  Spectrum sp = spectrum(d.lat());
  PriestleyData p;
  p.carrier = sp.space.points;
  p.spectral = sp.space;
  p.patch = patch_topology(sp.space);
  p.order.assign(p.carrier * p.carrier, 0);
  for (int i = 0; i < p.carrier; ++i)
    for (int j = 0; j < p.carrier; ++j) {
      bool subset = true;
      for (int a = 0; a < d.size() && subset; ++a)
        if (sp.filters[i].contains(a) && !sp.filters[j].contains(a))
          subset = false;
      p.order[i * p.carrier + j] = subset ? 1 : 0;
    }
  return p;
}

namespace {

Mask down_set(const PriestleyData& p, Mask u) {
  Mask d = 0;
  for (int x = 0; x < p.carrier; ++x)
    for (int y = 0; y < p.carrier; ++y)
      if (mask_has(u, y) && p.leq(x, y)) d |= Mask(1) << x;
  return d;
}

Mask up_set_closure(const PriestleyData& p, Mask u) {
  Mask r = 0;
  for (int x = 0; x < p.carrier; ++x)
    for (int y = 0; y < p.carrier; ++y)
      if (mask_has(u, y) && p.leq(y, x)) r |= Mask(1) << x;
  return r;
}

bool patch_clopen(const PriestleyData& p, Mask u) {
  return p.patch.is_open(u) && p.patch.is_open(p.patch.full() & ~u);
}

}  // namespace

bool is_esakia(const PriestleyData& p) {
  for (Mask u : p.patch.opens) {
    if (!patch_clopen(p, u)) continue;
    if (!patch_clopen(p, down_set(p, u))) return false;
  }
  return true;
}

bool is_ext_ord_disconnected(const PriestleyData& p) {
  if (!is_esakia(p)) return false;
  for (Mask u : p.patch.opens) {
    if (up_set_closure(p, u) != u) continue;  // open upsets only
    Mask cl = p.patch.full();
    for (Mask o : p.patch.opens)
      if ((o & u) == 0) cl &= ~o;
    if (!patch_clopen(p, cl)) return false;
  }
  return true;
}

namespace {

std::vector<std::vector<int>> point_signatures(const FiniteSpace& s) {
  std::vector<std::vector<int>> sig(s.points);
  for (int p = 0; p < s.points; ++p) {
    std::vector<int> v;
    for (Mask u : s.opens)
      if (mask_has(u, p)) v.push_back((int)__builtin_popcount(u));
    std::sort(v.begin(), v.end());
    sig[p] = v;
  }
  return sig;
}

struct HomeoSearch {
  const FiniteSpace& a;
  const FiniteSpace& b;
  std::vector<std::vector<int>> sig_a, sig_b;
  std::vector<int> map;
  std::vector<char> used;

  bool leaf_ok() const {
    std::vector<Mask> mapped;
    for (Mask u : a.opens) {
      Mask v = 0;
      for (int p = 0; p < a.points; ++p)
        if (mask_has(u, p)) v |= Mask(1) << map[p];
      mapped.push_back(v);
    }
    std::sort(mapped.begin(), mapped.end());
    return mapped == b.opens;
  }

  bool extend(int p) {
    if (p == a.points) return leaf_ok();
    for (int q = 0; q < b.points; ++q) {
      if (used[q] || sig_a[p] != sig_b[q]) continue;
      map[p] = q;
      used[q] = 1;
      if (extend(p + 1)) return true;
      used[q] = 0;
    }
    return false;
  }
};

}  // namespace

bool spaces_homeomorphic(const FiniteSpace& a, const FiniteSpace& b,
                         std::vector<int>* map) {
  if (a.points != b.points || a.opens.size() != b.opens.size()) return false;
  HomeoSearch s{a,
                b,
                point_signatures(a),
                point_signatures(b),
                std::vector<int>(a.points, -1),
                std::vector<char>(a.points, 0)};
  if (!s.extend(0)) return false;
  if (map) *map = s.map;
  return true;
}

}  // namespace skewlat
