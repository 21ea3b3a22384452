#include "skewlat/sheaf.hpp"

#include <algorithm>

namespace skewlat {

namespace {

// Distinct minimal opens inside U, as open indices.
std::vector<int> nodes_inside(const FiniteSheaf& e, Mask u) {
  std::vector<Mask> nodes;
  for (int p = 0; p < e.space.points; ++p)
    if (mask_has(u, p)) nodes.push_back(e.space.min_open[p]);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::vector<int> idx;
  for (Mask m : nodes) idx.push_back(e.space.open_index(m));
  return idx;
}

// Tuples (t_m) over the minimal opens inside U with t_m' = t_m|m' whenever
// m' is inside m. A sheaf's sections over U map bijectively onto these.
std::vector<std::vector<int>> compatible_tuples(const FiniteSheaf& e, Mask u) {
  std::vector<int> nodes = nodes_inside(e, u);
  int k = (int)nodes.size();
  std::vector<std::vector<int>> out;
  std::vector<int> t(k, -1);
  auto rec = [&](auto&& self, int i) -> void {
    if (i == k) {
      out.push_back(t);
      return;
    }
    for (int v = 0; v < e.sec(nodes[i]); ++v) {
      bool ok = true;
      for (int j = 0; j < i && ok; ++j) {
        Mask mi = e.space.opens[nodes[i]], mj = e.space.opens[nodes[j]];
        if (subset_of(mi, mj) && e.restrict_sec(nodes[j], nodes[i], t[j]) != v)
          ok = false;
        if (subset_of(mj, mi) && e.restrict_sec(nodes[i], nodes[j], v) != t[j])
          ok = false;
      }
      if (ok) {
        t[i] = v;
        self(self, i + 1);
        t[i] = -1;
      }
    }
  };
  rec(rec, 0);
  return out;
}

std::vector<int> section_tuple(const FiniteSheaf& e, int u,
                               const std::vector<int>& nodes, int s) {
  std::vector<int> t;
  for (int m : nodes) t.push_back(e.restrict_sec(u, m, s));
  return t;
}

CheckResult functoriality(const FiniteSheaf& e) {
  int m = (int)e.space.opens.size();
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < m; ++v) {
      if (!subset_of(e.space.opens[v], e.space.opens[u])) continue;
      if (u == v) {
        auto it = e.res.find({u, u});
        if (it != e.res.end())
          for (int s = 0; s < e.sec(u); ++s)
            if (it->second[s] != s)
              return CheckResult::fail("restriction-identity", {u, s});
        continue;
      }
      auto it = e.res.find({u, v});
      if (it == e.res.end())
        return CheckResult::fail("restriction-missing", {u, v});
      if ((int)it->second.size() != e.sec(u))
        return CheckResult::fail("restriction-size", {u, v});
      for (int s = 0; s < e.sec(u); ++s)
        if (it->second[s] < 0 || it->second[s] >= e.sec(v))
          return CheckResult::fail("restriction-range", {u, v, s});
    }
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < m; ++v) {
      if (u == v || !subset_of(e.space.opens[v], e.space.opens[u])) continue;
      for (int w = 0; w < m; ++w) {
        if (w == v || w == u) continue;
        if (!subset_of(e.space.opens[w], e.space.opens[v])) continue;
        for (int s = 0; s < e.sec(u); ++s)
          if (e.restrict_sec(v, w, e.restrict_sec(u, v, s)) !=
              e.restrict_sec(u, w, s))
            return CheckResult::fail("restriction-composition", {u, v, w, s});
      }
    }
  return CheckResult::pass();
}

}  // namespace

CheckResult sheaf_gluing(const FiniteSheaf& e) {
  for (int u = 0; u < (int)e.space.opens.size(); ++u) {
    std::vector<int> nodes = nodes_inside(e, e.space.opens[u]);
    auto tuples = compatible_tuples(e, e.space.opens[u]);
    std::map<std::vector<int>, int> seen;
    for (int s = 0; s < e.sec(u); ++s) {
      auto t = section_tuple(e, u, nodes, s);
      auto it = seen.find(t);
      if (it != seen.end())
        return CheckResult::fail("gluing-uniqueness", {u, it->second, s});
      seen[t] = s;
    }
    for (const auto& t : tuples)
      if (!seen.count(t)) {
        std::vector<int> w{u};
        w.insert(w.end(), t.begin(), t.end());
        return CheckResult::fail("gluing-existence", w);
      }
    if ((int)tuples.size() != e.sec(u)) {
      // All tuples hit and sections distinct, so counts must agree.
      return CheckResult::fail("gluing-count", {u, (int)tuples.size(), e.sec(u)});
    }
  }
  return CheckResult::pass();
}

FiniteSheaf validate_presheaf(
    FiniteSpace space, std::vector<int> sections,
    std::map<std::pair<int, int>, std::vector<int>> res) {
  if (sections.size() != space.opens.size())
    throw parse_error("sections list must match the opens list");
  for (int c : sections)
    if (c < 0) throw parse_error("negative section count");
  for (const auto& [k, tbl] : res) {
    (void)tbl;
    if (k.first < 0 || k.first >= (int)space.opens.size() || k.second < 0 ||
        k.second >= (int)space.opens.size())
      throw parse_error("restriction references unknown open");
    if (!subset_of(space.opens[k.second], space.opens[k.first]))
      throw parse_error("restriction target is not a subset of its source");
  }
  FiniteSheaf e{std::move(space), std::move(sections), std::move(res)};
  CheckResult f = functoriality(e);
  if (!f) throw Error("FunctorialityFailure", f.law, f.law, f.witness);
  return e;
}

FiniteSheaf validate_sheaf(FiniteSpace space, std::vector<int> sections,
                           std::map<std::pair<int, int>, std::vector<int>> res) {
  FiniteSheaf e =
      validate_presheaf(std::move(space), std::move(sections), std::move(res));
  CheckResult g = sheaf_gluing(e);
  if (!g) throw Error("GluingFailure", g.law, g.law, g.witness);
  return e;
}

int stalk_open(const FiniteSheaf& e, int p) {
  return e.space.open_index(e.space.min_open[p]);
}

int stalk_size(const FiniteSheaf& e, int p) {
  return e.sec(stalk_open(e, p));
}

int germ_at(const FiniteSheaf& e, int u, int s, int p) {
  if (!mask_has(e.space.opens[u], p))
    throw Error("PointOutsideDomain", "point not in the section's domain", "",
                {u, p});
  return e.restrict_sec(u, stalk_open(e, p), s);
}

std::vector<int> germ_tuple(const FiniteSheaf& e, int u, int s) {
  std::vector<int> t;
  for (int p : mask_to_list(e.space.opens[u]))
    t.push_back(germ_at(e, u, s, p));
  return t;
}

CheckResult etale_laws(const EtaleSpace& et) {
  for (Mask u : et.base.opens) {
    Mask pre = 0;
    for (int g = 0; g < et.total.points; ++g)
      if (mask_has(u, et.proj[g])) pre |= Mask(1) << g;
    if (!et.total.is_open(pre))
      return CheckResult::fail("projection-continuous", {(int)u});
  }
  for (int g = 0; g < et.total.points; ++g) {
    bool found = false;
    for (Mask w : et.total.opens) {
      if (!mask_has(w, g)) continue;
      Mask img = 0;
      bool inj = true;
      for (int h = 0; h < et.total.points && inj; ++h)
        if (mask_has(w, h)) {
          if (mask_has(img, et.proj[h])) inj = false;
          img |= Mask(1) << et.proj[h];
        }
      if (inj && et.base.is_open(img)) {
        found = true;
        break;
      }
    }
    if (!found) return CheckResult::fail("local-homeomorphism", {g});
  }
  return CheckResult::pass();
}

EtaleSpace etale_space(const FiniteSheaf& e) {
  EtaleSpace et;
  et.base = e.space;
  et.offset.assign(e.space.points, 0);
  int total = 0;
  for (int p = 0; p < e.space.points; ++p) {
    et.offset[p] = total;
    total += stalk_size(e, p);
  }
  if (total > kMaxPoints)
    throw size_limit("etale space larger than 12 germs");
  et.proj.assign(total, 0);
  for (int p = 0; p < e.space.points; ++p)
    for (int s = 0; s < stalk_size(e, p); ++s) {
      et.proj[et.offset[p] + s] = p;
      et.germ_id.push_back({p, s});
    }

  std::vector<Mask> sub;
  for (int u = 0; u < (int)e.space.opens.size(); ++u)
    for (int s = 0; s < e.sec(u); ++s) {
      Mask img = 0;
      for (int p : mask_to_list(e.space.opens[u]))
        img |= Mask(1) << et.germ_index(p, germ_at(e, u, s, p));
      sub.push_back(img);
    }
  et.total = validate_space(total, generate_topology(std::move(sub), total));

  CheckResult laws = etale_laws(et);
  if (!laws) throw internal_check("etale laws fail for a sheaf: " + laws.law,
                                  laws.witness);
  return et;
}

FiniteSheaf sheaf_from_etale(
    const EtaleSpace& et,
    std::vector<std::vector<std::vector<int>>>* choices_out) {
  CheckResult laws = etale_laws(et);
  if (!laws) throw Error("NotLocalHomeo", laws.law, laws.law, laws.witness);

  const FiniteSpace& base = et.base;
  std::vector<int> sections(base.opens.size(), 0);
  // Per open: continuous germ choices, lexicographic in the choice vector.
  std::vector<std::vector<std::vector<int>>> secs(base.opens.size());
  for (int u = 0; u < (int)base.opens.size(); ++u) {
    std::vector<int> pts = mask_to_list(base.opens[u]);
    std::vector<int> choice(pts.size(), 0);
    long count = 1;
    for (int p : pts) {
      int st = 0;
      for (int g = 0; g < et.total.points; ++g)
        if (et.proj[g] == p) ++st;
      count *= std::max(st, 1);
      if (count > 65536) throw size_limit("too many candidate sections");
      if (st == 0 && !pts.empty()) count = 0;
    }
    auto rec = [&](auto&& self, size_t i) -> void {
      if (i == pts.size()) {
        Mask graph = 0;
        for (size_t j = 0; j < pts.size(); ++j)
          graph |= Mask(1) << choice[j];
        for (Mask w : et.total.opens) {
          Mask pre = 0;
          for (size_t j = 0; j < pts.size(); ++j)
            if (mask_has(w & graph, choice[j])) pre |= Mask(1) << pts[j];
          if (!base.is_open(pre)) return;
        }
        secs[u].push_back(choice);
        return;
      }
      for (int g = 0; g < et.total.points; ++g)
        if (et.proj[g] == pts[i]) {
          choice[i] = g;
          self(self, i + 1);
        }
      return;
    };
    rec(rec, 0);
    sections[u] = (int)secs[u].size();
  }

  std::map<std::pair<int, int>, std::vector<int>> res;
  for (int u = 0; u < (int)base.opens.size(); ++u) {
    std::vector<int> pu = mask_to_list(base.opens[u]);
    for (int v = 0; v < (int)base.opens.size(); ++v) {
      if (u == v || !subset_of(base.opens[v], base.opens[u])) continue;
      std::vector<int> keep;
      for (size_t i = 0; i < pu.size(); ++i)
        if (mask_has(base.opens[v], pu[i])) keep.push_back((int)i);
      std::vector<int> tbl;
      for (const auto& c : secs[u]) {
        std::vector<int> sub;
        for (int i : keep) sub.push_back(c[i]);
        auto it = std::find(secs[v].begin(), secs[v].end(), sub);
        if (it == secs[v].end())
          throw internal_check("restricted section not continuous", {u, v});
        tbl.push_back((int)(it - secs[v].begin()));
      }
      res[{u, v}] = std::move(tbl);
    }
  }
  if (choices_out) *choices_out = secs;
  return validate_sheaf(base, std::move(sections), std::move(res));
}

FiniteSheaf pushforward(const std::vector<int>& f, const FiniteSpace& target,
                        const FiniteSheaf& e) {
  if ((int)f.size() != e.space.points)
    throw parse_error("point map size mismatch");
  for (int v : f)
    if (v < 0 || v >= target.points) throw parse_error("point map out of range");

  auto preimage = [&](Mask w) {
    Mask pre = 0;
    for (int p = 0; p < e.space.points; ++p)
      if (mask_has(w, f[p])) pre |= Mask(1) << p;
    return pre;
  };
  std::vector<int> pre_idx(target.opens.size());
  for (int w = 0; w < (int)target.opens.size(); ++w) {
    int u = e.space.open_index(preimage(target.opens[w]));
    if (u < 0)
      throw Error("NotContinuous", "preimage of an open is not open", "",
                  {(int)target.opens[w]});
    pre_idx[w] = u;
  }

  std::vector<int> sections(target.opens.size());
  for (int w = 0; w < (int)target.opens.size(); ++w)
    sections[w] = e.sec(pre_idx[w]);
  std::map<std::pair<int, int>, std::vector<int>> res;
  for (int w = 0; w < (int)target.opens.size(); ++w)
    for (int w2 = 0; w2 < (int)target.opens.size(); ++w2) {
      if (w == w2 || !subset_of(target.opens[w2], target.opens[w])) continue;
      std::vector<int> tbl;
      for (int s = 0; s < sections[w]; ++s)
        tbl.push_back(e.restrict_sec(pre_idx[w], pre_idx[w2], s));
      res[{w, w2}] = std::move(tbl);
    }
  return validate_presheaf(target, std::move(sections), std::move(res));
}

StalkDiagram diagram_of(const FiniteSpace& y) {
  StalkDiagram d;
  d.nodes = y.min_open;
  std::sort(d.nodes.begin(), d.nodes.end());
  d.nodes.erase(std::unique(d.nodes.begin(), d.nodes.end()), d.nodes.end());
  return d;
}

FiniteSheaf sheaf_from_stalks(const FiniteSpace& y, const StalkDiagram& d) {
  StalkDiagram ref = diagram_of(y);
  if (d.nodes != ref.nodes)
    throw parse_error("diagram nodes must be the minimal opens of the space");
  if (d.sizes.size() != d.nodes.size()) throw parse_error("sizes mismatch");
  int k = (int)d.nodes.size();
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (i == j || !subset_of(d.nodes[j], d.nodes[i])) continue;
      auto it = d.maps.find({i, j});
      if (it == d.maps.end() || (int)it->second.size() != d.sizes[i])
        throw parse_error("missing or ill-sized transition map");
      for (int v : it->second)
        if (v < 0 || v >= d.sizes[j])
          throw parse_error("transition map out of range");
    }

  // Sections over U = compatible tuples over the nodes inside U.
  std::vector<std::vector<int>> node_sets(y.opens.size());
  std::vector<std::vector<std::vector<int>>> tuples(y.opens.size());
  for (int u = 0; u < (int)y.opens.size(); ++u) {
    std::vector<int> in;
    for (int i = 0; i < k; ++i)
      if (subset_of(d.nodes[i], y.opens[u])) in.push_back(i);
    node_sets[u] = in;
    std::vector<int> t(in.size(), -1);
    auto rec = [&](auto&& self, size_t idx) -> void {
      if (idx == in.size()) {
        tuples[u].push_back(t);
        return;
      }
      for (int v = 0; v < d.sizes[in[idx]]; ++v) {
        bool ok = true;
        for (size_t j = 0; j < idx && ok; ++j) {
          int a = in[j], b = in[idx];
          if (subset_of(d.nodes[b], d.nodes[a]) &&
              d.maps.at({a, b})[t[j]] != v)
            ok = false;
          if (subset_of(d.nodes[a], d.nodes[b]) &&
              d.maps.at({b, a})[v] != t[j])
            ok = false;
        }
        if (ok) {
          t[idx] = v;
          self(self, idx + 1);
          t[idx] = -1;
        }
      }
    };
    rec(rec, 0);
  }

  std::vector<int> sections(y.opens.size());
  for (size_t u = 0; u < y.opens.size(); ++u)
    sections[u] = (int)tuples[u].size();
  std::map<std::pair<int, int>, std::vector<int>> res;
  for (int u = 0; u < (int)y.opens.size(); ++u)
    for (int v = 0; v < (int)y.opens.size(); ++v) {
      if (u == v || !subset_of(y.opens[v], y.opens[u])) continue;
      std::vector<int> keep;
      for (size_t i = 0; i < node_sets[u].size(); ++i)
        if (subset_of(d.nodes[node_sets[u][i]], y.opens[v]))
          keep.push_back((int)i);
      std::vector<int> tbl;
      for (const auto& t : tuples[u]) {
        std::vector<int> sub;
        for (int i : keep) sub.push_back(t[i]);
        auto it = std::find(tuples[v].begin(), tuples[v].end(), sub);
        if (it == tuples[v].end())
          throw internal_check("tuple restriction missing", {u, v});
        tbl.push_back((int)(it - tuples[v].begin()));
      }
      res[{u, v}] = std::move(tbl);
    }
  return validate_sheaf(y, std::move(sections), std::move(res));
}

FiniteSheaf sheaf_with_stalks(const FiniteSpace& y,
                              const std::vector<int>& point_stalk_sizes) {
  if ((int)point_stalk_sizes.size() != y.points)
    throw parse_error("stalk sizes must be given per point");
  StalkDiagram d = diagram_of(y);
  d.sizes.assign(d.nodes.size(), 1);
  for (size_t i = 0; i < d.nodes.size(); ++i) {
    int sz = -1;
    for (int p = 0; p < y.points; ++p)
      if (y.min_open[p] == d.nodes[i]) {
        if (sz >= 0 && sz != point_stalk_sizes[p])
          throw parse_error("points sharing a minimal open need equal stalks");
        sz = point_stalk_sizes[p];
      }
    d.sizes[i] = sz;
  }
  for (size_t i = 0; i < d.nodes.size(); ++i)
    for (size_t j = 0; j < d.nodes.size(); ++j) {
      if (i == j || !subset_of(d.nodes[j], d.nodes[i])) continue;
      if (d.sizes[i] != d.sizes[j])
        throw parse_error("identity transitions need equal stalk sizes");
      std::vector<int> id(d.sizes[i]);
      for (int s = 0; s < d.sizes[i]; ++s) id[s] = s;
      d.maps[{(int)i, (int)j}] = std::move(id);
    }
  return sheaf_from_stalks(y, d);
}

FiniteSheaf constant_sheaf(const FiniteSpace& y, int stalk) {
  return sheaf_with_stalks(y, std::vector<int>(y.points, stalk));
}

}  // namespace skewlat
