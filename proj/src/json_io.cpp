#include "skewlat/json_io.hpp"

#include <fstream>
#include <sstream>

namespace skewlat {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SqTable table_field(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array())
    throw parse_error(std::string("missing table field: ") + key);
  std::vector<std::vector<int>> rows;
  for (const auto& row : j[key]) {
    if (!row.is_array()) throw parse_error("table rows must be arrays");
    rows.push_back(row.get<std::vector<int>>());
  }
  return table_from_rows(rows);
}

std::vector<std::string> labels_field(const Json& j, int n) {
  if (!j.contains("labels")) return {};
  auto labels = j["labels"].get<std::vector<std::string>>();
  if ((int)labels.size() != n) throw parse_error("labels size mismatch");
  return labels;
}

Json table_json(const SqTable& t) {
  Json rows = Json::array();
  for (int i = 0; i < t.n; ++i) {
    Json row = Json::array();
    for (int j = 0; j < t.n; ++j) row.push_back(t.at(i, j));
    rows.push_back(row);
  }
  return rows;
}

struct SheafParts {
  FiniteSpace space;
  std::vector<int> sections;
  std::map<std::pair<int, int>, std::vector<int>> res;
};

SheafParts sheaf_parts(const Json& j) {
  if (json_kind(j) != "sheaf") throw parse_error("expected kind \"sheaf\"");
  if (!j.contains("space")) throw parse_error("sheaf needs a space field");
  SheafParts parts;
  parts.space = space_from_json(j["space"]);
  if (!j.contains("sections") || !j["sections"].is_array())
    throw parse_error("sheaf needs a sections array");
  std::vector<std::map<int, int>> dense(parts.space.opens.size());
  int u = 0;
  for (const auto& ids : j["sections"]) {
    if (u >= (int)parts.space.opens.size())
      throw parse_error("more section lists than opens");
    auto raw = ids.get<std::vector<int>>();
    for (int i = 0; i < (int)raw.size(); ++i) {
      if (dense[u].count(raw[i])) throw parse_error("duplicate section id");
      dense[u][raw[i]] = i;
    }
    parts.sections.push_back((int)raw.size());
    ++u;
  }
  if (u != (int)parts.space.opens.size())
    throw parse_error("fewer section lists than opens");
  if (j.contains("restrict")) {
    for (const auto& [key, tbl] : j["restrict"].items()) {
      auto comma = key.find(',');
      if (comma == std::string::npos)
        throw parse_error("restrict keys must be \"U,V\"");
      int from, to;
      try {
        from = std::stoi(key.substr(0, comma));
        to = std::stoi(key.substr(comma + 1));
      } catch (...) {
        throw parse_error("restrict keys must be \"U,V\" integer pairs");
      }
      if (from < 0 || from >= (int)parts.space.opens.size() || to < 0 ||
          to >= (int)parts.space.opens.size())
        throw parse_error("restrict key out of range");
      std::vector<int> values = tbl.get<std::vector<int>>();
      for (int& v : values) {
        auto it = dense[to].find(v);
        if (it == dense[to].end())
          throw parse_error("restriction hits an unknown section id");
        v = it->second;
      }
      parts.res[{from, to}] = std::move(values);
    }
  }
  return parts;
}

}  // namespace

Json load_json_file(const std::string& path) {
  std::string text = read_file(path);
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw parse_error("malformed JSON in " + path);
  return j;
}

std::string file_digest(const std::string& path) {
  std::string text = read_file(path);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

std::string json_kind(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw parse_error("input must be an object with a \"kind\" field");
  return j["kind"].get<std::string>();
}

FiniteLattice lattice_from_json(const Json& j) {
  if (json_kind(j) != "lattice") throw parse_error("expected kind \"lattice\"");
  SqTable meet = table_field(j, "meet");
  SqTable join = table_field(j, "join");
  if (j.contains("n") && j["n"].get<int>() != meet.n)
    throw parse_error("n does not match the table size");
  return validate_lattice(meet, join, labels_field(j, meet.n));
}

FiniteSkewLattice skew_from_json(const Json& j) {
  std::string kind = json_kind(j);
  if (kind == "lattice") {
    FiniteLattice l = lattice_from_json(j);
    return validate_skew(l.meet, l.join, l.bottom, l.labels);
  }
  if (kind != "skew_lattice")
    throw parse_error("expected kind \"skew_lattice\"");
  SqTable meet = table_field(j, "meet");
  SqTable join = table_field(j, "join");
  if (j.contains("n") && j["n"].get<int>() != meet.n)
    throw parse_error("n does not match the table size");
  std::optional<int> zero;
  if (j.contains("zero") && !j["zero"].is_null()) zero = j["zero"].get<int>();
  return validate_skew(meet, join, zero, labels_field(j, meet.n));
}

FiniteSpace space_from_json(const Json& j) {
  if (json_kind(j) != "space") throw parse_error("expected kind \"space\"");
  if (!j.contains("points")) throw parse_error("space needs a point count");
  int points = j["points"].get<int>();
  if (!j.contains("opens") || !j["opens"].is_array())
    throw parse_error("space needs an opens array");
  std::vector<std::vector<int>> opens;
  for (const auto& o : j["opens"]) opens.push_back(o.get<std::vector<int>>());
  return space_from_lists(points, opens);
}

FiniteSheaf sheaf_from_json(const Json& j) {
  SheafParts p = sheaf_parts(j);
  return validate_sheaf(std::move(p.space), std::move(p.sections),
                        std::move(p.res));
}

FiniteSheaf presheaf_from_json(const Json& j) {
  SheafParts p = sheaf_parts(j);
  return validate_presheaf(std::move(p.space), std::move(p.sections),
                           std::move(p.res));
}

Nucleus nucleus_from_json(const Json& j, int lattice_size) {
  if (!j.is_object() || !j.contains("table"))
    throw parse_error("nucleus needs a table field");
  Nucleus n{j["table"].get<std::vector<int>>()};
  if ((int)n.table.size() != lattice_size)
    throw parse_error("nucleus table size mismatch");
  return n;
}

Json lattice_to_json(const FiniteLattice& l) {
  Json j;
  j["kind"] = "lattice";
  j["n"] = l.n;
  j["meet"] = table_json(l.meet);
  j["join"] = table_json(l.join);
  if (!l.labels.empty()) j["labels"] = l.labels;
  return j;
}

Json skew_to_json(const FiniteSkewLattice& s) {
  Json j;
  j["kind"] = "skew_lattice";
  j["n"] = s.n;
  j["meet"] = table_json(s.meet);
  j["join"] = table_json(s.join);
  if (s.zero) j["zero"] = *s.zero;
  if (!s.labels.empty()) j["labels"] = s.labels;
  return j;
}

Json space_to_json(const FiniteSpace& y) {
  Json j;
  j["kind"] = "space";
  j["points"] = y.points;
  Json opens = Json::array();
  for (Mask m : y.opens) opens.push_back(mask_to_list(m));
  j["opens"] = opens;
  return j;
}

Json sheaf_to_json(const FiniteSheaf& e) {
  Json j;
  j["kind"] = "sheaf";
  j["space"] = space_to_json(e.space);
  Json secs = Json::array();
  for (int c : e.sections) {
    Json ids = Json::array();
    for (int i = 0; i < c; ++i) ids.push_back(i);
    secs.push_back(ids);
  }
  j["sections"] = secs;
  Json res = Json::object();
  for (const auto& [key, tbl] : e.res)
    res[std::to_string(key.first) + "," + std::to_string(key.second)] = tbl;
  j["restrict"] = res;
  return j;
}

Json nucleus_to_json(const Nucleus& n) {
  Json j;
  j["table"] = n.table;
  return j;
}

Json check_to_json(const CheckResult& c) {
  Json j;
  j["ok"] = c.ok;
  if (!c.ok) {
    j["law"] = c.law;
    j["witness"] = c.witness;
  }
  return j;
}

Json report_to_json(const PropertyReport& r) {
  Json j;
  j["left_handed"] = r.left_handed;
  j["right_handed"] = r.right_handed;
  j["strongly_distributive"] = r.strongly_distributive;
  j["symmetric"] = r.symmetric;
  j["distributive"] = r.distributive;
  j["normal"] = r.normal;
  j["has_zero"] = r.has_zero;
  j["join_complete"] = r.join_complete;
  j["ncframe"] = r.ncframe;
  j["has_top_class"] = r.has_top_class;
  j["sampled"] = r.sampled;
  Json w = Json::object();
  for (const auto& [law, tuple] : r.witnesses) w[law] = tuple;
  j["witnesses"] = w;
  return j;
}

Json morphism_to_json(const TableMorphism& m) {
  Json j;
  j["source_n"] = m.source_n;
  j["target_n"] = m.target_n;
  j["map"] = m.map;
  Json laws = Json::array();
  if (m.checked & law_meet) laws.push_back("meet");
  if (m.checked & law_join) laws.push_back("join");
  if (m.checked & law_zero) laws.push_back("0");
  if (m.checked & law_one) laws.push_back("1");
  if (m.checked & law_proper) laws.push_back("proper");
  j["laws"] = laws;
  return j;
}

Json Certificate::to_json() const {
  Json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command;
  Json ins = Json::array();
  for (const auto& [path, digest] : inputs) {
    Json in;
    in["path"] = path;
    in["digest"] = digest;
    ins.push_back(in);
  }
  j["inputs"] = ins;
  j["seed"] = seed;
  Json vs = Json::array();
  for (const auto& [name, check] : verdicts) {
    Json v = check_to_json(check);
    v["name"] = name;
    vs.push_back(v);
  }
  j["verdicts"] = vs;
  if (!report.is_null()) j["report"] = report;
  j["timing_ms"] = ms;
  return j;
}

bool Certificate::all_ok() const {
  for (const auto& [name, check] : verdicts)
    if (!check.ok) return false;
  return true;
}

}  // namespace skewlat
