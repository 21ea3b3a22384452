#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "skewlat/json_io.hpp"

using namespace skewlat;
using namespace fixtures;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  const char* bin = std::getenv("SKEWLAT_BIN");
  REQUIRE(bin != nullptr);
  std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

fs::path work_dir() {
  fs::path dir = fs::temp_directory_path() / "skewlat_cli_test";
  fs::create_directories(dir);
  return dir;
}

fs::path write_json(const std::string& name, const Json& j) {
  fs::path p = work_dir() / name;
  std::ofstream out(p);
  out << j.dump(2) << "\n";
  return p;
}

fs::path write_text(const std::string& name, const std::string& text) {
  fs::path p = work_dir() / name;
  std::ofstream out(p);
  out << text;
  return p;
}

}  // namespace

TEST_CASE("validate: valid lattice exits 0, bad json 2, broken table 1") {
  fs::path good = write_json("chain3.json", lattice_to_json(chain3()));
  CHECK(run("validate " + good.string()).exit_code == 0);

  fs::path bad = write_text("broken.json", "{ not json");
  CHECK(run("validate " + bad.string()).exit_code == 2);

  Json j = lattice_to_json(chain3());
  j["join"][0][1] = 0;  // breaks absorption
  fs::path invalid = write_json("invalid.json", j);
  CHECK(run("validate " + invalid.string()).exit_code == 1);

  // A sheaf with a gluing defect is a checked mathematical failure too.
  Json sh = sheaf_to_json(sheaf_with_stalks(front_topology(disc2()), {2, 2}));
  sh["sections"][3] = Json::array({0, 1, 2});
  sh["restrict"]["3,0"] = Json::array({0, 0, 0});
  sh["restrict"]["3,1"] = Json::array({0, 0, 1});
  sh["restrict"]["3,2"] = Json::array({0, 1, 0});
  fs::path badsheaf = write_json("badsheaf.json", sh);
  CHECK(run("validate " + badsheaf.string()).exit_code == 1);
}

TEST_CASE("analyze emits the property report and D-classes") {
  fs::path p = write_json("p22.json", skew_to_json(p22()));
  RunResult r = run("analyze --json " + p.string());
  CHECK(r.exit_code == 0);
  Json cert = Json::parse(r.out);
  CHECK(cert["report"]["properties"]["ncframe"] == true);
  CHECK(cert["report"]["properties"]["left_handed"] == true);
  std::vector<size_t> sizes;
  for (const auto& c : cert["report"]["d_classes"]) sizes.push_back(c.size());
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<size_t>{1, 2, 2, 4});

  fs::path lat = write_json("chain3b.json", lattice_to_json(chain3()));
  Json lcert = Json::parse(run("analyze --json " + lat.string()).out);
  CHECK(lcert["report"]["properties"]["symmetric"] == true);
  CHECK(lcert["report"]["properties"]["right_handed"] == true);
}

TEST_CASE("dualize NC5 writes the base, sheaf, and section map") {
  fs::path dir = work_dir() / "dual";
  fs::remove_all(dir);
  fs::path p = write_json("nc5.json", skew_to_json(nc5()));
  RunResult r = run("dualize --json --out " + dir.string() + " " + p.string());
  CHECK(r.exit_code == 0);
  Json cert = Json::parse(r.out);
  CHECK(cert["report"]["spatial"] == true);
  CHECK(cert["report"]["shadow_iso"] == true);
  CHECK(cert["report"]["points"] == 2);
  CHECK(cert["report"]["stalks"] == Json::array({1, 2}));
  CHECK(fs::exists(dir / "certificate.json"));

  // Every emitted structure file re-validates.
  CHECK(run("validate " + (dir / "nc5.base.json").string()).exit_code == 0);
  CHECK(run("validate " + (dir / "nc5.sheaf.json").string()).exit_code == 0);
  FiniteSpace base = space_from_json(load_json_file((dir / "nc5.base.json").string()));
  CHECK(spaces_homeomorphic(base, sier()));
}

TEST_CASE("dualize rejects right-handed input with exit 1") {
  FiniteSkewLattice rh = nc5();
  // Mirror by exchanging the argument order in both tables.
  SqTable mt(rh.n), jt(rh.n);
  for (int x = 0; x < rh.n; ++x)
    for (int y = 0; y < rh.n; ++y) {
      mt.at(x, y) = rh.meet_of(y, x);
      jt.at(x, y) = rh.join_of(y, x);
    }
  fs::path p = write_json("nc5_mirror.json",
                          skew_to_json(validate_skew(mt, jt, rh.zero)));
  CHECK(run("dualize " + p.string()).exit_code == 1);
}

TEST_CASE("realize builds H and the result roundtrips") {
  fs::path dir = work_dir() / "real";
  fs::remove_all(dir);
  FiniteSpace y = sier();
  fs::path sp = write_json("sier.json", space_to_json(y));
  fs::path sh = write_json(
      "sier_sheaf.json",
      sheaf_to_json(sheaf_with_stalks(front_topology(y), {1, 2})));
  RunResult r = run("realize --out " + dir.string() + " " + sp.string() + " " +
                    sh.string());
  CHECK(r.exit_code == 0);
  fs::path nf = dir / "sier.ncframe.json";
  CHECK(run("validate " + nf.string()).exit_code == 0);
  FiniteSkewLattice realized = skew_from_json(load_json_file(nf.string()));
  CHECK(skew_isomorphic(realized, nc5()));

  CHECK(run("roundtrip " + nf.string()).exit_code == 0);
  CHECK(run("roundtrip " + sp.string() + " " + sh.string()).exit_code == 0);
}

TEST_CASE("realize then dualize returns an isomorphic file") {
  fs::path dir = work_dir() / "cycle";
  fs::remove_all(dir);
  fs::path p = write_json("nc5cycle.json", skew_to_json(nc5()));
  CHECK(run("dualize --out " + dir.string() + " " + p.string()).exit_code == 0);
  CHECK(run("realize --out " + dir.string() + " " +
            (dir / "nc5cycle.base.json").string() + " " +
            (dir / "nc5cycle.sheaf.json").string())
            .exit_code == 0);
  FiniteSkewLattice again = skew_from_json(
      load_json_file((dir / "nc5cycle.base.ncframe.json").string()));
  CHECK(skew_isomorphic(again, nc5()));
}

TEST_CASE("nuclei on a lattice and on a space") {
  fs::path lat = write_json("chain3n.json", lattice_to_json(chain3()));
  Json cert = Json::parse(run("nuclei --json " + lat.string()).out);
  CHECK(cert["report"]["count"] == 4);
  CHECK(cert["report"]["boolean"] == true);
  CHECK(cert["report"]["points"] == 2);

  fs::path sp = write_json("sier_n.json", space_to_json(sier()));
  Json scert = Json::parse(run("nuclei --json " + sp.string()).out);
  CHECK(scert["report"]["count"] == 4);
  CHECK(scert["report"]["front_iso"] == true);
}

TEST_CASE("separate finds a morphism for the NC5 tops") {
  fs::path p = write_json("nc5sep.json", skew_to_json(nc5()));
  Json cert = Json::parse(run("separate --json " + p.string() + " 3 4").out);
  CHECK(cert["report"]["separated"] == true);
  CHECK(cert["report"]["q"][3] == 1);
  CHECK(cert["report"]["q"][4] == 2);
  CHECK(run("separate " + p.string() + " 0 1").exit_code == 2);  // not D-related
}

TEST_CASE("spectrum of bool2 is the discrete pair") {
  fs::path p = write_json("bool2.json", lattice_to_json(bool2()));
  Json cert = Json::parse(run("spectrum --json " + p.string()).out);
  CHECK(cert["report"]["points"] == 2);
  CHECK(cert["report"]["space"]["opens"].size() == 4);
}

TEST_CASE("certificates are deterministic given the same seed") {
  fs::path p = write_json("p22det.json", skew_to_json(p22()));
  Json a = Json::parse(run("analyze --json --seed 5 " + p.string()).out);
  Json b = Json::parse(run("analyze --json --seed 5 " + p.string()).out);
  CHECK(a["verdicts"] == b["verdicts"]);
  CHECK(a["report"] == b["report"]);
}

TEST_CASE("serialization round trips preserve the structures") {
  for (const FiniteSkewLattice& s : {nc5(), p22(), primitive(3)}) {
    FiniteSkewLattice back = skew_from_json(skew_to_json(s));
    CHECK(back.meet == s.meet);
    CHECK(back.join == s.join);
    CHECK(back.zero == s.zero);
    CHECK(back.labels == s.labels);
  }
  for (const FiniteLattice& l : {chain3(), bool2(), m3()}) {
    FiniteLattice back = lattice_from_json(lattice_to_json(l));
    CHECK(back.meet == l.meet);
    CHECK(back.join == l.join);
  }
  for (const FiniteSpace& y : {sier(), disc2(), chain3_space()}) {
    CHECK(space_from_json(space_to_json(y)) == y);
    FiniteSheaf e = sheaf_with_stalks(front_topology(y),
                                      std::vector<int>(y.points, 2));
    FiniteSheaf eb = sheaf_from_json(sheaf_to_json(e));
    CHECK(eb.space == e.space);
    CHECK(eb.sections == e.sections);
    CHECK(eb.res == e.res);
  }
  Nucleus nu{{0, 1, 2}};
  CHECK(nucleus_from_json(nucleus_to_json(nu), 3).table == nu.table);
}
