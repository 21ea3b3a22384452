#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "skewlat/assembly.hpp"
#include "skewlat/duality.hpp"
#include "skewlat/json_io.hpp"

namespace fs = std::filesystem;
using namespace skewlat;

namespace {

struct Options {
  std::uint64_t seed = 0;
  int cap = 8;
  std::string out;
  bool json = false;
};

int exit_code_for(const Error& e) {
  static const std::set<std::string> input_errors{
      "ParseError", "SizeLimit", "NotSameClass", "PointMismatch",
      "NoSuchClass"};
  return input_errors.count(e.code) ? 2 : 1;
}

void write_file(const fs::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

std::string stem_of(const std::string& path) {
  return fs::path(path).stem().string();
}

int finish(Certificate& cert, const Options& opt,
           std::chrono::steady_clock::time_point start) {
  cert.seed = opt.seed;
  cert.ms = std::chrono::duration<double, std::milli>(
                std::chrono::steady_clock::now() - start)
                .count();
  if (!opt.out.empty()) {
    fs::create_directories(opt.out);
    write_file(fs::path(opt.out) / "certificate.json", cert.to_json());
  }
  if (opt.json) {
    std::cout << cert.to_json().dump(2) << "\n";
  } else {
    for (const auto& [name, check] : cert.verdicts) {
      if (check.ok) {
        std::cout << "ok   " << name << "\n";
      } else {
        std::cout << "FAIL " << name << "  law=" << check.law << " witness=[";
        for (size_t i = 0; i < check.witness.size(); ++i)
          std::cout << (i ? "," : "") << check.witness[i];
        std::cout << "]\n";
      }
    }
    if (!cert.report.is_null())
      std::cout << cert.report.dump(2) << "\n";
  }
  return cert.all_ok() ? 0 : 1;
}

fs::path out_path(const Options& opt, const std::string& name) {
  fs::path dir = opt.out.empty() ? fs::path(".") : fs::path(opt.out);
  fs::create_directories(dir);
  return dir / name;
}

int cmd_validate(const std::string& file, const Options& opt) {
  auto start = std::chrono::steady_clock::now();
  Certificate cert;
  cert.command = "validate";
  cert.inputs = {{file, file_digest(file)}};
  Json j = load_json_file(file);
  std::string kind = json_kind(j);
  try {
    if (kind == "lattice") {
      FiniteLattice l = lattice_from_json(j);
      cert.verdicts.push_back({"validates", CheckResult::pass()});
      cert.verdicts.push_back({"distributive", is_frame(l)});
    } else if (kind == "skew_lattice") {
      skew_from_json(j);
      cert.verdicts.push_back({"validates", CheckResult::pass()});
    } else if (kind == "space") {
      space_from_json(j);
      cert.verdicts.push_back({"validates", CheckResult::pass()});
    } else if (kind == "sheaf") {
      sheaf_from_json(j);
      cert.verdicts.push_back({"validates", CheckResult::pass()});
    } else {
      throw parse_error("unknown kind: " + kind);
    }
  } catch (const Error& e) {
    if (e.code == "ParseError" || e.code == "SizeLimit") throw;
    cert.verdicts.push_back(
        {"validates", CheckResult::fail(e.law.empty() ? e.code : e.law,
                                        e.witness)});
  }
  return finish(cert, opt, start);
}

int cmd_analyze(const std::string& file, const Options& opt) {
  auto start = std::chrono::steady_clock::now();
  Certificate cert;
  cert.command = "analyze";
  cert.inputs = {{file, file_digest(file)}};
  FiniteSkewLattice s = skew_from_json(load_json_file(file));
  ClassifyOptions copt;
  copt.seed = opt.seed;
  PropertyReport rep = classify(s, copt);
  Shadow sh = shadow(s);

  cert.verdicts.push_back({"validates", CheckResult::pass()});
  cert.report = Json::object();
  cert.report["properties"] = report_to_json(rep);
  Json classes = Json::array();
  for (const auto& c : sh.d.classes) classes.push_back(c);
  cert.report["d_classes"] = classes;
  cert.report["shadow"] = lattice_to_json(sh.lattice);
  cert.report["projection"] = sh.projection.map;
  return finish(cert, opt, start);
}

int cmd_dualize(const std::string& file, const Options& opt) {
  auto start = std::chrono::steady_clock::now();
  Certificate cert;
  cert.command = "dualize";
  cert.inputs = {{file, file_digest(file)}};
  FiniteSkewLattice s = skew_from_json(load_json_file(file));
  SigmaResult sigma = unit_sigma(s);

  std::string stem = stem_of(file);
  write_file(out_path(opt, stem + ".base.json"), space_to_json(sigma.ga.base));
  write_file(out_path(opt, stem + ".sheaf.json"), sheaf_to_json(sigma.ga.sheaf));
  Json secmap = Json::object();
  secmap["kind"] = "section_map";
  Json entries = Json::array();
  for (int x = 0; x < s.n; ++x) {
    Json e;
    e["element"] = x;
    e["open"] = mask_to_list(sigma.ga.u_of[x]);
    e["section"] = sigma.ga.section_of[x];
    entries.push_back(e);
  }
  secmap["entries"] = entries;
  write_file(out_path(opt, stem + ".sections.json"), secmap);

  cert.verdicts.push_back({"left_handed_ncframe", CheckResult::pass()});
  cert.verdicts.push_back(
      {"sigma_bijective", sigma.bijective
                              ? CheckResult::pass()
                              : CheckResult::fail("sigma-not-bijective", {})});
  bool shadow_iso = lattice_isomorphic(sigma.ga.sh.lattice,
                                       opens_lattice(sigma.ga.base).lat());
  cert.report = Json::object();
  cert.report["spatial"] = sigma.bijective;
  cert.report["shadow_iso"] = shadow_iso;
  cert.report["sigma_bijective"] = sigma.bijective;
  cert.report["points"] = (int)sigma.ga.points.size();
  cert.report["stalks"] = sigma.ga.stalk_sizes;
  cert.report["sigma"] = sigma.table;
  return finish(cert, opt, start);
}

int cmd_realize(const std::string& space_file, const std::string& sheaf_file,
                const Options& opt) {
  auto start = std::chrono::steady_clock::now();
  Certificate cert;
  cert.command = "realize";
  cert.inputs = {{space_file, file_digest(space_file)},
                 {sheaf_file, file_digest(sheaf_file)}};
  FiniteSpace y = space_from_json(load_json_file(space_file));
  FiniteSheaf e = sheaf_from_json(load_json_file(sheaf_file));
  HContext h = make_H(y, e);

  write_file(out_path(opt, stem_of(space_file) + ".ncframe.json"),
             skew_to_json(h.h.skew));
  cert.verdicts.push_back({"realized", CheckResult::pass()});
  cert.report = Json::object();
  cert.report["elements"] = h.h.skew.n;
  cert.report["provenance"] = h.h.provenance;
  return finish(cert, opt, start);
}

int cmd_roundtrip(const std::vector<std::string>& files, const Options& opt) {
  auto start = std::chrono::steady_clock::now();
  Certificate cert;
  cert.command = "roundtrip";
  for (const std::string& f : files) cert.inputs.push_back({f, file_digest(f)});

  cert.report = Json::object();
  if (files.size() == 1) {
    FiniteSkewLattice s = skew_from_json(load_json_file(files[0]));
    SigmaResult sigma = unit_sigma(s);
    cert.verdicts.push_back(
        {"sigma_isomorphism",
         sigma.bijective ? CheckResult::pass()
                         : CheckResult::fail("IsoFailure", {s.n, sigma.hga.h.skew.n})});
    cert.report["sigma"] = sigma.table;
  } else {
    FiniteSpace y = space_from_json(load_json_file(files[0]));
    FiniteSheaf e = sheaf_from_json(load_json_file(files[1]));
    HContext h = make_H(y, e);
    CounitResult c = counit(h);
    cert.verdicts.push_back(
        {"counit_isomorphism",
         c.iso ? CheckResult::pass() : CheckResult::fail("IsoFailure", {})});
    cert.report["f"] = c.m.f;
    Json lam = Json::object();
    for (const auto& [key, sid] : c.m.lambda)
      lam[std::to_string(key.first) + "," + std::to_string(key.second)] = sid;
    cert.report["lambda"] = lam;
  }
  return finish(cert, opt, start);
}

int cmd_nuclei(const std::string& file, const Options& opt) {
  auto start = std::chrono::steady_clock::now();
  Certificate cert;
  cert.command = "nuclei";
  cert.inputs = {{file, file_digest(file)}};
  Json j = load_json_file(file);
  cert.report = Json::object();
  if (json_kind(j) == "space") {
    FiniteSpace y = space_from_json(j);
    DissolutionReport r = dissolution_checks(y, opt.cap);
    cert.verdicts.push_back(
        {"count_is_2^points",
         r.count_matches ? CheckResult::pass()
                         : CheckResult::fail("count", {r.nucleus_count})});
    cert.verdicts.push_back(
        {"assembly_boolean",
         r.boolean ? CheckResult::pass() : CheckResult::fail("boolean", {})});
    cert.verdicts.push_back(
        {"assembly_is_envelope", r.envelope_iso
                                     ? CheckResult::pass()
                                     : CheckResult::fail("envelope", {})});
    cert.verdicts.push_back(
        {"points_of_assembly_front",
         r.front_iso ? CheckResult::pass() : CheckResult::fail("front", {})});
    cert.report["count"] = r.nucleus_count;
    cert.report["boolean"] = r.boolean;
    cert.report["points"] = r.points;
    cert.report["front_iso"] = r.front_iso;
  } else {
    FiniteFrame l = FiniteFrame::certify(lattice_from_json(j));
    Assembly a = enumerate_nuclei(l, opt.cap);
    int pts = (int)points(l).size();
    bool boolean = is_boolean(a.lattice.lat());
    bool count_ok = (int)a.nuclei.size() == (1 << pts);
    BooleanEnvelope env = boolean_envelope(l);
    bool env_iso = lattice_isomorphic(a.lattice.lat(), env.algebra);
    Spectrum pt_asm = spectrum(a.lattice.lat());
    bool front_iso =
        spaces_homeomorphic(pt_asm.space, front_topology(spectrum(l.lat()).space));
    cert.verdicts.push_back(
        {"count_is_2^points", count_ok ? CheckResult::pass()
                                       : CheckResult::fail("count", {(int)a.nuclei.size()})});
    cert.verdicts.push_back(
        {"assembly_boolean",
         boolean ? CheckResult::pass() : CheckResult::fail("boolean", {})});
    cert.verdicts.push_back(
        {"assembly_is_envelope",
         env_iso ? CheckResult::pass() : CheckResult::fail("envelope", {})});
    cert.report["count"] = (int)a.nuclei.size();
    cert.report["boolean"] = boolean;
    cert.report["points"] = pts;
    cert.report["front_iso"] = front_iso;
    Json tables = Json::array();
    for (const Nucleus& nu : a.nuclei) tables.push_back(nucleus_to_json(nu));
    cert.report["nuclei"] = tables;
  }
  return finish(cert, opt, start);
}

int cmd_separate(const std::string& file, int a, int b, const Options& opt) {
  auto start = std::chrono::steady_clock::now();
  Certificate cert;
  cert.command = "separate";
  cert.inputs = {{file, file_digest(file)}};
  FiniteSkewLattice s = skew_from_json(load_json_file(file));
  if (a < 0 || a >= s.n || b < 0 || b >= s.n)
    throw parse_error("element index out of range");
  auto r = separate(s, a, b);
  cert.report = Json::object();
  cert.report["separated"] = r.has_value();
  if (r) {
    cert.verdicts.push_back({"separated", CheckResult::pass()});
    cert.report["witness_point"] = r->witness_point;
    cert.report["q"] = r->q;
    cert.report["target"] = skew_to_json(r->target);
  } else {
    cert.verdicts.push_back(
        {"separated", CheckResult::fail("no-separating-point", {a, b})});
  }
  return finish(cert, opt, start);
}

int cmd_spectrum(const std::string& file, const Options& opt) {
  auto start = std::chrono::steady_clock::now();
  Certificate cert;
  cert.command = "spectrum";
  cert.inputs = {{file, file_digest(file)}};
  FiniteLattice l = lattice_from_json(load_json_file(file));
  Spectrum sp = spectrum(l);
  write_file(out_path(opt, stem_of(file) + ".spectrum.json"),
             space_to_json(sp.space));
  cert.verdicts.push_back({"spectrum", CheckResult::pass()});
  cert.report = Json::object();
  cert.report["space"] = space_to_json(sp.space);
  cert.report["points"] = sp.space.points;
  return finish(cert, opt, start);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite skew lattice and noncommutative frame workbench"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--seed", opt.seed, "seed for sampled suites");
  app.add_option("--cap", opt.cap, "size cap for nucleus enumeration");
  app.add_option("--out", opt.out, "output directory for emitted files");
  app.add_flag("--json", opt.json, "print the certificate as JSON");

  std::string file, file2;
  int ea = 0, eb = 0;

  CLI::App* validate = app.add_subcommand("validate", "validate a structure file");
  validate->add_option("file", file)->required();
  CLI::App* analyze = app.add_subcommand("analyze", "classify a skew lattice");
  analyze->add_option("file", file)->required();
  CLI::App* dualize = app.add_subcommand("dualize", "compute G of an ncframe");
  dualize->add_option("file", file)->required();
  CLI::App* realize = app.add_subcommand("realize", "compute H of a space and sheaf");
  realize->add_option("space", file)->required();
  realize->add_option("sheaf", file2)->required();
  CLI::App* roundtrip = app.add_subcommand("roundtrip", "unit/counit isomorphism check");
  roundtrip->add_option("file", file)->required();
  roundtrip->add_option("file2", file2);
  CLI::App* nuclei = app.add_subcommand("nuclei", "enumerate the frame of nuclei");
  nuclei->add_option("file", file)->required();
  CLI::App* separate_cmd = app.add_subcommand("separate", "separate two D-related elements");
  separate_cmd->add_option("file", file)->required();
  separate_cmd->add_option("a", ea)->required();
  separate_cmd->add_option("b", eb)->required();
  CLI::App* spectrum_cmd = app.add_subcommand("spectrum", "prime spectrum of a lattice");
  spectrum_cmd->add_option("file", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*validate) return cmd_validate(file, opt);
    if (*analyze) return cmd_analyze(file, opt);
    if (*dualize) return cmd_dualize(file, opt);
    if (*realize) return cmd_realize(file, file2, opt);
    if (*roundtrip) {
      std::vector<std::string> files{file};
      if (!file2.empty()) files.push_back(file2);
      return cmd_roundtrip(files, opt);
    }
    if (*nuclei) return cmd_nuclei(file, opt);
    if (*separate_cmd) return cmd_separate(file, ea, eb, opt);
    if (*spectrum_cmd) return cmd_spectrum(file, opt);
  } catch (const Error& e) {
    Json err;
    err["error"] = e.code;
    err["message"] = e.what();
    if (!e.law.empty()) err["law"] = e.law;
    if (!e.witness.empty()) err["witness"] = e.witness;
    std::cerr << err.dump(2) << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "{\"error\":\"Internal\",\"message\":\"" << e.what()
              << "\"}\n";
    return 1;
  }
  return 2;
}
