#ifndef SKEWLAT_JSON_IO_HPP
#define SKEWLAT_JSON_IO_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "skewlat/assembly.hpp"
#include "skewlat/lattice.hpp"
#include "skewlat/sheaf.hpp"
#include "skewlat/skew.hpp"
#include "skewlat/space.hpp"

namespace skewlat {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "skewlat";
inline constexpr const char* kToolVersion = "0.1.0";

Json load_json_file(const std::string& path);
std::string file_digest(const std::string& path);  // fnv-1a of the raw bytes

std::string json_kind(const Json& j);

FiniteLattice lattice_from_json(const Json& j);
FiniteSkewLattice skew_from_json(const Json& j);
FiniteSpace space_from_json(const Json& j);
FiniteSheaf sheaf_from_json(const Json& j);     // full sheaf validation
FiniteSheaf presheaf_from_json(const Json& j);  // functoriality only
Nucleus nucleus_from_json(const Json& j, int lattice_size);

Json lattice_to_json(const FiniteLattice& l);
Json skew_to_json(const FiniteSkewLattice& s);
Json space_to_json(const FiniteSpace& y);
Json sheaf_to_json(const FiniteSheaf& e);
Json nucleus_to_json(const Nucleus& n);
Json check_to_json(const CheckResult& c);
Json report_to_json(const PropertyReport& r);
Json morphism_to_json(const TableMorphism& m);

// Machine-readable run record; verdicts are deterministic given the same
// inputs and seed, timing is informational only.
struct Certificate {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, CheckResult>> verdicts;
  Json report;  // command-specific payload
  double ms = 0;

  Json to_json() const;
  bool all_ok() const;
};

}  // namespace skewlat

#endif
