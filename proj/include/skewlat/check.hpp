#ifndef SKEWLAT_CHECK_HPP
#define SKEWLAT_CHECK_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace skewlat {

// Outcome of a single named check. `law` and `witness` are filled on failure;
// the witness is the first offending tuple in enumeration order.
struct CheckResult {
  bool ok = true;
  std::string law;
  std::vector<int> witness;

  static CheckResult pass() { return CheckResult{}; }
  static CheckResult fail(std::string law, std::vector<int> witness) {
    return CheckResult{false, std::move(law), std::move(witness)};
  }
  explicit operator bool() const { return ok; }
};

// Single exception type for all checked failures. `code` is a stable
// machine-readable tag (AxiomViolation, LawViolation, ParseError, ...).
class Error : public std::runtime_error {
 public:
  Error(std::string code, std::string message, std::string law = {},
        std::vector<int> witness = {})
      : std::runtime_error(code + ": " + message),
        code(std::move(code)),
        law(std::move(law)),
        witness(std::move(witness)) {}

  std::string code;
  std::string law;
  std::vector<int> witness;
};

inline Error axiom_violation(const std::string& law, std::vector<int> witness,
                             const std::string& detail = {}) {
  return Error("AxiomViolation", detail.empty() ? law : detail, law,
               std::move(witness));
}

inline Error law_violation(const std::string& law, std::vector<int> witness) {
  return Error("LawViolation", law, law, std::move(witness));
}

inline Error parse_error(const std::string& message) {
  return Error("ParseError", message);
}

inline Error size_limit(const std::string& message) {
  return Error("SizeLimit", message);
}

// Unreachable-by-theory conditions (asserted theorems). Reaching one is a bug.
inline Error internal_check(const std::string& message,
                            std::vector<int> witness = {}) {
  return Error("InternalCheck", message, {}, std::move(witness));
}

}  // namespace skewlat

#endif
