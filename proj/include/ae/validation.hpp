#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ae {

// One violated axiom, with the witnessing indices baked into `detail`.
struct Violation {
  std::string code;    // stable machine name, e.g. "triangle"
  std::string detail;  // human-readable witness, e.g. "(a,b,c): 3 > 1 + 1"
};

// Result of a validator. Empty means valid.
struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  void add(std::string code, std::string detail);
  // Appends another report, prefixing each detail with "<context>: ".
  void merge(const ValidationReport& other, const std::string& context = {});
  bool has(std::string_view code) const;
  // First few violations, one per line. For error messages and logs.
  std::string summary(std::size_t limit = 8) const;
};

}  // namespace ae
