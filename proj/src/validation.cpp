#include "ae/validation.hpp"

#include <algorithm>
#include <sstream>

namespace ae {

void ValidationReport::add(std::string code, std::string detail) {
  violations.push_back({std::move(code), std::move(detail)});
}

void ValidationReport::merge(const ValidationReport& other,
                             const std::string& context) {
  for (const auto& v : other.violations) {
    if (context.empty()) {
      violations.push_back(v);
    } else {
      violations.push_back({v.code, context + ": " + v.detail});
    }
  }
}

bool ValidationReport::has(std::string_view code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

std::string ValidationReport::summary(std::size_t limit) const {
  std::ostringstream out;
  if (ok()) {
    out << "ok";
    return out.str();
  }
  out << violations.size() << " violation(s)";
  const std::size_t shown = std::min(limit, violations.size());
  for (std::size_t i = 0; i < shown; ++i) {
    out << "\n  [" << violations[i].code << "] " << violations[i].detail;
  }
  if (shown < violations.size()) {
    out << "\n  ... and " << (violations.size() - shown) << " more";
  }
  return out.str();
}

}  // namespace ae
