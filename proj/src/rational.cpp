#include "ae/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace ae {

namespace {

bool is_integer_token(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rat rat_parse(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) {
    if (!is_integer_token(text)) {
      throw std::invalid_argument("not a rational literal: \"" + text + "\"");
    }
    Rat r(text);
    r.canonicalize();
    return r;
  }
  const std::string num = text.substr(0, slash);
  const std::string den = text.substr(slash + 1);
  if (!is_integer_token(num) || !is_integer_token(den) || den[0] == '-') {
    throw std::invalid_argument("not a rational literal: \"" + text + "\"");
  }
  Rat r(text);
  if (r.get_den() == 0) {
    throw std::invalid_argument("zero denominator: \"" + text + "\"");
  }
  r.canonicalize();
  return r;
}

std::string rat_str(const Rat& r) {
  // mpq_class keeps values canonical (lowest terms, positive denominator)
  // as long as canonicalize() ran after construction from strings.
  return r.get_str();
}

}  // namespace ae
