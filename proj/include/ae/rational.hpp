#pragma once

#include <gmpxx.h>

#include <string>

namespace ae {

// Exact rational scalar. All arithmetic in the library is exact; there are
// no tolerances anywhere.
using Rat = mpq_class;

// Parses "p", "-p" or "p/q" (q > 0, base 10). Throws std::invalid_argument
// on anything else, including "p/0".
Rat rat_parse(const std::string& text);

// Canonical lowest-terms rendering: "p" when the denominator is 1,
// otherwise "p/q".
std::string rat_str(const Rat& r);

}  // namespace ae
