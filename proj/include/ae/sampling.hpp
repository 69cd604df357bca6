#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ae/molecule.hpp"

namespace ae {

// Deterministic seeded molecule generator: support <= 4, coefficients drawn
// from {±1, ±2, ±1/2}, zero sum by construction. Identical seeds produce
// identical sequences. Spaces too small for a nonzero molecule yield zero
// molecules.
std::vector<Molecule> sample_molecules(const BasedSpace& b, std::size_t count,
                                       std::uint64_t seed);

}  // namespace ae
