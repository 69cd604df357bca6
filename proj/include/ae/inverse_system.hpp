#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ae/gspace.hpp"
#include "ae/molecule.hpp"
#include "ae/quotient.hpp"
#include "ae/rational.hpp"
#include "ae/validation.hpp"

namespace ae {

// One node of the index set: a family pseudometric plus a tube radius.
// radius == nullopt means the whole molecule space (infinity).
// (mu, r) <= (mu', r') iff mu <= mu' entrywise and r' <= r.
struct IndexEntry {
  std::size_t mu = 0;  // index into the closed family
  std::optional<Rat> radius;

  bool operator==(const IndexEntry& other) const = default;
};

// The inverse system of quotients of one G-space over a join-closed
// pseudometric family, with bonding maps between comparable quotients and
// cone maps from the base space. Every quotient carries its adjoined based
// space so tubes in molecule space are decidable.
struct InverseSystem {
  FiniteGSpace base;
  std::vector<std::string> names;    // family names, joins appended
  std::vector<FiniteMetric> family;  // join-closed, deduplicated
  std::vector<Quotient> quotients;   // aligned with family
  std::vector<BasedSpace> based;     // adjoined based quotient spaces
  std::vector<IndexEntry> entries;
  std::vector<std::vector<char>> mu_leq;  // cached entrywise order
  std::vector<std::vector<int>> bond_of;  // [coarse][fine] -> bonds index, -1 if incomparable
  std::vector<BondMap> bonds;
  bool verified = false;

  bool entry_leq(const IndexEntry& a, const IndexEntry& b) const;
  const BondMap& bond(std::size_t coarse_mu, std::size_t fine_mu) const;
  // p_lambda = i ∘ p_mu: the embedded class of x in M(X_mu).
  Molecule cone(const IndexEntry& e, std::size_t x) const;
  // Linear extension of the bond to molecules over the based quotients.
  Molecule linearized_bond(std::size_t coarse_mu, std::size_t fine_mu,
                           const Molecule& m) const;
};

// Closes the family under pairwise join (refusing past closure_cap members),
// indexes every (mu, radius) pair plus (mu, infinity), builds all bonds, and
// verifies the system. Radii must be positive; throws std::invalid_argument
// on bad input or cap overflow.
InverseSystem build_system(const FiniteGSpace& x,
                           const PseudometricFamily& family,
                           const std::vector<Rat>& radii,
                           std::size_t closure_cap = 256);

// Exhaustive re-check of the system laws: order axioms, directedness, cone
// coherence bond∘cone = cone (class- and molecule-level), bond composition
// along chains, 1-Lipschitz bonds, equivariance of bonds and cones. Sets
// s.verified to the outcome.
ValidationReport verify_system(InverseSystem& s);

// Strict tube membership: distance_to_image(m) < radius (always true for
// the infinite radius).
bool tube_member(const InverseSystem& s, const IndexEntry& e,
                 const Molecule& m);

// Sampled check that distance to the embedded image never increases under
// linearized bonds (the soundness of the (mu, r) order). Deterministic for
// a given seed.
ValidationReport tube_monotonicity_report(const InverseSystem& s,
                                          std::uint64_t seed,
                                          std::size_t samples_per_bond);

enum class ExportFormat { Dot, Json };

// Deterministic diagram export. DOT carries one node per entry and one edge
// per covering pair of the order; JSON carries the full relation and bond
// assignments. Refuses unverified systems with std::logic_error.
std::string export_system(const InverseSystem& s, ExportFormat format);

}  // namespace ae
