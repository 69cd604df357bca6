#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ae/rational.hpp"
#include "ae/validation.hpp"

namespace ae {

enum class MetricMode { Metric, Pseudometric };

// A finite point set with an exact symmetric distance matrix. The same type
// carries genuine metrics and pseudometrics; the mode is chosen at
// validation time.
struct FiniteMetric {
  std::vector<std::string> points;
  std::vector<std::vector<Rat>> dist;

  std::size_t size() const { return points.size(); }
  const Rat& at(std::size_t i, std::size_t j) const { return dist[i][j]; }
  std::optional<std::size_t> index_of(std::string_view id) const;
  Rat diameter() const;
  bool same_entries(const FiniteMetric& other) const;
};

// Reports every violated axiom with its witnessing indices. Structural junk
// (empty point set, non-square matrix, duplicate ids) throws
// std::invalid_argument instead.
ValidationReport validate_metric(const FiniteMetric& m, MetricMode mode);

// A finite group as a multiplication table over named elements. identity
// and inverse are derived from the table.
struct FiniteGroup {
  std::vector<std::string> elements;
  std::vector<std::vector<std::size_t>> table;  // table[g][h] = g*h
  std::size_t identity = 0;
  std::vector<std::size_t> inverse;
  std::vector<std::size_t> generators;  // nonempty iff generator-presented

  std::size_t size() const { return elements.size(); }
  std::size_t mul(std::size_t g, std::size_t h) const { return table[g][h]; }
  bool same_structure(const FiniteGroup& other) const;
};

// Builds a group from an explicit table, deriving identity and inverses.
// Throws std::invalid_argument when the table violates the group axioms
// (associativity, two-sided identity, two-sided inverses).
FiniteGroup group_from_table(std::vector<std::string> elements,
                             std::vector<std::vector<std::size_t>> table);

// Assignment of a permutation of the point set to every group element.
struct GroupAction {
  std::vector<std::vector<std::size_t>> perm;  // perm[g][x] = g*x

  std::size_t apply(std::size_t g, std::size_t x) const { return perm[g][x]; }
};

// Breadth-first closure of permutation generators. Elements are the distinct
// permutations reached; names are "e", "g1", "g2", ... in closure order.
// Throws std::invalid_argument on malformed generators or when the closure
// exceeds order_cap.
struct GeneratedGroup {
  FiniteGroup group;
  GroupAction action;
};
GeneratedGroup group_from_generators(
    const std::vector<std::vector<std::size_t>>& gens,
    std::size_t n_points,
    std::size_t order_cap = 10000);

// A finite metric space with a finite group acting on it.
struct FiniteGSpace {
  FiniteMetric space;
  FiniteGroup group;
  GroupAction action;
};

// Checks perm(e) = id, every perm(g) bijective, and the composition law
// perm(g)∘perm(h) = perm(gh) for all pairs. Wrong-sized permutation arrays
// throw std::invalid_argument.
ValidationReport validate_action(const FiniteGroup& group,
                                 std::size_t n_points,
                                 const GroupAction& action);

// Lists every triple (g,x,x') with m(gx,gx') != m(x,x').
ValidationReport check_invariance(const FiniteMetric& m,
                                  const FiniteGroup& group,
                                  const GroupAction& action);

// A point map between two spaces carrying the same group.
struct EquivariantMap {
  FiniteGSpace source;
  FiniteGSpace target;
  std::vector<std::size_t> image;  // image[x] = f(x)
};

// Lists every pair (g,x) with f(gx) != g f(x). Mismatched groups or a
// wrong-sized image throw std::invalid_argument.
ValidationReport check_equivariance(const EquivariantMap& f);

// mu(x,x') = rho_Y(f(x), f(x')) on the source point set, pseudometric mode.
FiniteMetric pullback_pseudometric(const EquivariantMap& f,
                                   const FiniteMetric& rho_y);

// Entrywise order and join on pseudometrics over the same point set.
bool pseudometric_leq(const FiniteMetric& mu, const FiniteMetric& mu2);
FiniteMetric pseudometric_join(const FiniteMetric& mu, const FiniteMetric& mu2);

// All points fixed by every group element. Uses the generators when the
// group is generator-presented.
std::vector<std::size_t> fixed_point_set(const FiniteGroup& group,
                                         const GroupAction& action,
                                         std::size_t n_points);

// A named, deduplicated list of pseudometrics over one space. Ingestion
// order is preserved; entrywise duplicates are dropped (first name wins).
struct PseudometricFamily {
  std::vector<std::string> names;
  std::vector<FiniteMetric> members;

  std::size_t size() const { return members.size(); }
  // Returns the index of the member (existing one if `m` duplicates it).
  std::size_t add(std::string name, FiniteMetric m);
  std::optional<std::size_t> index_of(std::string_view name) const;
};

// Validates every member as an invariant pseudometric on the given space.
ValidationReport validate_family(const PseudometricFamily& family,
                                 const FiniteGSpace& x);

}  // namespace ae
