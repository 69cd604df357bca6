#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "ae/molecule.hpp"
#include "ae/rational.hpp"
#include "ae/validation.hpp"

namespace ae {

struct TransportMove {
  std::size_t from = 0;
  std::size_t to = 0;
  Rat mass;  // > 0
};

// A flow witnessing one decomposition of a molecule into point differences.
struct TransportPlan {
  std::vector<TransportMove> moves;

  Rat cost(const FiniteMetric& metric) const;
  // Net outflow minus inflow per point.
  std::map<std::size_t, Rat> divergence() const;
};

// An exact norm value together with a primal witness (the plan) and a dual
// witness (a 1-Lipschitz potential on the support pairing to the value).
// Matching primal and dual values prove optimality.
struct NormResult {
  Rat value;
  TransportPlan plan;
  std::map<std::size_t, Rat> potential;  // keys = support of the molecule
};

// Exact transportation norm of a molecule over the based space, solved by
// network simplex between the positive and negative parts with Bland's
// anti-cycling rule. The zero molecule and single-pair molecules
// short-circuit.
NormResult norm(const Molecule& m, const BasedSpace& b);

// Independent oracle: minimizes plan cost over all flows with the molecule's
// divergence by enumerating every spanning-tree flow of the complete graph
// on the based points (routes through arbitrary intermediate points).
// Refuses instances above the caps with std::invalid_argument.
Rat brute_force_norm(const Molecule& m, const BasedSpace& b,
                     std::size_t support_cap = 5, std::size_t point_cap = 6);

// min over underlying points x of ||m - embed(x)||, with the first argmin in
// point order.
std::pair<Rat, std::size_t> distance_to_image(const Molecule& m,
                                              const BasedSpace& b);

// Re-checks every NormResult invariant from scratch: plan divergence equals
// the molecule, plan cost equals the value, the potential is 1-Lipschitz on
// support pairs and pairs with the molecule to the value.
ValidationReport verify_certificate(const Molecule& m, const NormResult& r,
                                    const BasedSpace& b);

}  // namespace ae
