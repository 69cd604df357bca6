#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>

#include "ae/gspace.hpp"
#include "ae/rational.hpp"
#include "ae/validation.hpp"

namespace ae {

enum class BasepointMode { Internal, Adjoined };
enum class ActionMode { Pushforward, Eq3Literal };

// Reserved id for the adjoined basepoint.
inline constexpr const char* kStarId = "*";

// A G-space with a chosen basepoint. In adjoined mode a formal point "*" is
// appended at distance c from everything, fixed by the whole group; c must
// satisfy c >= diam/2 so the extended matrix stays a metric. In internal
// mode the basepoint must be G-fixed unless the experimental probe override
// is used.
struct BasedSpace {
  FiniteMetric metric;  // extended matrix; "*" is the last point if adjoined
  FiniteGroup group;
  GroupAction action;  // extended permutations; "*" is fixed
  BasepointMode mode = BasepointMode::Adjoined;
  std::size_t basepoint = 0;    // index into metric.points
  std::size_t n_underlying = 0; // points of the original space

  std::size_t size() const { return metric.size(); }
  bool basepoint_fixed() const;

  // Canonical policy: adjoin "*" with c = max(1, diam).
  static BasedSpace adjoined(const FiniteGSpace& x);
  static BasedSpace adjoined(const FiniteGSpace& x, const Rat& c);
  // Internal basepoint; throws unless the point is G-fixed or allow_unfixed
  // is set (the Eq3Literal probe path).
  static BasedSpace internal(const FiniteGSpace& x, std::size_t basepoint,
                             bool allow_unfixed = false);
};

// A finitely supported rational function with zero total sum, indexed by
// based-space point indices. Zero coefficients are never stored, so equality
// of the maps is equality of molecules.
struct Molecule {
  std::map<std::size_t, Rat> coeffs;

  bool is_zero() const { return coeffs.empty(); }
  Rat at(std::size_t x) const;
  bool operator==(const Molecule& other) const = default;
};

// Builds a molecule from raw coefficients: prunes zeros, verifies the
// zero-sum invariant and index range. Throws std::invalid_argument.
Molecule make_molecule(const std::map<std::size_t, Rat>& coeffs,
                       const BasedSpace& b);

// The embedding x -> (x - basepoint). embed(basepoint) is the zero molecule
// in internal mode; "*" itself is not embeddable.
Molecule embed(std::size_t x, const BasedSpace& b);

// alpha*m + beta*m2, zeros pruned.
Molecule combine(const Rat& alpha, const Molecule& m, const Rat& beta,
                 const Molecule& m2);

// Coefficients of m in the basis {x - basepoint : x != basepoint}. The
// basepoint coefficient is implied by the zero sum.
std::map<std::size_t, Rat> basis_decompose(const Molecule& m,
                                           const BasedSpace& b);

// Inverse of basis_decompose.
Molecule from_decomposition(const std::map<std::size_t, Rat>& terms,
                            const BasedSpace& b);

// Group action on molecules. Pushforward transports coefficients along the
// permutation; Eq3Literal recomputes from the basis decomposition with the
// basepoint held still. The modes agree exactly when the basepoint is
// G-fixed (always in adjoined mode).
Molecule act(std::size_t g, const Molecule& m, const BasedSpace& b,
             ActionMode mode = ActionMode::Pushforward);

// Linear extension of an equivariant point map to molecules. Requires the
// source basepoint to map to the target basepoint (automatic in adjoined
// mode, where "*" maps to "*"); throws on mismatch.
Molecule pushforward_map(const EquivariantMap& f, const Molecule& m,
                         const BasedSpace& src, const BasedSpace& tgt);

// Checks act(e,m) = m and act(g, act(h, m)) = act(gh, m) over the whole
// group and the given molecules, in the given mode.
ValidationReport action_axiom_report(const BasedSpace& b, ActionMode mode,
                                     std::span<const Molecule> molecules);

}  // namespace ae
