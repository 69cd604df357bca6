#pragma once

#include <cstddef>
#include <vector>

#include "ae/gspace.hpp"
#include "ae/validation.hpp"

namespace ae {

// The quotient of a G-space by the zero set of an invariant pseudometric.
// Classes are listed by their canonical representative (least point index);
// class ids render as "[rep]". The class metric is a genuine invariant
// metric and the induced action permutes classes.
struct QuotientSpace {
  std::vector<std::vector<std::size_t>> classes;  // sorted members, rep first
  FiniteGSpace gspace;                            // metric + action on classes
};

struct QuotientMap {
  std::vector<std::size_t> assignment;  // point -> class index
};

struct Quotient {
  FiniteMetric mu;  // the inducing pseudometric
  QuotientSpace space;
  QuotientMap map;
};

// Builds the quotient. Rejects non-pseudometric or non-invariant mu with
// std::invalid_argument carrying the violating triple. Well-definedness of
// the class metric and action is verified exhaustively over representatives,
// not assumed.
Quotient make_quotient(const FiniteGSpace& x, const FiniteMetric& mu);

// Projection between quotients of the same space, defined when
// coarse.mu <= fine.mu entrywise. Distance-nonincreasing and equivariant by
// construction; both are re-verified exhaustively.
struct BondMap {
  std::vector<std::size_t> assignment;  // fine class -> coarse class
};

BondMap make_bond(const Quotient& coarse, const Quotient& fine);

// The canonical factorization of an equivariant map through the quotient by
// its pullback pseudometric: phi([x]) = f(x) with phi∘p = f, phi injective
// and isometric onto the image.
struct Factorization {
  FiniteMetric mu;
  Quotient quotient;
  std::vector<std::size_t> phi;  // class -> target point
};

Factorization factorize(const EquivariantMap& f, const FiniteMetric& rho_y);

}  // namespace ae
