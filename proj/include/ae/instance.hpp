#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ae/gspace.hpp"
#include "ae/molecule.hpp"
#include "ae/norm.hpp"
#include "ae/quotient.hpp"
#include "ae/rational.hpp"
#include "ae/validation.hpp"

namespace ae {

using Json = nlohmann::ordered_json;

// Parse failure with the offending document location in the message.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A single-file instance document: one G-space plus named pseudometrics,
// equivariant maps, and molecules. Parsing resolves ids and shapes and
// throws ParseError on structural problems; axiom violations are collected
// separately by validate_document.
struct InstanceDocument {
  FiniteGSpace gspace;
  PseudometricFamily family;
  std::vector<std::pair<std::string, EquivariantMap>> maps;
  // Molecules by point id; "*" refers to the adjoined basepoint.
  std::vector<std::pair<std::string, std::map<std::string, Rat>>> molecules;
  std::optional<std::string> basepoint;

  static InstanceDocument parse(const Json& doc);
  static InstanceDocument load(const std::string& path);

  const EquivariantMap* find_map(std::string_view name) const;
  const std::map<std::string, Rat>* find_molecule(std::string_view name) const;
};

// Runs every axiom validator over the document: metric, action, invariance
// of the metric and of every pseudometric, equivariance of every map, and
// the zero-sum invariant of every molecule.
ValidationReport validate_document(const InstanceDocument& doc);

// Rationals on the wire: integers or "p/q" strings in, canonical strings out.
Rat rat_from_json(const Json& v, const std::string& where);
Json rat_to_json(const Rat& r);

// Resolves a named coefficient map against a based space ("*" allowed only
// in adjoined mode). Throws ParseError on unknown ids; make_molecule
// enforces the zero-sum invariant.
Molecule resolve_molecule(const std::map<std::string, Rat>& coeffs,
                          const BasedSpace& b);

// Serialization of results (rationals as canonical strings throughout).
Json metric_to_json(const FiniteMetric& m);
FiniteMetric metric_from_json(const Json& doc, std::vector<std::string> points,
                              const std::string& where);
Json group_to_json(const FiniteGroup& group);
Json action_to_json(const FiniteGroup& group, const GroupAction& action);
Json molecule_to_json(const Molecule& m, const BasedSpace& b);
Json norm_result_to_json(const NormResult& r, const BasedSpace& b);
Json quotient_to_json(const Quotient& q, const FiniteGSpace& base);
Json factorization_to_json(const Factorization& f, const EquivariantMap& map);

}  // namespace ae
