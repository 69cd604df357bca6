#include "ae/inverse_system.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ae/instance.hpp"
#include "ae/norm.hpp"
#include "ae/sampling.hpp"

namespace ae {

namespace {

// r_a <= r_b with nullopt standing for infinity.
bool radius_leq(const std::optional<Rat>& a, const std::optional<Rat>& b) {
  if (!a) return !b;
  if (!b) return true;
  return *a <= *b;
}

std::string radius_str(const std::optional<Rat>& r) {
  return r ? rat_str(*r) : "inf";
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (const char ch : s) {
    if (ch == '"' || ch == '\\') out.push_back('\\');
    out.push_back(ch);
  }
  return out;
}

bool same_based(const BasedSpace& a, const BasedSpace& b) {
  return a.metric.points == b.metric.points && a.metric.same_entries(b.metric) &&
         a.group.same_structure(b.group) && a.action.perm == b.action.perm &&
         a.mode == b.mode && a.basepoint == b.basepoint &&
         a.n_underlying == b.n_underlying;
}

bool same_quotient(const Quotient& a, const Quotient& b) {
  return a.mu.same_entries(b.mu) && a.map.assignment == b.map.assignment &&
         a.space.classes == b.space.classes &&
         a.space.gspace.space.points == b.space.gspace.space.points &&
         a.space.gspace.space.same_entries(b.space.gspace.space) &&
         a.space.gspace.group.same_structure(b.space.gspace.group) &&
         a.space.gspace.action.perm == b.space.gspace.action.perm;
}

}  // namespace

bool InverseSystem::entry_leq(const IndexEntry& a, const IndexEntry& b) const {
  return mu_leq[a.mu][b.mu] && radius_leq(b.radius, a.radius);
}

const BondMap& InverseSystem::bond(std::size_t coarse_mu,
                                   std::size_t fine_mu) const {
  if (coarse_mu >= family.size() || fine_mu >= family.size() ||
      bond_of[coarse_mu][fine_mu] < 0) {
    throw std::invalid_argument(
        "bond: the pseudometrics are not comparable, no projection exists");
  }
  return bonds[static_cast<std::size_t>(bond_of[coarse_mu][fine_mu])];
}

Molecule InverseSystem::cone(const IndexEntry& e, std::size_t x) const {
  if (e.mu >= family.size()) {
    throw std::invalid_argument("cone: entry references no family member");
  }
  if (x >= base.space.size()) {
    throw std::invalid_argument("cone: point index out of range");
  }
  return embed(quotients[e.mu].map.assignment[x], based[e.mu]);
}

Molecule InverseSystem::linearized_bond(std::size_t coarse_mu,
                                        std::size_t fine_mu,
                                        const Molecule& m) const {
  const BondMap& bm = bond(coarse_mu, fine_mu);
  const BasedSpace& src = based[fine_mu];
  const BasedSpace& tgt = based[coarse_mu];
  Molecule out;
  for (const auto& [pt, coeff] : m.coeffs) {
    if (pt >= src.size()) {
      throw std::invalid_argument(
          "linearized bond: molecule point out of range");
    }
    const std::size_t dst =
        (pt == src.basepoint) ? tgt.basepoint : bm.assignment[pt];
    const auto [it, fresh] = out.coeffs.emplace(dst, coeff);
    if (!fresh) {
      it->second += coeff;
      if (it->second == 0) out.coeffs.erase(it);
    }
  }
  return out;
}

InverseSystem build_system(const FiniteGSpace& x,
                           const PseudometricFamily& family,
                           const std::vector<Rat>& radii,
                           std::size_t closure_cap) {
  if (family.size() == 0) {
    throw std::invalid_argument("system: empty pseudometric family");
  }
  if (const auto r = validate_family(family, x); !r.ok()) {
    throw std::invalid_argument("system: invalid family: " + r.summary());
  }
  for (const Rat& r : radii) {
    if (r <= 0) {
      throw std::invalid_argument("system: radii must be positive, got " +
                                  rat_str(r));
    }
  }

  InverseSystem s;
  s.base = x;

  // Close the family under pairwise join. Freshly appended joins are
  // themselves joined against everything as the outer index reaches them.
  PseudometricFamily closed = family;
  for (std::size_t i = 0; i < closed.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      FiniteMetric joined = pseudometric_join(closed.members[j], closed.members[i]);
      std::string name = closed.names[j] + "|" + closed.names[i];
      closed.add(std::move(name), std::move(joined));
      if (closed.size() > closure_cap) {
        throw std::invalid_argument(
            "system: join closure exceeds the cap of " +
            std::to_string(closure_cap) + " members");
      }
    }
  }
  s.names = closed.names;
  s.family = closed.members;
  const std::size_t nf = s.family.size();

  std::vector<Rat> rs = radii;
  std::sort(rs.begin(), rs.end(), [](const Rat& a, const Rat& b) { return a > b; });
  rs.erase(std::unique(rs.begin(), rs.end()), rs.end());

  s.quotients.reserve(nf);
  s.based.reserve(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    s.quotients.push_back(make_quotient(x, s.family[i]));
    s.based.push_back(BasedSpace::adjoined(s.quotients[i].space.gspace));
  }

  s.mu_leq.assign(nf, std::vector<char>(nf, 0));
  for (std::size_t a = 0; a < nf; ++a) {
    for (std::size_t b = 0; b < nf; ++b) {
      s.mu_leq[a][b] = pseudometric_leq(s.family[a], s.family[b]) ? 1 : 0;
    }
  }

  s.bond_of.assign(nf, std::vector<int>(nf, -1));
  for (std::size_t c = 0; c < nf; ++c) {
    for (std::size_t f = 0; f < nf; ++f) {
      if (s.mu_leq[c][f]) {
        s.bond_of[c][f] = static_cast<int>(s.bonds.size());
        s.bonds.push_back(make_bond(s.quotients[c], s.quotients[f]));
      }
    }
  }

  // Entry order: family order major; within a member the whole molecule
  // space first (radius infinity), then radii from widest to narrowest.
  for (std::size_t m = 0; m < nf; ++m) {
    s.entries.push_back({m, std::nullopt});
    for (const Rat& r : rs) s.entries.push_back({m, r});
  }

  if (const auto report = verify_system(s); !report.ok()) {
    throw std::logic_error("internal: freshly built system fails its own "
                           "verification: " +
                           report.summary());
  }
  return s;
}

ValidationReport verify_system(InverseSystem& s) {
  ValidationReport report;
  s.verified = false;
  const std::size_t nf = s.family.size();

  if (nf == 0 || s.names.size() != nf || s.quotients.size() != nf ||
      s.based.size() != nf || s.mu_leq.size() != nf ||
      s.bond_of.size() != nf || s.entries.empty()) {
    report.add("system.shape", "component counts are inconsistent");
    return report;
  }
  for (std::size_t i = 0; i < nf; ++i) {
    if (s.mu_leq[i].size() != nf || s.bond_of[i].size() != nf) {
      report.add("system.shape", "order cache rows are inconsistent");
      return report;
    }
  }

  // Family axioms and invariance first; the deeper checks assume them.
  {
    PseudometricFamily fam;
    fam.names = s.names;
    fam.members = s.family;
    report.merge(validate_family(fam, s.base));
  }
  if (!report.ok()) return report;

  // Join closure and the cached order.
  for (std::size_t i = 0; i < nf; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const FiniteMetric joined = pseudometric_join(s.family[j], s.family[i]);
      bool present = false;
      for (std::size_t k = 0; k < nf && !present; ++k) {
        present = s.family[k].same_entries(joined);
      }
      if (!present) {
        report.add("system.closure", "the join of \"" + s.names[j] +
                                         "\" and \"" + s.names[i] +
                                         "\" is missing from the family");
      }
    }
  }
  for (std::size_t a = 0; a < nf; ++a) {
    for (std::size_t b = 0; b < nf; ++b) {
      const bool leq = pseudometric_leq(s.family[a], s.family[b]);
      if (static_cast<bool>(s.mu_leq[a][b]) != leq) {
        report.add("system.order-cache",
                   "cached order between \"" + s.names[a] + "\" and \"" +
                       s.names[b] + "\" disagrees with the matrices");
      }
    }
  }

  // Quotients and based spaces must match a fresh reconstruction.
  for (std::size_t i = 0; i < nf; ++i) {
    const Quotient fresh = make_quotient(s.base, s.family[i]);
    if (!same_quotient(fresh, s.quotients[i])) {
      report.add("system.quotient", "stored quotient for \"" + s.names[i] +
                                        "\" differs from a fresh rebuild");
    }
    if (!same_based(BasedSpace::adjoined(fresh.space.gspace), s.based[i])) {
      report.add("system.based", "stored based space for \"" + s.names[i] +
                                     "\" differs from a fresh rebuild");
    }
  }

  // Entries: the Cartesian pattern (mu major; infinity then descending
  // radii, the same radii for every member).
  {
    std::vector<std::optional<Rat>> pattern;
    const std::size_t per = s.entries.size() / nf;
    bool shape_ok = per > 0 && per * nf == s.entries.size();
    if (shape_ok) {
      for (std::size_t k = 0; k < per; ++k) pattern.push_back(s.entries[k].radius);
      shape_ok = !pattern[0].has_value();
      for (std::size_t k = 1; k < pattern.size() && shape_ok; ++k) {
        shape_ok = pattern[k].has_value() && *pattern[k] > 0 &&
                   (k == 1 || *pattern[k - 1] > *pattern[k]);
      }
    }
    if (shape_ok) {
      for (std::size_t m = 0; m < nf && shape_ok; ++m) {
        for (std::size_t k = 0; k < per && shape_ok; ++k) {
          const IndexEntry& e = s.entries[m * per + k];
          shape_ok = e.mu == m && e.radius == pattern[k];
        }
      }
    }
    if (!shape_ok) {
      report.add("system.entries",
                 "entry list is not the expected family x radius grid");
    }
  }

  // Order axioms and directedness on the entries.
  const std::size_t ne = s.entries.size();
  for (std::size_t a = 0; a < ne; ++a) {
    if (!s.entry_leq(s.entries[a], s.entries[a])) {
      report.add("system.order", "entry " + std::to_string(a) +
                                     " is not below itself");
    }
    for (std::size_t b = 0; b < ne; ++b) {
      if (a != b && s.entry_leq(s.entries[a], s.entries[b]) &&
          s.entry_leq(s.entries[b], s.entries[a])) {
        report.add("system.order", "entries " + std::to_string(a) + " and " +
                                       std::to_string(b) +
                                       " are distinct but order-equivalent");
      }
      for (std::size_t c = 0; c < ne; ++c) {
        if (s.entry_leq(s.entries[a], s.entries[b]) &&
            s.entry_leq(s.entries[b], s.entries[c]) &&
            !s.entry_leq(s.entries[a], s.entries[c])) {
          report.add("system.order",
                     "order is not transitive through entries " +
                         std::to_string(a) + ", " + std::to_string(b) + ", " +
                         std::to_string(c));
        }
      }
    }
  }
  for (std::size_t a = 0; a < ne; ++a) {
    for (std::size_t b = 0; b < ne; ++b) {
      bool bounded = false;
      for (std::size_t c = 0; c < ne && !bounded; ++c) {
        bounded = s.entry_leq(s.entries[a], s.entries[c]) &&
                  s.entry_leq(s.entries[b], s.entries[c]);
      }
      if (!bounded) {
        report.add("system.directed", "entries " + std::to_string(a) +
                                          " and " + std::to_string(b) +
                                          " have no upper bound");
      }
    }
  }

  // Bonds: existence, shape, cone coherence p∘p_fine = p_coarse, the
  // 1-Lipschitz bound, equivariance, and composition along chains.
  const std::size_t n = s.base.space.size();
  for (std::size_t c = 0; c < nf; ++c) {
    for (std::size_t f = 0; f < nf; ++f) {
      const bool leq = pseudometric_leq(s.family[c], s.family[f]);
      if (!leq) {
        if (s.bond_of[c][f] != -1) {
          report.add("system.bond-extra",
                     "bond stored for the incomparable pair \"" + s.names[c] +
                         "\", \"" + s.names[f] + "\"");
        }
        continue;
      }
      if (s.bond_of[c][f] < 0 ||
          static_cast<std::size_t>(s.bond_of[c][f]) >= s.bonds.size()) {
        report.add("system.bond-missing", "no bond for \"" + s.names[c] +
                                              "\" <= \"" + s.names[f] + "\"");
        continue;
      }
      const BondMap& bm = s.bonds[static_cast<std::size_t>(s.bond_of[c][f])];
      const Quotient& qc = s.quotients[c];
      const Quotient& qf = s.quotients[f];
      const std::size_t kf = qf.space.classes.size();
      const std::size_t kc = qc.space.classes.size();
      if (bm.assignment.size() != kf) {
        report.add("system.bond-shape", "bond \"" + s.names[c] + "\" <= \"" +
                                            s.names[f] +
                                            "\" has the wrong class count");
        continue;
      }
      bool in_range = true;
      for (const std::size_t v : bm.assignment) in_range = in_range && v < kc;
      if (!in_range) {
        report.add("system.bond-shape", "bond \"" + s.names[c] + "\" <= \"" +
                                            s.names[f] +
                                            "\" maps outside the classes");
        continue;
      }
      for (std::size_t x = 0; x < n; ++x) {
        if (bm.assignment[qf.map.assignment[x]] != qc.map.assignment[x]) {
          report.add("system.cone",
                     "bond∘projection differs from the projection at \"" +
                         s.base.space.points[x] + "\" for \"" + s.names[c] +
                         "\" <= \"" + s.names[f] + "\"");
        }
      }
      for (std::size_t c1 = 0; c1 < kf; ++c1) {
        for (std::size_t c2 = 0; c2 < kf; ++c2) {
          if (qc.space.gspace.space.at(bm.assignment[c1], bm.assignment[c2]) >
              qf.space.gspace.space.at(c1, c2)) {
            report.add("system.lipschitz",
                       "bond \"" + s.names[c] + "\" <= \"" + s.names[f] +
                           "\" expands a class distance");
          }
        }
      }
      for (std::size_t g = 0; g < s.base.group.size(); ++g) {
        for (std::size_t c1 = 0; c1 < kf; ++c1) {
          if (bm.assignment[qf.space.gspace.action.apply(g, c1)] !=
              qc.space.gspace.action.apply(g, bm.assignment[c1])) {
            report.add("system.equivariance",
                       "bond \"" + s.names[c] + "\" <= \"" + s.names[f] +
                           "\" is not equivariant under " +
                           s.base.group.elements[g]);
          }
        }
      }
      // Molecule-level cone coherence through the linearized bond.
      for (std::size_t x = 0; x < n; ++x) {
        const Molecule lifted = s.linearized_bond(c, f, s.cone({f, std::nullopt}, x));
        if (!(lifted == s.cone({c, std::nullopt}, x))) {
          report.add("system.cone-molecule",
                     "linearized bond misses the cone of \"" +
                         s.base.space.points[x] + "\" for \"" + s.names[c] +
                         "\" <= \"" + s.names[f] + "\"");
        }
      }
    }
  }
  for (std::size_t c = 0; c < nf; ++c) {
    for (std::size_t m = 0; m < nf; ++m) {
      for (std::size_t f = 0; f < nf; ++f) {
        if (!pseudometric_leq(s.family[c], s.family[m]) ||
            !pseudometric_leq(s.family[m], s.family[f]) ||
            s.bond_of[c][m] < 0 || s.bond_of[m][f] < 0 || s.bond_of[c][f] < 0) {
          continue;
        }
        const auto& bcm = s.bonds[static_cast<std::size_t>(s.bond_of[c][m])];
        const auto& bmf = s.bonds[static_cast<std::size_t>(s.bond_of[m][f])];
        const auto& bcf = s.bonds[static_cast<std::size_t>(s.bond_of[c][f])];
        const std::size_t kf = s.quotients[f].space.classes.size();
        if (bmf.assignment.size() != kf || bcf.assignment.size() != kf) {
          continue;  // already reported as a shape violation
        }
        for (std::size_t cls = 0; cls < kf; ++cls) {
          if (bmf.assignment[cls] >= bcm.assignment.size()) continue;
          if (bcm.assignment[bmf.assignment[cls]] != bcf.assignment[cls]) {
            report.add("system.compose",
                       "bonds do not compose along \"" + s.names[c] +
                           "\" <= \"" + s.names[m] + "\" <= \"" + s.names[f] +
                           "\" at class " + std::to_string(cls));
          }
        }
      }
    }
  }

  s.verified = report.ok();
  return report;
}

bool tube_member(const InverseSystem& s, const IndexEntry& e,
                 const Molecule& m) {
  if (e.mu >= s.family.size()) {
    throw std::invalid_argument("tube: entry references no family member");
  }
  if (!e.radius) return true;
  return distance_to_image(m, s.based[e.mu]).first < *e.radius;
}

ValidationReport tube_monotonicity_report(const InverseSystem& s,
                                          std::uint64_t seed,
                                          std::size_t samples_per_bond) {
  ValidationReport report;
  const std::size_t nf = s.family.size();
  std::uint64_t stream = 0;
  for (std::size_t c = 0; c < nf; ++c) {
    for (std::size_t f = 0; f < nf; ++f) {
      if (c == f || !s.mu_leq[c][f] || s.bond_of[c][f] < 0) continue;
      const auto molecules =
          sample_molecules(s.based[f], samples_per_bond, seed + stream);
      ++stream;
      for (std::size_t t = 0; t < molecules.size(); ++t) {
        const Rat d_fine = distance_to_image(molecules[t], s.based[f]).first;
        const Molecule moved = s.linearized_bond(c, f, molecules[t]);
        const Rat d_coarse = distance_to_image(moved, s.based[c]).first;
        if (d_coarse > d_fine) {
          report.add("tube.monotone",
                     "sample " + std::to_string(t) + " for \"" + s.names[c] +
                         "\" <= \"" + s.names[f] +
                         "\": distance grew from " + rat_str(d_fine) + " to " +
                         rat_str(d_coarse));
        }
      }
    }
  }
  return report;
}

std::string export_system(const InverseSystem& s, ExportFormat format) {
  if (!s.verified) {
    throw std::logic_error(
        "export: the system has not passed verification; run verify first");
  }
  const std::size_t ne = s.entries.size();

  if (format == ExportFormat::Dot) {
    std::ostringstream out;
    out << "digraph inverse_system {\n";
    out << "  rankdir=BT;\n";
    out << "  node [shape=box];\n";
    for (std::size_t i = 0; i < ne; ++i) {
      out << "  e" << i << " [label=\""
          << dot_escape(s.names[s.entries[i].mu]) << ", r="
          << radius_str(s.entries[i].radius) << "\"];\n";
    }
    // One edge per covering pair, drawn from the finer entry down to the
    // coarser one (the direction of the bonding map).
    for (std::size_t b = 0; b < ne; ++b) {
      for (std::size_t a = 0; a < ne; ++a) {
        if (a == b || !s.entry_leq(s.entries[a], s.entries[b])) continue;
        bool covering = true;
        for (std::size_t c = 0; c < ne && covering; ++c) {
          if (c == a || c == b) continue;
          covering = !(s.entry_leq(s.entries[a], s.entries[c]) &&
                       s.entry_leq(s.entries[c], s.entries[b]));
        }
        if (covering) out << "  e" << b << " -> e" << a << ";\n";
      }
    }
    out << "}\n";
    return out.str();
  }

  // The leading fields form a full instance document over the base space
  // with the closed family as its pseudometrics, so the export re-ingests
  // through the normal parser; the system-specific fields ride along as
  // ignored extras.
  nlohmann::ordered_json doc;
  doc["points"] = s.base.space.points;
  doc["metric"] = metric_to_json(s.base.space);
  doc["group"] = group_to_json(s.base.group);
  doc["action"] = action_to_json(s.base.group, s.base.action);
  {
    nlohmann::ordered_json pseudometrics = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < s.family.size(); ++i) {
      pseudometrics[s.names[i]] = metric_to_json(s.family[i]);
    }
    doc["pseudometrics"] = std::move(pseudometrics);
  }
  doc["family"] = s.names;
  {
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const auto& e : s.entries) {
      nlohmann::ordered_json entry;
      entry["mu"] = s.names[e.mu];
      if (e.radius) {
        entry["radius"] = rat_str(*e.radius);
      } else {
        entry["radius"] = nullptr;
      }
      entries.push_back(std::move(entry));
    }
    doc["entries"] = std::move(entries);
  }
  {
    nlohmann::ordered_json order = nlohmann::ordered_json::array();
    for (std::size_t a = 0; a < ne; ++a) {
      for (std::size_t b = 0; b < ne; ++b) {
        if (a != b && s.entry_leq(s.entries[a], s.entries[b])) {
          order.push_back(nlohmann::ordered_json::array({a, b}));
        }
      }
    }
    doc["order"] = std::move(order);
  }
  {
    nlohmann::ordered_json quotients = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < s.family.size(); ++i) {
      nlohmann::ordered_json q;
      q["mu"] = s.names[i];
      nlohmann::ordered_json classes = nlohmann::ordered_json::array();
      for (const auto& cls : s.quotients[i].space.classes) {
        nlohmann::ordered_json members = nlohmann::ordered_json::array();
        for (const std::size_t x : cls) members.push_back(s.base.space.points[x]);
        classes.push_back(std::move(members));
      }
      q["classes"] = std::move(classes);
      quotients.push_back(std::move(q));
    }
    doc["quotients"] = std::move(quotients);
  }
  {
    nlohmann::ordered_json bonds = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < s.family.size(); ++c) {
      for (std::size_t f = 0; f < s.family.size(); ++f) {
        if (c == f || s.bond_of[c][f] < 0) continue;
        nlohmann::ordered_json b;
        b["coarse"] = s.names[c];
        b["fine"] = s.names[f];
        b["assignment"] =
            s.bonds[static_cast<std::size_t>(s.bond_of[c][f])].assignment;
        bonds.push_back(std::move(b));
      }
    }
    doc["bonds"] = std::move(bonds);
  }
  doc["verified"] = true;
  return doc.dump(2) + "\n";
}

}  // namespace ae
