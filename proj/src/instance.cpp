#include "ae/instance.hpp"

#include <fstream>
#include <set>
#include <utility>

namespace ae {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

const Json& field(const Json& doc, const char* key, const std::string& where) {
  const auto it = doc.find(key);
  if (it == doc.end()) fail(where, "missing field \"" + std::string(key) + "\"");
  return *it;
}

std::vector<std::string> parse_string_list(const Json& v,
                                           const std::string& where) {
  if (!v.is_array()) fail(where, "expected a list of strings");
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& item : v) {
    if (!item.is_string()) fail(where, "expected a list of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::size_t parse_index(const Json& v, std::size_t bound,
                        const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    fail(where, "expected a nonnegative integer index");
  }
  const auto idx = static_cast<std::size_t>(v.get<long long>());
  if (idx >= bound) {
    fail(where, "index " + std::to_string(idx) + " out of range (have " +
                    std::to_string(bound) + ")");
  }
  return idx;
}

std::vector<std::size_t> parse_perm(const Json& v, std::size_t n_points,
                                    const std::string& where) {
  if (!v.is_array() || v.size() != n_points) {
    fail(where, "expected a permutation as a list of " +
                    std::to_string(n_points) + " point indices");
  }
  std::vector<std::size_t> perm;
  perm.reserve(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    perm.push_back(parse_index(v[i], n_points, where));
  }
  return perm;
}

GroupAction parse_action_field(const Json& v, const FiniteGroup& group,
                               std::size_t n_points, const std::string& where) {
  GroupAction action;
  action.perm.assign(group.size(), {});
  if (v.is_array()) {
    if (v.size() != group.size()) {
      fail(where, "expected " + std::to_string(group.size()) +
                      " permutations, one per group element in order");
    }
    for (std::size_t g = 0; g < group.size(); ++g) {
      action.perm[g] =
          parse_perm(v[g], n_points, where + "[" + std::to_string(g) + "]");
    }
    return action;
  }
  if (v.is_object()) {
    std::vector<char> got(group.size(), 0);
    for (const auto& [key, val] : v.items()) {
      std::size_t g = group.size();
      for (std::size_t i = 0; i < group.size(); ++i) {
        if (group.elements[i] == key) {
          g = i;
          break;
        }
      }
      if (g == group.size()) {
        fail(where, "unknown group element \"" + key + "\"");
      }
      action.perm[g] = parse_perm(val, n_points, where + "." + key);
      got[g] = 1;
    }
    for (std::size_t g = 0; g < group.size(); ++g) {
      if (!got[g]) {
        fail(where,
             "no permutation for group element \"" + group.elements[g] + "\"");
      }
    }
    return action;
  }
  fail(where, "expected a list or an object of permutations");
}

}  // namespace

Rat rat_from_json(const Json& v, const std::string& where) {
  try {
    if (v.is_number_integer()) {
      return rat_parse(std::to_string(v.get<long long>()));
    }
    if (v.is_string()) {
      return rat_parse(v.get<std::string>());
    }
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
  fail(where, "rationals are encoded as integers or \"p/q\" strings");
}

Json rat_to_json(const Rat& r) { return Json(rat_str(r)); }

FiniteMetric metric_from_json(const Json& doc, std::vector<std::string> points,
                              const std::string& where) {
  const std::size_t n = points.size();
  if (!doc.is_array() || doc.size() != n) {
    fail(where, "expected a " + std::to_string(n) + "x" + std::to_string(n) +
                    " matrix");
  }
  FiniteMetric m;
  m.points = std::move(points);
  m.dist.assign(n, std::vector<Rat>(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) {
    if (!doc[i].is_array() || doc[i].size() != n) {
      fail(where, "row " + std::to_string(i) + " is not a list of " +
                      std::to_string(n) + " entries");
    }
    for (std::size_t j = 0; j < n; ++j) {
      m.dist[i][j] = rat_from_json(doc[i][j], where + "[" + std::to_string(i) +
                                                  "][" + std::to_string(j) +
                                                  "]");
    }
  }
  return m;
}

Json metric_to_json(const FiniteMetric& m) {
  Json rows = Json::array();
  for (const auto& row : m.dist) {
    Json cells = Json::array();
    for (const auto& v : row) cells.push_back(rat_to_json(v));
    rows.push_back(std::move(cells));
  }
  return rows;
}

InstanceDocument InstanceDocument::parse(const Json& doc) {
  if (!doc.is_object()) fail("document", "expected a JSON object");
  InstanceDocument out;

  // Points and base metric.
  auto points = parse_string_list(field(doc, "points", "points"), "points");
  if (points.empty()) fail("points", "empty point list");
  {
    std::set<std::string> seen;
    for (const auto& p : points) {
      if (p == kStarId) {
        fail("points", "\"*\" is reserved for the adjoined basepoint");
      }
      if (!seen.insert(p).second) fail("points", "duplicate point id \"" + p + "\"");
    }
  }
  const std::size_t n = points.size();
  out.gspace.space =
      metric_from_json(field(doc, "metric", "metric"), points, "metric");

  // Group: either an explicit table (axioms enforced here, since identity
  // and inverses cannot be derived from a broken table) or permutation
  // generators, which also determine the action.
  const Json& jgroup = field(doc, "group", "group");
  if (!jgroup.is_object()) fail("group", "expected an object");
  const bool has_gens = jgroup.contains("generators");
  const bool has_table = jgroup.contains("table");
  if (has_gens == has_table) {
    fail("group", "give exactly one of \"table\" or \"generators\"");
  }
  if (has_gens) {
    if (jgroup.contains("elements")) {
      fail("group", "element names are derived in generators mode");
    }
    if (doc.contains("action")) {
      fail("action", "the action is derived in generators mode; remove it");
    }
    const Json& jg = jgroup.at("generators");
    if (!jg.is_array()) fail("group.generators", "expected a list");
    std::vector<std::vector<std::size_t>> gens;
    gens.reserve(jg.size());
    for (std::size_t k = 0; k < jg.size(); ++k) {
      gens.push_back(parse_perm(jg[k], n,
                                "group.generators[" + std::to_string(k) + "]"));
    }
    try {
      GeneratedGroup gg = group_from_generators(gens, n);
      out.gspace.group = std::move(gg.group);
      out.gspace.action = std::move(gg.action);
    } catch (const std::invalid_argument& e) {
      fail("group.generators", e.what());
    }
  } else {
    const Json& jt = jgroup.at("table");
    if (!jt.is_array()) fail("group.table", "expected a matrix");
    const std::size_t order = jt.size();
    if (order == 0) fail("group.table", "empty table");
    std::vector<std::string> elements;
    if (jgroup.contains("elements")) {
      elements = parse_string_list(jgroup.at("elements"), "group.elements");
      if (elements.size() != order) {
        fail("group.elements", "named " + std::to_string(elements.size()) +
                                   " elements for a table of " +
                                   std::to_string(order));
      }
    } else {
      for (std::size_t i = 0; i < order; ++i) {
        elements.push_back("g" + std::to_string(i));
      }
    }
    std::vector<std::vector<std::size_t>> table(order);
    for (std::size_t g = 0; g < order; ++g) {
      const std::string where = "group.table[" + std::to_string(g) + "]";
      if (!jt[g].is_array() || jt[g].size() != order) {
        fail(where, "expected " + std::to_string(order) + " entries");
      }
      for (std::size_t h = 0; h < order; ++h) {
        table[g].push_back(parse_index(jt[g][h], order, where));
      }
    }
    try {
      out.gspace.group = group_from_table(std::move(elements), std::move(table));
    } catch (const std::invalid_argument& e) {
      fail("group", e.what());
    }
    out.gspace.action = parse_action_field(field(doc, "action", "action"),
                                           out.gspace.group, n, "action");
  }

  // Named invariant pseudometrics (deduplicated on ingestion).
  if (doc.contains("pseudometrics")) {
    const Json& jp = doc.at("pseudometrics");
    if (!jp.is_object()) fail("pseudometrics", "expected an object");
    for (const auto& [name, jm] : jp.items()) {
      out.family.add(name, metric_from_json(jm, out.gspace.space.points,
                                            "pseudometrics." + name));
    }
  }

  // Named equivariant maps into finite metric G-spaces over the same group.
  if (doc.contains("maps")) {
    const Json& jm = doc.at("maps");
    if (!jm.is_object()) fail("maps", "expected an object");
    for (const auto& [name, jf] : jm.items()) {
      const std::string where = "maps." + name;
      if (!jf.is_object()) fail(where, "expected an object");
      EquivariantMap f;
      f.source = out.gspace;

      const Json& jt = field(jf, "target", where + ".target");
      if (!jt.is_object()) fail(where + ".target", "expected an object");
      auto tpoints = parse_string_list(field(jt, "points", where + ".target.points"),
                                       where + ".target.points");
      if (tpoints.empty()) fail(where + ".target.points", "empty point list");
      {
        std::set<std::string> seen;
        for (const auto& p : tpoints) {
          if (!seen.insert(p).second) {
            fail(where + ".target.points", "duplicate point id \"" + p + "\"");
          }
        }
      }
      f.target.space = metric_from_json(field(jt, "metric", where + ".target.metric"),
                                        tpoints, where + ".target.metric");
      f.target.group = out.gspace.group;
      f.target.action =
          parse_action_field(field(jt, "action", where + ".target.action"),
                             f.target.group, tpoints.size(),
                             where + ".target.action");

      const Json& ji = field(jf, "image", where + ".image");
      if (!ji.is_array() || ji.size() != n) {
        fail(where + ".image", "expected one target point per source point");
      }
      for (std::size_t x = 0; x < n; ++x) {
        const std::string at = where + ".image[" + std::to_string(x) + "]";
        if (ji[x].is_string()) {
          const auto idx = f.target.space.index_of(ji[x].get<std::string>());
          if (!idx) {
            fail(at, "unknown target point \"" + ji[x].get<std::string>() + "\"");
          }
          f.image.push_back(*idx);
        } else {
          f.image.push_back(parse_index(ji[x], f.target.space.size(), at));
        }
      }
      out.maps.emplace_back(name, std::move(f));
    }
  }

  // Named molecules stay keyed by point id until a basepoint mode fixes the
  // index space; only the ids are checked here.
  if (doc.contains("molecules")) {
    const Json& jm = doc.at("molecules");
    if (!jm.is_object()) fail("molecules", "expected an object");
    for (const auto& [name, jmol] : jm.items()) {
      const std::string where = "molecules." + name;
      if (!jmol.is_object()) {
        fail(where, "expected an object of point: coefficient entries");
      }
      std::map<std::string, Rat> coeffs;
      for (const auto& [pid, val] : jmol.items()) {
        if (pid != kStarId && !out.gspace.space.index_of(pid)) {
          fail(where, "unknown point \"" + pid + "\"");
        }
        coeffs.emplace(pid, rat_from_json(val, where + "." + pid));
      }
      out.molecules.emplace_back(name, std::move(coeffs));
    }
  }

  if (doc.contains("basepoint")) {
    const Json& jb = doc.at("basepoint");
    if (!jb.is_string()) fail("basepoint", "expected a point id");
    const std::string id = jb.get<std::string>();
    if (!out.gspace.space.index_of(id)) {
      fail("basepoint", "unknown point \"" + id + "\"");
    }
    out.basepoint = id;
  }
  return out;
}

InstanceDocument InstanceDocument::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return parse(doc);
}

const EquivariantMap* InstanceDocument::find_map(std::string_view name) const {
  for (const auto& [n, f] : maps) {
    if (n == name) return &f;
  }
  return nullptr;
}

const std::map<std::string, Rat>* InstanceDocument::find_molecule(
    std::string_view name) const {
  for (const auto& [n, m] : molecules) {
    if (n == name) return &m;
  }
  return nullptr;
}

ValidationReport validate_document(const InstanceDocument& doc) {
  ValidationReport report;
  report.merge(validate_metric(doc.gspace.space, MetricMode::Metric), "metric");
  report.merge(validate_action(doc.gspace.group, doc.gspace.space.size(),
                               doc.gspace.action),
               "action");
  report.merge(
      check_invariance(doc.gspace.space, doc.gspace.group, doc.gspace.action),
      "metric");
  report.merge(validate_family(doc.family, doc.gspace));

  for (const auto& [name, f] : doc.maps) {
    const std::string ctx = "map \"" + name + "\"";
    report.merge(validate_metric(f.target.space, MetricMode::Metric),
                 ctx + " target");
    report.merge(
        validate_action(f.target.group, f.target.space.size(), f.target.action),
        ctx + " target");
    report.merge(
        check_invariance(f.target.space, f.target.group, f.target.action),
        ctx + " target");
    report.merge(check_equivariance(f), ctx);
  }

  for (const auto& [name, coeffs] : doc.molecules) {
    Rat total = 0;
    for (const auto& [pid, val] : coeffs) total += val;
    if (total != 0) {
      report.add("molecule.sum", "molecule \"" + name +
                                     "\" coefficients sum to " +
                                     rat_str(total) + ", expected 0");
    }
  }
  return report;
}

Molecule resolve_molecule(const std::map<std::string, Rat>& coeffs,
                          const BasedSpace& b) {
  std::map<std::size_t, Rat> raw;
  for (const auto& [pid, val] : coeffs) {
    std::size_t idx = 0;
    if (pid == kStarId) {
      if (b.mode != BasepointMode::Adjoined) {
        throw ParseError(
            "molecule uses \"*\" but the basepoint mode is internal");
      }
      idx = b.basepoint;
    } else {
      const auto found = b.metric.index_of(pid);
      if (!found) throw ParseError("molecule references unknown point \"" + pid + "\"");
      idx = *found;
    }
    raw.emplace(idx, val);
  }
  try {
    return make_molecule(raw, b);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("molecule: ") + e.what());
  }
}

Json molecule_to_json(const Molecule& m, const BasedSpace& b) {
  Json out = Json::object();
  for (const auto& [pt, coeff] : m.coeffs) {
    out[b.metric.points[pt]] = rat_to_json(coeff);
  }
  return out;
}

Json norm_result_to_json(const NormResult& r, const BasedSpace& b) {
  Json out = Json::object();
  out["value"] = rat_to_json(r.value);
  Json plan = Json::array();
  for (const auto& mv : r.plan.moves) {
    Json move = Json::object();
    move["from"] = b.metric.points[mv.from];
    move["to"] = b.metric.points[mv.to];
    move["mass"] = rat_to_json(mv.mass);
    plan.push_back(std::move(move));
  }
  out["plan"] = std::move(plan);
  Json pot = Json::object();
  for (const auto& [pt, v] : r.potential) {
    pot[b.metric.points[pt]] = rat_to_json(v);
  }
  out["potential"] = std::move(pot);
  return out;
}

Json group_to_json(const FiniteGroup& group) {
  Json out = Json::object();
  out["elements"] = group.elements;
  Json table = Json::array();
  for (const auto& row : group.table) {
    table.push_back(row);
  }
  out["table"] = std::move(table);
  return out;
}

Json action_to_json(const FiniteGroup& group, const GroupAction& action) {
  Json out = Json::object();
  for (std::size_t g = 0; g < group.size(); ++g) {
    out[group.elements[g]] = action.perm[g];
  }
  return out;
}

Json quotient_to_json(const Quotient& q, const FiniteGSpace& base) {
  // The leading fields form a full instance document for the class space,
  // so the artifact re-ingests through the normal parser.
  Json out = Json::object();
  out["points"] = q.space.gspace.space.points;
  out["metric"] = metric_to_json(q.space.gspace.space);
  out["group"] = group_to_json(q.space.gspace.group);
  out["action"] = action_to_json(q.space.gspace.group, q.space.gspace.action);
  out["mu"] = metric_to_json(q.mu);
  Json partition = Json::array();
  for (const auto& cls : q.space.classes) {
    Json members = Json::array();
    for (const std::size_t x : cls) members.push_back(base.space.points[x]);
    partition.push_back(std::move(members));
  }
  out["partition"] = std::move(partition);
  Json assignment = Json::object();
  for (std::size_t x = 0; x < q.map.assignment.size(); ++x) {
    assignment[base.space.points[x]] =
        q.space.gspace.space.points[q.map.assignment[x]];
  }
  out["assignment"] = std::move(assignment);
  return out;
}

Json factorization_to_json(const Factorization& f, const EquivariantMap& map) {
  Json out = Json::object();
  out["mu"] = metric_to_json(f.mu);
  out["quotient"] = quotient_to_json(f.quotient, map.source);
  Json phi = Json::object();
  for (std::size_t c = 0; c < f.phi.size(); ++c) {
    phi[f.quotient.space.gspace.space.points[c]] =
        map.target.space.points[f.phi[c]];
  }
  out["phi"] = std::move(phi);
  return out;
}

}  // namespace ae
