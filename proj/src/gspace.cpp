#include "ae/gspace.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace ae {

namespace {

std::string idx_name(const std::vector<std::string>& names, std::size_t i) {
  return i < names.size() ? names[i] : ("#" + std::to_string(i));
}

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace

std::optional<std::size_t> FiniteMetric::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] == id) return i;
  }
  return std::nullopt;
}

Rat FiniteMetric::diameter() const {
  Rat best = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = i + 1; j < size(); ++j) {
      if (dist[i][j] > best) best = dist[i][j];
    }
  }
  return best;
}

bool FiniteMetric::same_entries(const FiniteMetric& other) const {
  if (size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) {
      if (dist[i][j] != other.dist[i][j]) return false;
    }
  }
  return true;
}

ValidationReport validate_metric(const FiniteMetric& m, MetricMode mode) {
  const std::size_t n = m.points.size();
  require(n > 0, "metric: empty point set");
  require(m.dist.size() == n, "metric: matrix has " +
                                  std::to_string(m.dist.size()) +
                                  " rows for " + std::to_string(n) + " points");
  for (std::size_t i = 0; i < n; ++i) {
    require(m.dist[i].size() == n,
            "metric: row " + std::to_string(i) + " has " +
                std::to_string(m.dist[i].size()) + " entries, expected " +
                std::to_string(n));
  }
  {
    std::set<std::string> seen;
    for (const auto& p : m.points) {
      require(seen.insert(p).second, "metric: duplicate point id \"" + p + "\"");
    }
  }

  ValidationReport report;
  for (std::size_t i = 0; i < n; ++i) {
    if (m.dist[i][i] != 0) {
      report.add("metric.diagonal",
                 "d(" + m.points[i] + "," + m.points[i] + ") = " +
                     rat_str(m.dist[i][i]) + ", expected 0");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (m.dist[i][j] != m.dist[j][i]) {
        report.add("metric.symmetry",
                   "d(" + m.points[i] + "," + m.points[j] + ") = " +
                       rat_str(m.dist[i][j]) + " but d(" + m.points[j] + "," +
                       m.points[i] + ") = " + rat_str(m.dist[j][i]));
      }
      if (m.dist[i][j] < 0) {
        report.add("metric.nonnegative",
                   "d(" + m.points[i] + "," + m.points[j] + ") = " +
                       rat_str(m.dist[i][j]) + " < 0");
      }
      if (mode == MetricMode::Metric && m.dist[i][j] == 0) {
        report.add("metric.separation",
                   "d(" + m.points[i] + "," + m.points[j] +
                       ") = 0 for distinct points");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (m.dist[i][k] > m.dist[i][j] + m.dist[j][k]) {
          report.add("metric.triangle",
                     "d(" + m.points[i] + "," + m.points[k] + ") = " +
                         rat_str(m.dist[i][k]) + " > d(" + m.points[i] + "," +
                         m.points[j] + ") + d(" + m.points[j] + "," +
                         m.points[k] + ") = " +
                         rat_str(m.dist[i][j] + m.dist[j][k]));
        }
      }
    }
  }
  return report;
}

bool FiniteGroup::same_structure(const FiniteGroup& other) const {
  return elements == other.elements && table == other.table;
}

FiniteGroup group_from_table(std::vector<std::string> elements,
                             std::vector<std::vector<std::size_t>> table) {
  const std::size_t n = elements.size();
  require(n > 0, "group: empty element list");
  require(table.size() == n, "group: table has " +
                                 std::to_string(table.size()) + " rows for " +
                                 std::to_string(n) + " elements");
  for (std::size_t g = 0; g < n; ++g) {
    require(table[g].size() == n,
            "group: table row " + std::to_string(g) + " has " +
                std::to_string(table[g].size()) + " entries, expected " +
                std::to_string(n));
    for (std::size_t h = 0; h < n; ++h) {
      require(table[g][h] < n, "group: table entry (" + std::to_string(g) +
                                   "," + std::to_string(h) +
                                   ") out of range: " +
                                   std::to_string(table[g][h]));
    }
  }
  {
    std::set<std::string> seen;
    for (const auto& e : elements) {
      require(seen.insert(e).second,
              "group: duplicate element name \"" + e + "\"");
    }
  }

  // Two-sided identity.
  std::optional<std::size_t> identity;
  for (std::size_t e = 0; e < n; ++e) {
    bool ok = true;
    for (std::size_t g = 0; g < n; ++g) {
      if (table[e][g] != g || table[g][e] != g) {
        ok = false;
        break;
      }
    }
    if (ok) {
      identity = e;
      break;
    }
  }
  require(identity.has_value(), "group: no two-sided identity element");

  // Associativity over all triples; O(n^3) is fine for user-sized tables.
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        if (table[table[a][b]][c] != table[a][table[b][c]]) {
          throw std::invalid_argument(
              "group: associativity fails at (" + elements[a] + "," +
              elements[b] + "," + elements[c] + ")");
        }
      }
    }
  }

  // Two-sided inverses.
  std::vector<std::size_t> inverse(n, n);
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t h = 0; h < n; ++h) {
      if (table[g][h] == *identity && table[h][g] == *identity) {
        inverse[g] = h;
        break;
      }
    }
    require(inverse[g] < n,
            "group: element " + elements[g] + " has no two-sided inverse");
  }

  FiniteGroup out;
  out.elements = std::move(elements);
  out.table = std::move(table);
  out.identity = *identity;
  out.inverse = std::move(inverse);
  return out;
}

GeneratedGroup group_from_generators(
    const std::vector<std::vector<std::size_t>>& gens, std::size_t n_points,
    std::size_t order_cap) {
  require(n_points > 0, "generators: empty point set");
  for (std::size_t k = 0; k < gens.size(); ++k) {
    require(gens[k].size() == n_points,
            "generators: generator " + std::to_string(k) + " has " +
                std::to_string(gens[k].size()) + " entries, expected " +
                std::to_string(n_points));
    std::vector<bool> hit(n_points, false);
    for (std::size_t x = 0; x < n_points; ++x) {
      require(gens[k][x] < n_points,
              "generators: generator " + std::to_string(k) +
                  " maps point " + std::to_string(x) + " out of range");
      require(!hit[gens[k][x]], "generators: generator " + std::to_string(k) +
                                    " is not a permutation");
      hit[gens[k][x]] = true;
    }
  }

  std::vector<std::size_t> id_perm(n_points);
  for (std::size_t x = 0; x < n_points; ++x) id_perm[x] = x;

  // Breadth-first closure under right multiplication by the generators.
  std::vector<std::vector<std::size_t>> elems = {id_perm};
  std::map<std::vector<std::size_t>, std::size_t> index = {{id_perm, 0}};
  for (std::size_t head = 0; head < elems.size(); ++head) {
    for (const auto& gen : gens) {
      std::vector<std::size_t> prod(n_points);
      // (elems[head] followed by gen) as functions: prod(x) = elems[head](gen(x))
      // keeps table[g][h] = "g after h", matching perm[g*h] = perm[g]∘perm[h].
      for (std::size_t x = 0; x < n_points; ++x) {
        prod[x] = elems[head][gen[x]];
      }
      if (index.emplace(prod, elems.size()).second) {
        elems.push_back(prod);
        if (elems.size() > order_cap) {
          throw std::invalid_argument(
              "generators: closure exceeds the order cap of " +
              std::to_string(order_cap));
        }
      }
    }
  }

  const std::size_t n = elems.size();
  FiniteGroup group;
  group.elements.reserve(n);
  group.elements.push_back("e");
  for (std::size_t i = 1; i < n; ++i) {
    group.elements.push_back("g" + std::to_string(i));
  }
  group.table.assign(n, std::vector<std::size_t>(n));
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t h = 0; h < n; ++h) {
      std::vector<std::size_t> prod(n_points);
      for (std::size_t x = 0; x < n_points; ++x) {
        prod[x] = elems[g][elems[h][x]];
      }
      group.table[g][h] = index.at(prod);
    }
  }
  group.identity = 0;
  group.inverse.assign(n, n);
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t h = 0; h < n; ++h) {
      if (group.table[g][h] == 0 && group.table[h][g] == 0) {
        group.inverse[g] = h;
        break;
      }
    }
  }

  // Record which closure elements the generators landed on.
  for (const auto& gen : gens) {
    group.generators.push_back(index.at(gen));
  }

  GeneratedGroup out;
  out.group = std::move(group);
  out.action.perm = std::move(elems);
  return out;
}

ValidationReport validate_action(const FiniteGroup& group, std::size_t n_points,
                                 const GroupAction& action) {
  const std::size_t n = group.size();
  require(action.perm.size() == n,
          "action: " + std::to_string(action.perm.size()) +
              " permutations for " + std::to_string(n) + " group elements");
  for (std::size_t g = 0; g < n; ++g) {
    require(action.perm[g].size() == n_points,
            "action: permutation for " + group.elements[g] + " has " +
                std::to_string(action.perm[g].size()) + " entries, expected " +
                std::to_string(n_points));
    for (std::size_t x = 0; x < n_points; ++x) {
      require(action.perm[g][x] < n_points,
              "action: " + group.elements[g] + " maps point " +
                  std::to_string(x) + " out of range");
    }
  }

  ValidationReport report;
  for (std::size_t x = 0; x < n_points; ++x) {
    if (action.perm[group.identity][x] != x) {
      report.add("action.identity",
                 group.elements[group.identity] + " moves point " +
                     std::to_string(x) + " to " +
                     std::to_string(action.perm[group.identity][x]));
    }
  }
  for (std::size_t g = 0; g < n; ++g) {
    std::vector<bool> hit(n_points, false);
    bool bijective = true;
    for (std::size_t x = 0; x < n_points; ++x) {
      if (hit[action.perm[g][x]]) {
        bijective = false;
        break;
      }
      hit[action.perm[g][x]] = true;
    }
    if (!bijective) {
      report.add("action.bijective",
                 group.elements[g] + " does not act by a permutation");
    }
  }
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t h = 0; h < n; ++h) {
      const std::size_t gh = group.mul(g, h);
      for (std::size_t x = 0; x < n_points; ++x) {
        if (action.perm[g][action.perm[h][x]] != action.perm[gh][x]) {
          report.add("action.compose",
                     "(" + group.elements[g] + "*" + group.elements[h] +
                         ") and " + group.elements[g] + " after " +
                         group.elements[h] + " disagree at point " +
                         std::to_string(x));
        }
      }
    }
  }
  return report;
}

ValidationReport check_invariance(const FiniteMetric& m,
                                  const FiniteGroup& group,
                                  const GroupAction& action) {
  ValidationReport report;
  const std::size_t n = m.size();
  for (std::size_t g = 0; g < group.size(); ++g) {
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = x + 1; y < n; ++y) {
        const std::size_t gx = action.apply(g, x);
        const std::size_t gy = action.apply(g, y);
        if (m.at(gx, gy) != m.at(x, y)) {
          report.add("invariance",
                     "d(" + idx_name(m.points, gx) + "," +
                         idx_name(m.points, gy) + ") = " +
                         rat_str(m.at(gx, gy)) + " != d(" +
                         idx_name(m.points, x) + "," + idx_name(m.points, y) +
                         ") = " + rat_str(m.at(x, y)) + " under " +
                         group.elements[g]);
        }
      }
    }
  }
  return report;
}

ValidationReport check_equivariance(const EquivariantMap& f) {
  require(f.source.group.same_structure(f.target.group),
          "equivariant map: source and target carry different groups");
  require(f.image.size() == f.source.space.size(),
          "equivariant map: image has " + std::to_string(f.image.size()) +
              " entries for " + std::to_string(f.source.space.size()) +
              " source points");
  for (std::size_t x = 0; x < f.image.size(); ++x) {
    require(f.image[x] < f.target.space.size(),
            "equivariant map: image of " + f.source.space.points[x] +
                " out of range");
  }

  ValidationReport report;
  for (std::size_t g = 0; g < f.source.group.size(); ++g) {
    for (std::size_t x = 0; x < f.image.size(); ++x) {
      const std::size_t lhs = f.image[f.source.action.apply(g, x)];
      const std::size_t rhs = f.target.action.apply(g, f.image[x]);
      if (lhs != rhs) {
        report.add("equivariance",
                   "f(" + f.source.group.elements[g] + "·" +
                       f.source.space.points[x] + ") = " +
                       f.target.space.points[lhs] + " but " +
                       f.source.group.elements[g] + "·f(" +
                       f.source.space.points[x] + ") = " +
                       f.target.space.points[rhs]);
      }
    }
  }
  return report;
}

FiniteMetric pullback_pseudometric(const EquivariantMap& f,
                                   const FiniteMetric& rho_y) {
  require(rho_y.size() == f.target.space.size(),
          "pullback: pseudometric size does not match the target space");
  FiniteMetric mu;
  mu.points = f.source.space.points;
  const std::size_t n = mu.points.size();
  mu.dist.assign(n, std::vector<Rat>(n, Rat(0)));
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      mu.dist[x][y] = rho_y.at(f.image[x], f.image[y]);
    }
  }
  return mu;
}

bool pseudometric_leq(const FiniteMetric& mu, const FiniteMetric& mu2) {
  require(mu.size() == mu2.size(), "pseudometric order: size mismatch");
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < mu.size(); ++j) {
      if (mu.dist[i][j] > mu2.dist[i][j]) return false;
    }
  }
  return true;
}

FiniteMetric pseudometric_join(const FiniteMetric& mu,
                               const FiniteMetric& mu2) {
  require(mu.size() == mu2.size(), "pseudometric join: size mismatch");
  FiniteMetric out = mu;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < mu.size(); ++j) {
      if (mu2.dist[i][j] > out.dist[i][j]) out.dist[i][j] = mu2.dist[i][j];
    }
  }
  return out;
}

std::vector<std::size_t> fixed_point_set(const FiniteGroup& group,
                                         const GroupAction& action,
                                         std::size_t n_points) {
  // Fixed by all generators iff fixed by the whole group; fall back to all
  // elements when no generator set is recorded.
  std::vector<std::size_t> movers;
  if (!group.generators.empty()) {
    movers = group.generators;
  } else {
    movers.resize(group.size());
    for (std::size_t g = 0; g < group.size(); ++g) movers[g] = g;
  }
  std::vector<std::size_t> fixed;
  for (std::size_t x = 0; x < n_points; ++x) {
    bool ok = true;
    for (std::size_t g : movers) {
      if (action.apply(g, x) != x) {
        ok = false;
        break;
      }
    }
    if (ok) fixed.push_back(x);
  }
  return fixed;
}

std::size_t PseudometricFamily::add(std::string name, FiniteMetric m) {
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i].same_entries(m)) return i;
  }
  names.push_back(std::move(name));
  members.push_back(std::move(m));
  return members.size() - 1;
}

std::optional<std::size_t> PseudometricFamily::index_of(
    std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  return std::nullopt;
}

ValidationReport validate_family(const PseudometricFamily& family,
                                 const FiniteGSpace& x) {
  ValidationReport report;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& mu = family.members[i];
    if (mu.size() != x.space.size()) {
      report.add("family.size", "pseudometric \"" + family.names[i] +
                                    "\" covers " + std::to_string(mu.size()) +
                                    " points, expected " +
                                    std::to_string(x.space.size()));
      continue;
    }
    report.merge(validate_metric(mu, MetricMode::Pseudometric),
                 "pseudometric \"" + family.names[i] + "\"");
    report.merge(check_invariance(mu, x.group, x.action),
                 "pseudometric \"" + family.names[i] + "\"");
  }
  return report;
}

}  // namespace ae
