#include "ae/quotient.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ae {

namespace {

struct UnionFind {
  std::vector<std::size_t> up;

  explicit UnionFind(std::size_t n) : up(n) {
    std::iota(up.begin(), up.end(), std::size_t{0});
  }
  std::size_t find(std::size_t v) {
    while (up[v] != v) {
      up[v] = up[up[v]];
      v = up[v];
    }
    return v;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Keep the least index as the root so representatives are canonical.
    if (b < a) std::swap(a, b);
    up[b] = a;
  }
};

}  // namespace

Quotient make_quotient(const FiniteGSpace& x, const FiniteMetric& mu) {
  const std::size_t n = x.space.size();
  if (mu.size() != n) {
    throw std::invalid_argument("quotient: pseudometric covers " +
                                std::to_string(mu.size()) +
                                " points, expected " + std::to_string(n));
  }
  if (const auto r = validate_metric(mu, MetricMode::Pseudometric); !r.ok()) {
    throw std::invalid_argument("quotient: not a pseudometric: " + r.summary());
  }
  if (const auto r = check_invariance(mu, x.group, x.action); !r.ok()) {
    throw std::invalid_argument("quotient: pseudometric is not invariant: " +
                                r.summary());
  }

  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (mu.at(i, j) == 0) uf.unite(i, j);
    }
  }

  QuotientMap map;
  map.assignment.assign(n, 0);
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::size_t> class_of_root(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = uf.find(i);
    if (class_of_root[root] == n) {
      class_of_root[root] = classes.size();
      classes.push_back({});
    }
    map.assignment[i] = class_of_root[root];
    classes[class_of_root[root]].push_back(i);
  }
  // Points are scanned in increasing order, so each class lists sorted
  // members with the least index (the representative) first, and classes
  // appear in representative order.

  // Transitivity of the glued relation is forced by the triangle
  // inequality; verify rather than assume, covering the diagonal pairs.
  const std::size_t k = classes.size();
  for (std::size_t ci = 0; ci < k; ++ci) {
    for (std::size_t cj = ci; cj < k; ++cj) {
      const Rat& expected = mu.at(classes[ci][0], classes[cj][0]);
      for (const std::size_t a : classes[ci]) {
        for (const std::size_t b : classes[cj]) {
          if (mu.at(a, b) != expected) {
            throw std::logic_error(
                "internal: class distance is not well defined between " +
                x.space.points[a] + " and " + x.space.points[b]);
          }
        }
      }
    }
  }

  QuotientSpace space;
  space.classes = classes;
  space.gspace.group = x.group;
  space.gspace.space.points.reserve(k);
  for (std::size_t ci = 0; ci < k; ++ci) {
    space.gspace.space.points.push_back("[" +
                                        x.space.points[classes[ci][0]] + "]");
  }
  space.gspace.space.dist.assign(k, std::vector<Rat>(k, Rat(0)));
  for (std::size_t ci = 0; ci < k; ++ci) {
    for (std::size_t cj = 0; cj < k; ++cj) {
      space.gspace.space.dist[ci][cj] = mu.at(classes[ci][0], classes[cj][0]);
    }
  }

  // Induced action: g[x] = [gx]; invariance of mu makes this independent of
  // the member chosen, which is again verified exhaustively.
  space.gspace.action.perm.assign(x.group.size(), std::vector<std::size_t>(k));
  for (std::size_t g = 0; g < x.group.size(); ++g) {
    for (std::size_t ci = 0; ci < k; ++ci) {
      const std::size_t target = map.assignment[x.action.apply(g, classes[ci][0])];
      for (const std::size_t a : classes[ci]) {
        if (map.assignment[x.action.apply(g, a)] != target) {
          throw std::logic_error(
              "internal: induced action is not well defined at class " +
              space.gspace.space.points[ci] + " under " + x.group.elements[g]);
        }
      }
      space.gspace.action.perm[g][ci] = target;
    }
  }

  Quotient q;
  q.mu = mu;
  q.space = std::move(space);
  q.map = std::move(map);
  return q;
}

BondMap make_bond(const Quotient& coarse, const Quotient& fine) {
  const std::size_t n = fine.map.assignment.size();
  if (coarse.map.assignment.size() != n) {
    throw std::invalid_argument(
        "bond: quotients do not share an underlying point set");
  }
  if (!pseudometric_leq(coarse.mu, fine.mu)) {
    throw std::invalid_argument(
        "bond: the target pseudometric is not entrywise below the source's, "
        "so the projection is not defined");
  }

  const std::size_t kf = fine.space.classes.size();
  BondMap bond;
  bond.assignment.assign(kf, 0);
  for (std::size_t cf = 0; cf < kf; ++cf) {
    const std::size_t target = coarse.map.assignment[fine.space.classes[cf][0]];
    for (const std::size_t a : fine.space.classes[cf]) {
      if (coarse.map.assignment[a] != target) {
        throw std::logic_error(
            "internal: projection is not constant on class " +
            fine.space.gspace.space.points[cf]);
      }
    }
    bond.assignment[cf] = target;
  }

  // Distance-nonincreasing and equivariant; re-verify both exhaustively.
  for (std::size_t c1 = 0; c1 < kf; ++c1) {
    for (std::size_t c2 = 0; c2 < kf; ++c2) {
      if (coarse.space.gspace.space.at(bond.assignment[c1],
                                       bond.assignment[c2]) >
          fine.space.gspace.space.at(c1, c2)) {
        throw std::logic_error("internal: projection expands the distance " +
                               fine.space.gspace.space.points[c1] + " to " +
                               fine.space.gspace.space.points[c2]);
      }
    }
  }
  for (std::size_t g = 0; g < fine.space.gspace.group.size(); ++g) {
    for (std::size_t cf = 0; cf < kf; ++cf) {
      const std::size_t lhs =
          bond.assignment[fine.space.gspace.action.apply(g, cf)];
      const std::size_t rhs =
          coarse.space.gspace.action.apply(g, bond.assignment[cf]);
      if (lhs != rhs) {
        throw std::logic_error("internal: projection is not equivariant at " +
                               fine.space.gspace.space.points[cf] + " under " +
                               fine.space.gspace.group.elements[g]);
      }
    }
  }
  return bond;
}

Factorization factorize(const EquivariantMap& f, const FiniteMetric& rho_y) {
  if (const auto r = check_equivariance(f); !r.ok()) {
    throw std::invalid_argument("factorize: map is not equivariant: " +
                                r.summary());
  }
  if (rho_y.size() != f.target.space.size()) {
    throw std::invalid_argument(
        "factorize: target metric size does not match the target space");
  }
  if (const auto r = validate_metric(rho_y, MetricMode::Metric); !r.ok()) {
    throw std::invalid_argument(
        "factorize: the target distance must be a genuine metric so the "
        "induced map is injective: " +
        r.summary());
  }
  if (const auto r = check_invariance(rho_y, f.target.group, f.target.action);
      !r.ok()) {
    throw std::invalid_argument("factorize: target metric is not invariant: " +
                                r.summary());
  }

  Factorization out;
  out.mu = pullback_pseudometric(f, rho_y);
  out.quotient = make_quotient(f.source, out.mu);

  const auto& classes = out.quotient.space.classes;
  out.phi.assign(classes.size(), 0);
  for (std::size_t ci = 0; ci < classes.size(); ++ci) {
    out.phi[ci] = f.image[classes[ci][0]];
  }

  // phi must close the triangle (phi∘p = f), be injective, and carry class
  // distances to target distances exactly. All three are consequences of
  // the construction; verify them anyway.
  for (std::size_t x = 0; x < f.image.size(); ++x) {
    if (out.phi[out.quotient.map.assignment[x]] != f.image[x]) {
      throw std::logic_error(
          "internal: factorization does not reproduce the map at " +
          f.source.space.points[x]);
    }
  }
  for (std::size_t c1 = 0; c1 < classes.size(); ++c1) {
    for (std::size_t c2 = 0; c2 < classes.size(); ++c2) {
      if (out.quotient.space.gspace.space.at(c1, c2) !=
          rho_y.at(out.phi[c1], out.phi[c2])) {
        throw std::logic_error(
            "internal: induced map is not isometric onto its image");
      }
      if (c1 != c2 && out.phi[c1] == out.phi[c2]) {
        throw std::logic_error("internal: induced map is not injective");
      }
    }
  }
  return out;
}

}  // namespace ae
