#include "ae/norm.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ae {

Rat TransportPlan::cost(const FiniteMetric& metric) const {
  Rat total = 0;
  for (const auto& mv : moves) total += mv.mass * metric.at(mv.from, mv.to);
  return total;
}

std::map<std::size_t, Rat> TransportPlan::divergence() const {
  std::map<std::size_t, Rat> div;
  for (const auto& mv : moves) {
    div[mv.from] += mv.mass;
    div[mv.to] -= mv.mass;
  }
  for (auto it = div.begin(); it != div.end();) {
    it = (it->second == 0) ? div.erase(it) : std::next(it);
  }
  return div;
}

namespace {

struct Cell {
  std::size_t i = 0;
  std::size_t j = 0;
};

// Exact transportation simplex on the complete bipartite graph between the
// positive part (rows, supplies a) and negative part (columns, demands b).
// Bland's rule on the cell id i*q+j picks both the entering arc (smallest id
// with negative reduced cost) and the leaving arc (smallest id among the
// minimum-ratio ties), which rules out cycling even on degenerate bases.
struct Simplex {
  std::size_t p = 0;
  std::size_t q = 0;
  std::vector<Rat> a;
  std::vector<Rat> b;
  std::vector<std::vector<Rat>> c;
  std::vector<std::vector<Rat>> x;
  std::vector<std::vector<char>> basic;
  std::vector<Rat> alpha;
  std::vector<Rat> beta;

  // Northwest-corner start: exactly p+q-1 basic cells forming a spanning
  // tree of the bipartite node set (degenerate zero cells allowed).
  void init_northwest() {
    x.assign(p, std::vector<Rat>(q, Rat(0)));
    basic.assign(p, std::vector<char>(q, 0));
    std::vector<Rat> ra = a;
    std::vector<Rat> rb = b;
    std::size_t i = 0;
    std::size_t j = 0;
    while (true) {
      const Rat t = std::min(ra[i], rb[j]);
      x[i][j] = t;
      basic[i][j] = 1;
      ra[i] -= t;
      rb[j] -= t;
      if (i == p - 1 && j == q - 1) break;
      if (ra[i] == 0 && i < p - 1) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  // Solves alpha_i + beta_j = c_ij over the basis tree, rooted at row 0.
  void compute_duals() {
    alpha.assign(p, Rat(0));
    beta.assign(q, Rat(0));
    std::vector<char> seen(p + q, 0);
    std::deque<std::size_t> queue{0};
    seen[0] = 1;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      if (u < p) {
        for (std::size_t jj = 0; jj < q; ++jj) {
          if (basic[u][jj] && !seen[p + jj]) {
            beta[jj] = c[u][jj] - alpha[u];
            seen[p + jj] = 1;
            queue.push_back(p + jj);
          }
        }
      } else {
        const std::size_t jj = u - p;
        for (std::size_t ii = 0; ii < p; ++ii) {
          if (basic[ii][jj] && !seen[ii]) {
            alpha[ii] = c[ii][jj] - beta[jj];
            seen[ii] = 1;
            queue.push_back(ii);
          }
        }
      }
    }
  }

  // One Bland pivot; false means the current basis is optimal (and the duals
  // are left matching it).
  bool pivot_once() {
    compute_duals();
    std::size_t ei = p;
    std::size_t ej = q;
    for (std::size_t i = 0; i < p && ei == p; ++i) {
      for (std::size_t j = 0; j < q; ++j) {
        if (!basic[i][j] && c[i][j] - alpha[i] - beta[j] < 0) {
          ei = i;
          ej = j;
          break;
        }
      }
    }
    if (ei == p) return false;

    // Unique tree path from row ei to column ej.
    std::vector<std::size_t> parent(p + q, p + q);
    std::vector<char> seen(p + q, 0);
    std::deque<std::size_t> queue{ei};
    seen[ei] = 1;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      if (u < p) {
        for (std::size_t jj = 0; jj < q; ++jj) {
          if (basic[u][jj] && !seen[p + jj]) {
            parent[p + jj] = u;
            seen[p + jj] = 1;
            queue.push_back(p + jj);
          }
        }
      } else {
        const std::size_t jj = u - p;
        for (std::size_t ii = 0; ii < p; ++ii) {
          if (basic[ii][jj] && !seen[ii]) {
            parent[ii] = u;
            seen[ii] = 1;
            queue.push_back(ii);
          }
        }
      }
    }

    // Alternating cycle: the entering cell, then the path edges walked back
    // from the column end. Even positions gain theta, odd positions lose it.
    std::vector<Cell> cycle{{ei, ej}};
    std::size_t node = p + ej;
    while (node != ei) {
      const std::size_t up = parent[node];
      if (node >= p) {
        cycle.push_back({up, node - p});
      } else {
        cycle.push_back({node, up - p});
      }
      node = up;
    }

    std::size_t leave = 0;
    for (std::size_t k = 1; k < cycle.size(); k += 2) {
      if (leave == 0) {
        leave = k;
        continue;
      }
      const Cell& cand = cycle[k];
      const Cell& best = cycle[leave];
      const Rat& xc = x[cand.i][cand.j];
      const Rat& xb = x[best.i][best.j];
      if (xc < xb || (xc == xb && cand.i * q + cand.j < best.i * q + best.j)) {
        leave = k;
      }
    }
    const Rat theta = x[cycle[leave].i][cycle[leave].j];
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      if (k % 2 == 0) {
        x[cycle[k].i][cycle[k].j] += theta;
      } else {
        x[cycle[k].i][cycle[k].j] -= theta;
      }
    }
    basic[ei][ej] = 1;
    basic[cycle[leave].i][cycle[leave].j] = 0;
    return true;
  }

  void run() {
    init_northwest();
    for (std::size_t iter = 0; iter < 1000000; ++iter) {
      if (!pivot_once()) return;
    }
    throw std::logic_error("internal: transportation simplex did not stop");
  }
};

void check_molecule_shape(const Molecule& m, const BasedSpace& b,
                          const char* who) {
  Rat total = 0;
  for (const auto& [pt, coeff] : m.coeffs) {
    if (pt >= b.size()) {
      throw std::invalid_argument(std::string(who) +
                                  ": molecule point index out of range");
    }
    total += coeff;
  }
  if (total != 0) {
    throw std::invalid_argument(std::string(who) +
                                ": molecule coefficients sum to " +
                                rat_str(total));
  }
}

}  // namespace

NormResult norm(const Molecule& m, const BasedSpace& b) {
  check_molecule_shape(m, b, "norm");
  NormResult out;
  out.value = 0;
  if (m.is_zero()) return out;

  std::vector<std::size_t> src;
  std::vector<std::size_t> snk;
  for (const auto& [pt, coeff] : m.coeffs) {
    (coeff > 0 ? src : snk).push_back(pt);
  }

  if (src.size() == 1 && snk.size() == 1) {
    const Rat mass = m.coeffs.at(src[0]);
    const Rat d = b.metric.at(src[0], snk[0]);
    out.value = mass * d;
    out.plan.moves.push_back({src[0], snk[0], mass});
    out.potential[src[0]] = d;
    out.potential[snk[0]] = 0;
    return out;
  }

  Simplex sx;
  sx.p = src.size();
  sx.q = snk.size();
  sx.a.reserve(sx.p);
  sx.b.reserve(sx.q);
  for (std::size_t i = 0; i < sx.p; ++i) sx.a.push_back(m.coeffs.at(src[i]));
  for (std::size_t j = 0; j < sx.q; ++j) sx.b.push_back(-m.coeffs.at(snk[j]));
  sx.c.assign(sx.p, std::vector<Rat>(sx.q, Rat(0)));
  for (std::size_t i = 0; i < sx.p; ++i) {
    for (std::size_t j = 0; j < sx.q; ++j) {
      sx.c[i][j] = b.metric.at(src[i], snk[j]);
    }
  }
  sx.run();

  for (std::size_t i = 0; i < sx.p; ++i) {
    for (std::size_t j = 0; j < sx.q; ++j) {
      if (sx.x[i][j] != 0) {
        out.plan.moves.push_back({src[i], snk[j], sx.x[i][j]});
        out.value += sx.x[i][j] * sx.c[i][j];
      }
    }
  }

  // Dual witness: u(x) = min_j (d(x, z_j) - beta_j) is a minimum of
  // 1-Lipschitz functions, so 1-Lipschitz; it pairs with the molecule to
  // exactly the optimum because u >= alpha on sources and u <= -beta on
  // sinks while the optimal flow saturates both. Shift so min over the
  // support is zero (pairing is shift-invariant, the sum being zero).
  for (const auto& [pt, coeff] : m.coeffs) {
    std::optional<Rat> best;
    for (std::size_t j = 0; j < sx.q; ++j) {
      const Rat v = b.metric.at(pt, snk[j]) - sx.beta[j];
      if (!best || v < *best) best = v;
    }
    out.potential.emplace(pt, *best);
  }
  Rat low = out.potential.begin()->second;
  for (const auto& [pt, v] : out.potential) {
    if (v < low) low = v;
  }
  if (low != 0) {
    for (auto& [pt, v] : out.potential) v -= low;
  }
  return out;
}

namespace {

// Cost of the unique flow with the molecule's divergence supported on the
// given spanning tree of the complete graph on all based points.
Rat tree_flow_cost(const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                   const Molecule& m, const FiniteMetric& metric,
                   std::size_t n) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<Rat> excess(n, Rat(0));
  for (const auto& [pt, coeff] : m.coeffs) excess[pt] = coeff;

  std::vector<std::size_t> parent(n, n);
  std::vector<std::size_t> order;
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    order.push_back(u);
    for (const std::size_t w : adj[u]) {
      if (!seen[w]) {
        seen[w] = 1;
        parent[w] = u;
        stack.push_back(w);
      }
    }
  }

  Rat total = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t u = *it;
    if (u == 0) continue;
    const Rat flow = excess[u] < 0 ? Rat(-excess[u]) : excess[u];
    total += flow * metric.at(u, parent[u]);
    excess[parent[u]] += excess[u];
  }
  return total;
}

std::vector<std::pair<std::size_t, std::size_t>> tree_from_pruefer(
    const std::vector<std::size_t>& seq, std::size_t n) {
  std::vector<std::size_t> degree(n, 1);
  for (const std::size_t s : seq) ++degree[s];
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  edges.reserve(n - 1);
  std::vector<char> used(n, 0);
  for (const std::size_t s : seq) {
    for (std::size_t leaf = 0; leaf < n; ++leaf) {
      if (!used[leaf] && degree[leaf] == 1) {
        edges.emplace_back(leaf, s);
        used[leaf] = 1;
        --degree[s];
        break;
      }
    }
  }
  std::size_t first = n;
  for (std::size_t v = 0; v < n; ++v) {
    if (!used[v] && degree[v] == 1) {
      if (first == n) {
        first = v;
      } else {
        edges.emplace_back(first, v);
        break;
      }
    }
  }
  return edges;
}

}  // namespace

Rat brute_force_norm(const Molecule& m, const BasedSpace& b,
                     std::size_t support_cap, std::size_t point_cap) {
  check_molecule_shape(m, b, "oracle");
  if (m.coeffs.size() > support_cap) {
    throw std::invalid_argument(
        "oracle: support size " + std::to_string(m.coeffs.size()) +
        " exceeds the cap of " + std::to_string(support_cap));
  }
  const std::size_t n = b.size();
  if (n > point_cap) {
    throw std::invalid_argument("oracle: " + std::to_string(n) +
                                " points exceed the cap of " +
                                std::to_string(point_cap));
  }
  if (m.is_zero()) return 0;

  // Minimum over every labeled spanning tree of the complete graph on all
  // based points (Pruefer enumeration); some optimal flow is acyclic, so
  // the minimum over trees is the true minimum-cost flow. Routing through
  // points outside the support is allowed, which makes this a genuinely
  // independent check on the bipartite simplex.
  if (n == 2) {
    return tree_flow_cost({{0, 1}}, m, b.metric, n);
  }
  std::optional<Rat> best;
  std::vector<std::size_t> seq(n - 2, 0);
  while (true) {
    const Rat v = tree_flow_cost(tree_from_pruefer(seq, n), m, b.metric, n);
    if (!best || v < *best) best = v;
    std::size_t k = 0;
    while (k < seq.size() && seq[k] == n - 1) {
      seq[k] = 0;
      ++k;
    }
    if (k == seq.size()) break;
    ++seq[k];
  }
  return *best;
}

std::pair<Rat, std::size_t> distance_to_image(const Molecule& m,
                                              const BasedSpace& b) {
  check_molecule_shape(m, b, "distance_to_image");
  std::optional<Rat> best;
  std::size_t arg = 0;
  for (std::size_t pt = 0; pt < b.n_underlying; ++pt) {
    const Molecule diff = combine(Rat(1), m, Rat(-1), embed(pt, b));
    Rat v = norm(diff, b).value;
    if (!best || v < *best) {
      best = std::move(v);
      arg = pt;
    }
  }
  if (!best) {
    throw std::invalid_argument("distance_to_image: no underlying points");
  }
  return {*best, arg};
}

ValidationReport verify_certificate(const Molecule& m, const NormResult& r,
                                    const BasedSpace& b) {
  ValidationReport report;
  if (r.value < 0) {
    report.add("certificate.value",
               "norm value " + rat_str(r.value) + " is negative");
  }

  for (const auto& mv : r.plan.moves) {
    if (mv.from >= b.size() || mv.to >= b.size()) {
      report.add("certificate.move", "move endpoint out of range");
    } else if (mv.from == mv.to) {
      report.add("certificate.move",
                 "move from " + b.metric.points[mv.from] + " to itself");
    }
    if (mv.mass <= 0) {
      report.add("certificate.move",
                 "move with nonpositive mass " + rat_str(mv.mass));
    }
  }
  if (report.ok()) {
    if (r.plan.divergence() != m.coeffs) {
      report.add("certificate.divergence",
                 "plan divergence does not reproduce the molecule");
    }
    if (r.plan.cost(b.metric) != r.value) {
      report.add("certificate.cost",
                 "plan cost " + rat_str(r.plan.cost(b.metric)) +
                     " != claimed value " + rat_str(r.value));
    }
  }

  bool keys_match = r.potential.size() == m.coeffs.size();
  if (keys_match) {
    auto it = m.coeffs.begin();
    for (const auto& [pt, v] : r.potential) {
      if (it->first != pt) {
        keys_match = false;
        break;
      }
      ++it;
    }
  }
  if (!keys_match) {
    report.add("certificate.support",
               "potential is not keyed by exactly the support");
    return report;
  }

  for (auto it = r.potential.begin(); it != r.potential.end(); ++it) {
    for (auto jt = std::next(it); jt != r.potential.end(); ++jt) {
      const Rat gap =
          it->second >= jt->second ? it->second - jt->second
                                   : jt->second - it->second;
      if (gap > b.metric.at(it->first, jt->first)) {
        report.add("certificate.lipschitz",
                   "|u(" + b.metric.points[it->first] + ") - u(" +
                       b.metric.points[jt->first] + ")| = " + rat_str(gap) +
                       " > d = " +
                       rat_str(b.metric.at(it->first, jt->first)));
      }
    }
  }

  Rat pairing = 0;
  for (const auto& [pt, coeff] : m.coeffs) {
    pairing += coeff * r.potential.at(pt);
  }
  if (pairing != r.value) {
    report.add("certificate.pairing",
               "potential pairs to " + rat_str(pairing) +
                   ", expected the value " + rat_str(r.value));
  }
  return report;
}

}  // namespace ae
