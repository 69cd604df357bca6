#include "ae/molecule.hpp"

#include <stdexcept>
#include <string>

namespace ae {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace

bool BasedSpace::basepoint_fixed() const {
  for (std::size_t g = 0; g < group.size(); ++g) {
    if (action.apply(g, basepoint) != basepoint) return false;
  }
  return true;
}

BasedSpace BasedSpace::adjoined(const FiniteGSpace& x) {
  const Rat diam = x.space.diameter();
  return adjoined(x, diam > 1 ? diam : Rat(1));
}

BasedSpace BasedSpace::adjoined(const FiniteGSpace& x, const Rat& c) {
  const std::size_t n = x.space.size();
  require(c > 0, "adjoined basepoint: distance c must be positive");
  require(2 * c >= x.space.diameter(),
          "adjoined basepoint: c = " + rat_str(c) +
              " is below half the diameter " + rat_str(x.space.diameter()) +
              ", the triangle inequality would fail through *");

  BasedSpace b;
  b.metric.points = x.space.points;
  b.metric.points.push_back(kStarId);
  b.metric.dist.assign(n + 1, std::vector<Rat>(n + 1, c));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      b.metric.dist[i][j] = x.space.at(i, j);
    }
  }
  b.metric.dist[n][n] = 0;

  b.group = x.group;
  b.action.perm.assign(x.group.size(), {});
  for (std::size_t g = 0; g < x.group.size(); ++g) {
    b.action.perm[g] = x.action.perm[g];
    b.action.perm[g].push_back(n);  // * is fixed
  }
  b.mode = BasepointMode::Adjoined;
  b.basepoint = n;
  b.n_underlying = n;
  return b;
}

BasedSpace BasedSpace::internal(const FiniteGSpace& x, std::size_t basepoint,
                                bool allow_unfixed) {
  require(basepoint < x.space.size(),
          "internal basepoint: index out of range");
  BasedSpace b;
  b.metric = x.space;
  b.group = x.group;
  b.action = x.action;
  b.mode = BasepointMode::Internal;
  b.basepoint = basepoint;
  b.n_underlying = x.space.size();
  if (!allow_unfixed && !b.basepoint_fixed()) {
    throw std::invalid_argument(
        "internal basepoint \"" + x.space.points[basepoint] +
        "\" is moved by the group; pick a fixed point or use the adjoined "
        "basepoint");
  }
  return b;
}

Rat Molecule::at(std::size_t x) const {
  const auto it = coeffs.find(x);
  return it == coeffs.end() ? Rat(0) : it->second;
}

Molecule make_molecule(const std::map<std::size_t, Rat>& coeffs,
                       const BasedSpace& b) {
  Molecule m;
  Rat total = 0;
  for (const auto& [x, c] : coeffs) {
    require(x < b.size(), "molecule: point index " + std::to_string(x) +
                              " out of range");
    if (c != 0) m.coeffs.emplace(x, c);
    total += c;
  }
  require(total == 0,
          "molecule: coefficients sum to " + rat_str(total) + ", expected 0");
  return m;
}

Molecule embed(std::size_t x, const BasedSpace& b) {
  require(x < b.size(), "embed: point index out of range");
  require(b.mode == BasepointMode::Internal || x != b.basepoint,
          "embed: \"*\" is the formal basepoint, not an embeddable point");
  Molecule m;
  if (x != b.basepoint) {
    m.coeffs.emplace(x, Rat(1));
    m.coeffs.emplace(b.basepoint, Rat(-1));
  }
  return m;
}

Molecule combine(const Rat& alpha, const Molecule& m, const Rat& beta,
                 const Molecule& m2) {
  Molecule out;
  for (const auto& [x, c] : m.coeffs) {
    const Rat v = alpha * c;
    if (v != 0) out.coeffs.emplace(x, v);
  }
  for (const auto& [x, c] : m2.coeffs) {
    const Rat v = beta * c;
    if (v == 0) continue;
    const auto [it, fresh] = out.coeffs.emplace(x, v);
    if (!fresh) {
      it->second += v;
      if (it->second == 0) out.coeffs.erase(it);
    }
  }
  return out;
}

std::map<std::size_t, Rat> basis_decompose(const Molecule& m,
                                           const BasedSpace& b) {
  // m = sum_x m(x)·x with sum 0, so m = sum_{x != x0} m(x)·(x - x0).
  std::map<std::size_t, Rat> terms;
  for (const auto& [x, c] : m.coeffs) {
    if (x != b.basepoint) terms.emplace(x, c);
  }
  return terms;
}

Molecule from_decomposition(const std::map<std::size_t, Rat>& terms,
                            const BasedSpace& b) {
  Molecule out;
  Rat at_base = 0;
  for (const auto& [x, c] : terms) {
    require(x < b.size(), "decomposition: point index out of range");
    require(x != b.basepoint,
            "decomposition: the basepoint is not a basis element");
    if (c != 0) out.coeffs.emplace(x, c);
    at_base -= c;
  }
  if (at_base != 0) out.coeffs.emplace(b.basepoint, at_base);
  return out;
}

Molecule act(std::size_t g, const Molecule& m, const BasedSpace& b,
             ActionMode mode) {
  require(g < b.group.size(), "act: group element out of range");
  if (mode == ActionMode::Pushforward) {
    Molecule out;
    for (const auto& [x, c] : m.coeffs) {
      out.coeffs.emplace(b.action.apply(g, x), c);
    }
    return out;
  }
  // Literal basis transport: g·(x - x0) := (gx - x0) summed over the
  // decomposition. Identical to pushforward iff g fixes the basepoint.
  Molecule out;
  for (const auto& [x, c] : basis_decompose(m, b)) {
    const std::size_t gx = b.action.apply(g, x);
    if (gx == b.basepoint) continue;  // (x0 - x0) contributes nothing
    const auto [it, fresh] = out.coeffs.emplace(gx, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) out.coeffs.erase(it);
    }
  }
  Rat at_base = 0;
  for (const auto& [x, c] : out.coeffs) at_base -= c;
  if (at_base != 0) {
    const auto [it, fresh] = out.coeffs.emplace(b.basepoint, at_base);
    if (!fresh) {
      it->second += at_base;
      if (it->second == 0) out.coeffs.erase(it);
    }
  }
  return out;
}

Molecule pushforward_map(const EquivariantMap& f, const Molecule& m,
                         const BasedSpace& src, const BasedSpace& tgt) {
  require(src.mode == tgt.mode,
          "pushforward: source and target basepoint modes differ");
  // Extend the point map over "*" when the basepoints are formal.
  auto image_of = [&](std::size_t x) -> std::size_t {
    if (src.mode == BasepointMode::Adjoined && x == src.basepoint) {
      return tgt.basepoint;
    }
    require(x < f.image.size(), "pushforward: point outside the map's domain");
    return f.image[x];
  };
  if (src.mode == BasepointMode::Internal) {
    require(image_of(src.basepoint) == tgt.basepoint,
            "pushforward: the map does not send basepoint to basepoint");
  }
  Molecule out;
  for (const auto& [x, c] : m.coeffs) {
    const std::size_t fx = image_of(x);
    const auto [it, fresh] = out.coeffs.emplace(fx, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) out.coeffs.erase(it);
    }
  }
  return out;
}

namespace {

std::string molecule_str(const Molecule& m, const BasedSpace& b) {
  if (m.is_zero()) return "0";
  std::string out;
  for (const auto& [x, c] : m.coeffs) {
    if (!out.empty()) out += " ";
    out += rat_str(c) + "·" + b.metric.points[x];
  }
  return out;
}

}  // namespace

ValidationReport action_axiom_report(const BasedSpace& b, ActionMode mode,
                                     std::span<const Molecule> molecules) {
  ValidationReport report;
  const auto& grp = b.group;
  for (const auto& m : molecules) {
    const Molecule em = act(grp.identity, m, b, mode);
    if (!(em == m)) {
      report.add("molecule-action.identity",
                 "e·(" + molecule_str(m, b) + ") = " + molecule_str(em, b));
    }
    for (std::size_t g = 0; g < grp.size(); ++g) {
      for (std::size_t h = 0; h < grp.size(); ++h) {
        const Molecule lhs = act(g, act(h, m, b, mode), b, mode);
        const Molecule rhs = act(grp.mul(g, h), m, b, mode);
        if (!(lhs == rhs)) {
          report.add("molecule-action.compose",
                     grp.elements[g] + "·(" + grp.elements[h] + "·(" +
                         molecule_str(m, b) + ")) = " + molecule_str(lhs, b) +
                         " but (" + grp.elements[g] + "*" + grp.elements[h] +
                         ")·(" + molecule_str(m, b) + ") = " +
                         molecule_str(rhs, b));
        }
      }
    }
  }
  return report;
}

}  // namespace ae
