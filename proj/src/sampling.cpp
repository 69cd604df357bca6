#include "ae/sampling.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace ae {

std::vector<Molecule> sample_molecules(const BasedSpace& b, std::size_t count,
                                       std::uint64_t seed) {
  // Draws come from the engine itself via modulo rather than a distribution
  // adapter, because the standard distributions are allowed to differ
  // between library implementations and the samples must be reproducible
  // everywhere from the seed alone.
  std::mt19937_64 rng(seed);
  const std::size_t n = b.size();
  const Rat palette[6] = {Rat(1),  Rat(-1),      Rat(2),
                          Rat(-2), Rat(1, 2),    Rat(-1, 2)};

  std::vector<Molecule> out;
  out.reserve(count);
  for (std::size_t t = 0; t < count; ++t) {
    if (n < 2) {
      out.push_back({});
      continue;
    }
    Molecule m;
    for (int attempt = 0; attempt < 100 && m.is_zero(); ++attempt) {
      std::size_t k = 2 + static_cast<std::size_t>(rng() % 3);
      if (k > n) k = n;
      std::vector<std::size_t> pts;
      bool picked = true;
      for (std::size_t want = 0; want < k && picked; ++want) {
        picked = false;
        for (int tries = 0; tries < 100; ++tries) {
          const std::size_t cand = static_cast<std::size_t>(rng() % n);
          if (std::find(pts.begin(), pts.end(), cand) == pts.end()) {
            pts.push_back(cand);
            picked = true;
            break;
          }
        }
      }
      if (!picked) continue;
      std::map<std::size_t, Rat> coeffs;
      Rat sum = 0;
      for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const Rat& c = palette[rng() % 6];
        coeffs.emplace(pts[i], c);
        sum += c;
      }
      // The last point absorbs the negated sum; it may cancel to zero, in
      // which case the molecule simply has smaller support.
      coeffs.emplace(pts.back(), -sum);
      m = make_molecule(coeffs, b);
    }
    if (m.is_zero()) {
      m = make_molecule({{0, Rat(1)}, {1, Rat(-1)}}, b);
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace ae
