#pragma once

#include <initializer_list>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ae/gspace.hpp"
#include "ae/molecule.hpp"
#include "ae/rational.hpp"

namespace tst {

inline ae::FiniteMetric make_metric(std::vector<std::string> points,
                                    std::vector<std::vector<std::string>> d) {
  ae::FiniteMetric m;
  m.points = std::move(points);
  m.dist.reserve(d.size());
  for (const auto& row : d) {
    std::vector<ae::Rat> out;
    out.reserve(row.size());
    for (const auto& v : row) out.push_back(ae::rat_parse(v));
    m.dist.push_back(std::move(out));
  }
  return m;
}

// Path metric a-b-c with unit edges, Z2 swapping a and c.
inline ae::FiniteGSpace x3_swap() {
  ae::FiniteGSpace x;
  x.space = make_metric({"a", "b", "c"},
                        {{"0", "1", "2"}, {"1", "0", "1"}, {"2", "1", "0"}});
  auto gg = ae::group_from_generators({{2, 1, 0}}, 3);
  x.group = std::move(gg.group);
  x.action = std::move(gg.action);
  return x;
}

// Equilateral triangle with the rotation Z3.
inline ae::FiniteGSpace x3_rot() {
  ae::FiniteGSpace x;
  x.space = make_metric({"a", "b", "c"},
                        {{"0", "1", "1"}, {"1", "0", "1"}, {"1", "1", "0"}});
  auto gg = ae::group_from_generators({{1, 2, 0}}, 3);
  x.group = std::move(gg.group);
  x.action = std::move(gg.action);
  return x;
}

// Equilateral triangle with the full S3.
inline ae::FiniteGSpace x3_s3() {
  ae::FiniteGSpace x;
  x.space = make_metric({"a", "b", "c"},
                        {{"0", "1", "1"}, {"1", "0", "1"}, {"1", "1", "0"}});
  auto gg = ae::group_from_generators({{1, 0, 2}, {1, 2, 0}}, 3);
  x.group = std::move(gg.group);
  x.action = std::move(gg.action);
  return x;
}

// Two points at distance 1 with the swap (no fixed points).
inline ae::FiniteGSpace x2_swap() {
  ae::FiniteGSpace x;
  x.space = make_metric({"a", "b"}, {{"0", "1"}, {"1", "0"}});
  auto gg = ae::group_from_generators({{1, 0}}, 2);
  x.group = std::move(gg.group);
  x.action = std::move(gg.action);
  return x;
}

// Unit 4-cycle with the rotation Z4.
inline ae::FiniteGSpace x4_cycle() {
  ae::FiniteGSpace x;
  x.space = make_metric({"p0", "p1", "p2", "p3"},
                        {{"0", "1", "2", "1"},
                         {"1", "0", "1", "2"},
                         {"2", "1", "0", "1"},
                         {"1", "2", "1", "0"}});
  auto gg = ae::group_from_generators({{1, 2, 3, 0}}, 4);
  x.group = std::move(gg.group);
  x.action = std::move(gg.action);
  return x;
}

// One point, trivial group.
inline ae::FiniteGSpace x1() {
  ae::FiniteGSpace x;
  x.space = make_metric({"p"}, {{"0"}});
  auto gg = ae::group_from_generators({}, 1);
  x.group = std::move(gg.group);
  x.action = std::move(gg.action);
  return x;
}

inline ae::Molecule mol(
    std::initializer_list<std::pair<std::size_t, std::string>> coeffs,
    const ae::BasedSpace& b) {
  std::map<std::size_t, ae::Rat> raw;
  for (const auto& [i, s] : coeffs) raw[i] = ae::rat_parse(s);
  return ae::make_molecule(raw, b);
}

}  // namespace tst
