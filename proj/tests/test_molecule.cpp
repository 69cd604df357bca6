#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "ae/molecule.hpp"
#include "helpers.hpp"

using namespace ae;

TEST_CASE("adjoined basepoint policy") {
  const auto x = tst::x3_swap();
  const auto b = BasedSpace::adjoined(x);

  CHECK(b.size() == 4);
  CHECK(b.metric.points[3] == "*");
  CHECK(b.basepoint == 3);
  CHECK(b.n_underlying == 3);
  // c = max(1, diam) = 2 for the unit path.
  CHECK(b.metric.at(0, 3) == 2);
  CHECK(b.metric.at(3, 1) == 2);
  CHECK(validate_metric(b.metric, MetricMode::Metric).ok());
  CHECK(check_invariance(b.metric, b.group, b.action).ok());
  CHECK(b.basepoint_fixed());

  SUBCASE("small spaces get c = 1") {
    const auto b2 = BasedSpace::adjoined(tst::x2_swap());
    CHECK(b2.metric.at(0, 2) == 1);
    CHECK(validate_metric(b2.metric, MetricMode::Metric).ok());
  }
  SUBCASE("a custom c below half the diameter is refused") {
    CHECK_THROWS_AS(BasedSpace::adjoined(x, rat_parse("1/2")),
                    std::invalid_argument);
    // The boundary value c = diam/2 still satisfies the triangle inequality.
    const auto tight = BasedSpace::adjoined(x, Rat(1));
    CHECK(validate_metric(tight.metric, MetricMode::Metric).ok());
  }
}

TEST_CASE("internal basepoints must be fixed unless overridden") {
  const auto x = tst::x3_swap();
  const auto b = BasedSpace::internal(x, 1);
  CHECK(b.size() == 3);
  CHECK(b.basepoint_fixed());

  CHECK_THROWS_WITH_AS(BasedSpace::internal(x, 0),
                       doctest::Contains("moved by the group"),
                       std::invalid_argument);
  const auto probe = BasedSpace::internal(x, 0, true);
  CHECK_FALSE(probe.basepoint_fixed());
  CHECK_THROWS_AS(BasedSpace::internal(x, 9), std::invalid_argument);
}

TEST_CASE("molecule construction enforces the zero sum") {
  const auto b = BasedSpace::internal(tst::x3_swap(), 1);
  const auto m = tst::mol({{0, "1"}, {2, "1"}, {1, "-2"}}, b);
  CHECK(m.coeffs.size() == 3);
  CHECK(m.at(0) == 1);
  CHECK(m.at(1) == -2);

  SUBCASE("zero coefficients are pruned") {
    const auto p = tst::mol({{0, "1"}, {1, "-1"}, {2, "0"}}, b);
    CHECK(p.coeffs.size() == 2);
    CHECK(p.at(2) == 0);
  }
  SUBCASE("nonzero sums are rejected") {
    CHECK_THROWS_WITH_AS(tst::mol({{0, "1"}, {1, "-2"}}, b),
                         doctest::Contains("sum"), std::invalid_argument);
  }
  SUBCASE("out-of-range points are rejected") {
    CHECK_THROWS_AS(tst::mol({{7, "1"}, {1, "-1"}}, b), std::invalid_argument);
  }
}

TEST_CASE("the embedding x - basepoint") {
  const auto x = tst::x3_swap();
  const auto internal_b = BasedSpace::internal(x, 1);
  CHECK(embed(1, internal_b).is_zero());
  CHECK(embed(0, internal_b) == tst::mol({{0, "1"}, {1, "-1"}}, internal_b));

  const auto adj = BasedSpace::adjoined(x);
  CHECK(embed(0, adj) == tst::mol({{0, "1"}, {3, "-1"}}, adj));
  CHECK_THROWS_WITH_AS(embed(3, adj), doctest::Contains("formal basepoint"),
                       std::invalid_argument);
}

TEST_CASE("linear combinations") {
  const auto b = BasedSpace::internal(tst::x3_swap(), 1);
  const auto ma = embed(0, b);
  const auto mc = embed(2, b);

  CHECK(combine(Rat(1), ma, Rat(-1), ma).is_zero());
  CHECK(combine(Rat(1), ma, Rat(1), mc) ==
        tst::mol({{0, "1"}, {2, "1"}, {1, "-2"}}, b));
  CHECK(combine(Rat(2), ma, Rat(0), mc) ==
        tst::mol({{0, "2"}, {1, "-2"}}, b));
}

TEST_CASE("basis decomposition and reconstruction") {
  const auto b = BasedSpace::internal(tst::x3_swap(), 1);
  const auto m = tst::mol({{0, "1"}, {2, "1"}, {1, "-2"}}, b);

  const auto terms = basis_decompose(m, b);
  CHECK(terms.size() == 2);
  CHECK(terms.at(0) == 1);
  CHECK(terms.at(2) == 1);
  CHECK(from_decomposition(terms, b) == m);

  CHECK(basis_decompose(Molecule{}, b).empty());
  CHECK(from_decomposition({}, b).is_zero());

  SUBCASE("round trip over assorted molecules") {
    const std::vector<Molecule> ms = {
        tst::mol({{0, "1"}, {2, "-1"}}, b),
        tst::mol({{0, "1/2"}, {1, "-3/2"}, {2, "1"}}, b),
        embed(0, b),
        Molecule{},
    };
    for (const auto& mm : ms) {
      CHECK(from_decomposition(basis_decompose(mm, b), b) == mm);
    }
  }
  SUBCASE("the basepoint is not a basis element") {
    CHECK_THROWS_AS(from_decomposition({{1, Rat(1)}}, b),
                    std::invalid_argument);
  }
}

TEST_CASE("group action on molecules, both modes at a fixed basepoint") {
  const auto x = tst::x3_swap();
  const auto b = BasedSpace::internal(x, 1);
  const auto ma = embed(0, b);  // {a:1, b:-1}

  const auto swapped = act(1, ma, b, ActionMode::Pushforward);
  CHECK(swapped == tst::mol({{2, "1"}, {1, "-1"}}, b));
  CHECK(act(1, ma, b, ActionMode::Eq3Literal) == swapped);
  CHECK(act(0, ma, b) == ma);

  SUBCASE("the modes agree on every sample when the basepoint is fixed") {
    const std::vector<Molecule> ms = {
        ma,
        tst::mol({{0, "1"}, {2, "1"}, {1, "-2"}}, b),
        tst::mol({{0, "1/2"}, {2, "-1/2"}}, b),
        Molecule{},
    };
    for (const auto& m : ms) {
      for (std::size_t g = 0; g < b.group.size(); ++g) {
        CHECK(act(g, m, b, ActionMode::Pushforward) ==
              act(g, m, b, ActionMode::Eq3Literal));
      }
    }
  }
  SUBCASE("linearity of the action") {
    const auto mc = embed(2, b);
    for (std::size_t g = 0; g < b.group.size(); ++g) {
      CHECK(act(g, combine(Rat(2), ma, Rat(-3), mc), b) ==
            combine(Rat(2), act(g, ma, b), Rat(-3), act(g, mc, b)));
    }
  }
  SUBCASE("equivariance of the embedding") {
    const auto adj = BasedSpace::adjoined(x);
    for (std::size_t g = 0; g < adj.group.size(); ++g) {
      for (std::size_t pt = 0; pt < adj.n_underlying; ++pt) {
        CHECK(act(g, embed(pt, adj), adj) ==
              embed(adj.action.apply(g, pt), adj));
      }
    }
  }
}

TEST_CASE("literal basis transport fails the axioms at an unfixed basepoint") {
  // The boundary configuration: two swapped points, basepoint a.
  const auto x = tst::x2_swap();
  const auto b = BasedSpace::internal(x, 0, true);
  const auto m = tst::mol({{1, "1"}, {0, "-1"}}, b);  // b - a

  const auto once = act(1, m, b, ActionMode::Eq3Literal);
  CHECK(once.is_zero());  // g.b - a = a - a
  CHECK_FALSE(act(1, once, b, ActionMode::Eq3Literal) == m);

  const Molecule probe[] = {m};
  const auto report = action_axiom_report(b, ActionMode::Eq3Literal, probe);
  CHECK(report.has("molecule-action.compose"));

  // The pushforward on the same configuration is a genuine action.
  CHECK(action_axiom_report(b, ActionMode::Pushforward, probe).ok());
  // And the literal mode is fine once the basepoint is formal.
  const auto adj = BasedSpace::adjoined(x);
  const auto m2 = embed(1, adj);
  const Molecule probe2[] = {m2};
  CHECK(action_axiom_report(adj, ActionMode::Eq3Literal, probe2).ok());
}

TEST_CASE("pushforward along an equivariant map") {
  const auto x = tst::x3_swap();
  FiniteGSpace y;
  y.space = tst::make_metric({"u", "v"}, {{"0", "1"}, {"1", "0"}});
  y.group = x.group;
  y.action.perm = {{0, 1}, {0, 1}};
  const EquivariantMap f{x, y, {0, 1, 0}};
  REQUIRE(check_equivariance(f).ok());

  SUBCASE("internal basepoints must correspond") {
    const auto bx = BasedSpace::internal(x, 1);
    const auto by = BasedSpace::internal(y, 1);
    CHECK(pushforward_map(f, embed(0, bx), bx, by) ==
          tst::mol({{0, "1"}, {1, "-1"}}, by));
    CHECK(pushforward_map(f, tst::mol({{0, "1"}, {2, "-1"}}, bx), bx, by)
              .is_zero());
    // Every embedded point maps to the embedded image point.
    for (std::size_t pt = 0; pt < 3; ++pt) {
      CHECK(pushforward_map(f, embed(pt, bx), bx, by) ==
            embed(f.image[pt], by));
    }
    const auto bad = BasedSpace::internal(y, 0, true);
    CHECK_THROWS_WITH_AS(pushforward_map(f, embed(0, bx), bx, bad),
                         doctest::Contains("basepoint"),
                         std::invalid_argument);
  }
  SUBCASE("adjoined basepoints map star to star") {
    const auto bx = BasedSpace::adjoined(x);
    const auto by = BasedSpace::adjoined(y);
    for (std::size_t pt = 0; pt < 3; ++pt) {
      CHECK(pushforward_map(f, embed(pt, bx), bx, by) ==
            embed(f.image[pt], by));
    }
    CHECK(pushforward_map(f, tst::mol({{0, "1"}, {2, "-1"}}, bx), bx, by)
              .is_zero());
  }
  SUBCASE("linearity of the pushforward") {
    const auto bx = BasedSpace::adjoined(x);
    const auto by = BasedSpace::adjoined(y);
    const auto m1 = tst::mol({{0, "1"}, {1, "-1"}}, bx);
    const auto m2 = tst::mol({{2, "1/2"}, {3, "-1/2"}}, bx);
    CHECK(pushforward_map(f, combine(Rat(3), m1, Rat(-2), m2), bx, by) ==
          combine(Rat(3), pushforward_map(f, m1, bx, by), Rat(-2),
                  pushforward_map(f, m2, bx, by)));
  }
}
