#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "ae/quotient.hpp"
#include "helpers.hpp"

using namespace ae;

namespace {

FiniteMetric zero_pseudometric(const FiniteMetric& on) {
  FiniteMetric z;
  z.points = on.points;
  z.dist.assign(on.size(), std::vector<Rat>(on.size(), Rat(0)));
  return z;
}

// The unit-path space with the pseudometric that glues the two endpoints:
// mu(a,b) = mu(b,c) = 1, mu(a,c) = 0.
FiniteMetric glue_ends(const FiniteGSpace& x) {
  return tst::make_metric(x.space.points,
                          {{"0", "1", "0"}, {"1", "0", "1"}, {"0", "1", "0"}});
}

}  // namespace

TEST_CASE("quotient by an end-gluing pseudometric") {
  const auto x = tst::x3_swap();
  const auto q = make_quotient(x, glue_ends(x));

  REQUIRE(q.space.classes.size() == 2);
  CHECK(q.space.classes[0] == std::vector<std::size_t>{0, 2});
  CHECK(q.space.classes[1] == std::vector<std::size_t>{1});
  CHECK(q.space.gspace.space.points ==
        std::vector<std::string>{"[a]", "[b]"});
  CHECK(q.space.gspace.space.at(0, 1) == 1);
  CHECK(q.map.assignment == std::vector<std::size_t>{0, 1, 0});

  // The class metric is a genuine invariant metric.
  CHECK(validate_metric(q.space.gspace.space, MetricMode::Metric).ok());
  CHECK(check_invariance(q.space.gspace.space, q.space.gspace.group,
                         q.space.gspace.action)
            .ok());
  // The swap fixes both classes, so the induced action is trivial.
  for (std::size_t g = 0; g < q.space.gspace.group.size(); ++g) {
    CHECK(q.space.gspace.action.perm[g] == std::vector<std::size_t>{0, 1});
  }
}

TEST_CASE("quotient degenerate cases") {
  const auto x = tst::x3_swap();
  SUBCASE("the zero pseudometric collapses everything") {
    const auto q = make_quotient(x, zero_pseudometric(x.space));
    CHECK(q.space.classes.size() == 1);
    CHECK(q.space.gspace.space.points == std::vector<std::string>{"[a]"});
    CHECK(q.map.assignment == std::vector<std::size_t>{0, 0, 0});
  }
  SUBCASE("a genuine metric quotients to a copy of the space") {
    const auto q = make_quotient(x, x.space);
    CHECK(q.space.classes.size() == 3);
    CHECK(q.map.assignment == std::vector<std::size_t>{0, 1, 2});
    CHECK(q.space.gspace.space.same_entries(x.space));
    for (std::size_t g = 0; g < x.group.size(); ++g) {
      CHECK(q.space.gspace.action.perm[g] == x.action.perm[g]);
    }
  }
}

TEST_CASE("quotient input validation") {
  const auto x = tst::x3_swap();
  SUBCASE("non-pseudometric is rejected") {
    auto bad = glue_ends(x);
    bad.dist[0][1] = Rat(-1);
    bad.dist[1][0] = Rat(-1);
    CHECK_THROWS_WITH_AS(make_quotient(x, bad),
                         doctest::Contains("nonnegative"),
                         std::invalid_argument);
  }
  SUBCASE("non-invariant pseudometric is rejected") {
    // mu(a,b) = 0 but mu(c,b) = 1 breaks invariance under the a<->c swap.
    const auto bad = tst::make_metric(
        x.space.points, {{"0", "0", "1"}, {"0", "0", "1"}, {"1", "1", "0"}});
    REQUIRE(validate_metric(bad, MetricMode::Pseudometric).ok());
    CHECK_THROWS_WITH_AS(make_quotient(x, bad), doctest::Contains("invariant"),
                         std::invalid_argument);
  }
  SUBCASE("size mismatch is rejected") {
    const auto bad = tst::make_metric({"u", "v"}, {{"0", "1"}, {"1", "0"}});
    CHECK_THROWS_AS(make_quotient(x, bad), std::invalid_argument);
  }
}

TEST_CASE("bonds between comparable quotients") {
  const auto x = tst::x3_swap();
  const auto coarse = make_quotient(x, zero_pseudometric(x.space));
  const auto mid = make_quotient(x, glue_ends(x));
  const auto fine = make_quotient(x, x.space);

  SUBCASE("fine to mid to coarse") {
    const auto b1 = make_bond(mid, fine);
    CHECK(b1.assignment == std::vector<std::size_t>{0, 1, 0});
    const auto b2 = make_bond(coarse, mid);
    CHECK(b2.assignment == std::vector<std::size_t>{0, 0});

    // Composition equals the direct bond.
    const auto direct = make_bond(coarse, fine);
    for (std::size_t c = 0; c < fine.space.classes.size(); ++c) {
      CHECK(direct.assignment[c] == b2.assignment[b1.assignment[c]]);
    }
  }
  SUBCASE("the self bond is the identity") {
    const auto b = make_bond(mid, mid);
    CHECK(b.assignment == std::vector<std::size_t>{0, 1});
  }
  SUBCASE("incomparable pseudometrics are refused") {
    CHECK_THROWS_WITH_AS(make_bond(fine, mid),
                         doctest::Contains("entrywise below"),
                         std::invalid_argument);
  }
}

TEST_CASE("factorization of an equivariant map") {
  const auto x = tst::x3_swap();
  FiniteGSpace y;
  y.space = tst::make_metric({"u", "v"}, {{"0", "3"}, {"3", "0"}});
  y.group = x.group;
  y.action.perm = {{0, 1}, {0, 1}};
  const EquivariantMap f{x, y, {0, 1, 0}};
  REQUIRE(check_equivariance(f).ok());

  const auto fact = factorize(f, y.space);

  // The pullback glues a and c and separates them from b at distance 3.
  CHECK(fact.mu.at(0, 2) == 0);
  CHECK(fact.mu.at(0, 1) == 3);
  REQUIRE(fact.quotient.space.classes.size() == 2);
  CHECK(fact.phi == std::vector<std::size_t>{0, 1});

  // phi after the projection reproduces f.
  for (std::size_t pt = 0; pt < 3; ++pt) {
    CHECK(fact.phi[fact.quotient.map.assignment[pt]] == f.image[pt]);
  }
  // phi is isometric onto its image.
  const auto& qm = fact.quotient.space.gspace.space;
  for (std::size_t i = 0; i < qm.size(); ++i) {
    for (std::size_t j = 0; j < qm.size(); ++j) {
      CHECK(qm.at(i, j) == y.space.at(fact.phi[i], fact.phi[j]));
    }
  }
}

TEST_CASE("factorization degenerate cases") {
  const auto x = tst::x3_swap();
  SUBCASE("a constant map factors through the one-point quotient") {
    FiniteGSpace y;
    y.space = tst::make_metric({"u"}, {{"0"}});
    y.group = x.group;
    y.action.perm = {{0}, {0}};
    const EquivariantMap f{x, y, {0, 0, 0}};
    const auto fact = factorize(f, y.space);
    CHECK(fact.quotient.space.classes.size() == 1);
    CHECK(fact.phi == std::vector<std::size_t>{0});
  }
  SUBCASE("the identity map factors through itself") {
    const EquivariantMap f{x, x, {0, 1, 2}};
    const auto fact = factorize(f, x.space);
    CHECK(fact.quotient.space.classes.size() == 3);
    CHECK(fact.phi == std::vector<std::size_t>{0, 1, 2});
    CHECK(fact.quotient.space.gspace.space.same_entries(x.space));
  }
  SUBCASE("non-equivariant maps are refused") {
    FiniteGSpace y;
    y.space = tst::make_metric({"u", "v"}, {{"0", "3"}, {"3", "0"}});
    y.group = x.group;
    y.action.perm = {{0, 1}, {1, 0}};  // the swap acts nontrivially now
    const EquivariantMap f{x, y, {0, 1, 0}};  // f(ga)=f(c)=u but g f(a)=v
    CHECK_THROWS_WITH_AS(factorize(f, y.space),
                         doctest::Contains("equivarian"),
                         std::invalid_argument);
  }
  SUBCASE("a non-invariant target metric is refused") {
    FiniteGSpace y;
    y.space = tst::make_metric({"u", "v"}, {{"0", "3"}, {"3", "0"}});
    y.group = x.group;
    y.action.perm = {{0, 1}, {1, 0}};
    const EquivariantMap f{x, y, {0, 1, 1}};  // equivariant: ga=c -> v? no
    // Build a genuinely equivariant f for this action: a->u, b->?, need
    // f(c) = g f(a) = v. b is fixed, so f(b) must be fixed; no fixed target
    // point exists, hence equivariance itself must fail first.
    CHECK_THROWS_AS(factorize(f, y.space), std::invalid_argument);
  }
}
