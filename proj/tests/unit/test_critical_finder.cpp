#include "helpers.hpp"
#include "oracles/oracles.hpp"

#include "mintype/classifier.hpp"
#include "mintype/critical_finder.hpp"

#include <doctest.h>

using namespace mintype;
using testing_support::vec;

namespace {

const CriticalPoint* near(const std::vector<CriticalPoint>& pts, const Vector& x, double tol = 1e-9) {
  for (const auto& p : pts) {
    if ((p.location - x).norm() <= tol) return &p;
  }
  return nullptr;
}

}  // namespace

TEST_SUITE("critical_finder") {

TEST_CASE("subset candidates for the two-point family") {
  const auto two = testing_support::two_point();
  const Box region = Box::cube(2, -2, 2);
  const auto pair = candidate_points_for_subset(two, {{0, {}}, {1, {}}}, region);
  REQUIRE(pair.size() == 1);
  CHECK(pair[0].norm() < 1e-12);
  const auto single = candidate_points_for_subset(two, {{0, {}}}, region);
  REQUIRE(single.size() == 1);
  CHECK((single[0] - vec({-1, 0})).norm() < 1e-12);
}

TEST_CASE("scaled pair moves the saddle to the weighted bisector") {
  const auto scaled = apply_scaling(testing_support::two_point(), ScalingVector{{{0, 1.1}, {1, 0.9}}});
  const auto pts = candidate_points_for_subset(scaled, {{0, {}}, {1, {}}}, Box::cube(2, -2, 2));
  REQUIRE(pts.size() == 1);
  const Vector expected = oracle::weighted_bisector_point(vec({-1, 0}), 1.1, vec({1, 0}), 0.9);
  CHECK(expected[0] == doctest::Approx(-0.0501256).epsilon(1e-6));
  CHECK((pts[0] - expected).norm() < 1e-12);
}

TEST_CASE("oversized subsets are rejected") {
  const auto f = Family::point_sites({vec({0}), vec({1}), vec({2})});
  try {
    (void)candidate_points_for_subset(f, {{0, {}}, {1, {}}, {2, {}}}, Box::cube(1, -1, 3));
    FAIL("expected SubsetTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SubsetTooLarge);
  }
}

TEST_CASE("two-point family has two minima and one saddle") {
  const auto pts = find_all_critical(testing_support::two_point(), Box::cube(2, -2, 2));
  REQUIRE(pts.size() == 3);
  const auto* a = near(pts, vec({-1, 0}));
  const auto* b = near(pts, vec({1, 0}));
  const auto* s = near(pts, vec({0, 0}));
  REQUIRE(a);
  REQUIRE(b);
  REQUIRE(s);
  CHECK(a->index == 0);
  CHECK(b->index == 0);
  CHECK(s->index == 1);
  CHECK(s->value == doctest::Approx(1.0));
}

TEST_CASE("single quadratic has one minimum") {
  const auto f = Family::quadratic({ConvexQuadratic(Matrix::Identity(2, 2), Vector::Zero(2), 0.0)});
  const auto pts = find_all_critical(f, Box::cube(2, -1, 1));
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].index == 0);
  CHECK(pts[0].location.norm() < 1e-12);
}

TEST_CASE("single site on the torus") {
  const auto pts = find_all_critical(testing_support::torus_single(), Box::unit_cell(2));
  REQUIRE(pts.size() == 4);
  CHECK(near(pts, vec({0, 0}))->index == 0);
  CHECK(near(pts, vec({0.5, 0}))->index == 1);
  CHECK(near(pts, vec({0, 0.5}))->index == 1);
  CHECK(near(pts, vec({0.5, 0.5}))->index == 2);
}

TEST_CASE("general quadratics with distinct Hessians") {
  Matrix a0(2, 2), a1(2, 2);
  a0 << 2, 0.3, 0.3, 1;
  a1 << 1, -0.2, -0.2, 3;
  const ConvexQuadratic q0(a0, vec({2, 0}), 0.0);
  const ConvexQuadratic q1(a1, vec({-3, 0.5}), 0.1);
  const auto f = Family::quadratic({q0, q1});
  const auto pts = find_all_critical(f, Box::cube(2, -4, 4));
  // Two separated minima joined by one saddle.
  long euler = 0;
  for (const auto& p : pts) euler += p.index % 2 == 0 ? 1 : -1;
  CHECK(euler == 1);
  for (const auto& p : pts) {
    const auto c = classify_point(f, p.location);
    CHECK(c.verdict == Verdict::Critical);
    CHECK(c.index == p.index);
    CHECK(std::abs(p.value - evaluate_min(f, p.location)) < 1e-10);
  }
  // Cross-check against a PL census of the sampled function.
  const auto census = oracle::pl_census_2d(
      [&](double x, double y) { return evaluate_min(f, vec({x, y})); }, {-4, -4}, {4, 4}, 400, false, {0.0, 0.0});
  long expected[3] = {0, 0, 0};
  for (const auto& p : pts) ++expected[p.index];
  CHECK(census.count[0] == expected[0]);
  CHECK(census.count[1] == expected[1]);
}

TEST_CASE("torus Morse identity for random periodic families") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 6; ++trial) {
    const int k = 1 + trial % 3;
    std::vector<Vector> sites;
    for (int i = 0; i < k; ++i) sites.push_back(testing_support::uniform_vector(rng, 2, 0, 1));
    const auto f = Family::periodic(sites);
    try {
      const auto pts = find_all_critical(f, Box::unit_cell(2));
      long euler = 0;
      long minima = 0;
      for (const auto& p : pts) {
        euler += p.index % 2 == 0 ? 1 : -1;
        minima += p.index == 0;
      }
      CHECK(euler == 0);
      CHECK(minima == k);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SingularSystem);
    }
  }
}

TEST_CASE("index-0 points sit on the minimizer of one piece") {
  const auto f = Family::point_sites({vec({-1, 0}), vec({1, 0.2}), vec({0.1, 1.5})});
  for (const auto& p : find_all_critical(f, Box::cube(2, -3, 3))) {
    if (p.index != 0) continue;
    int hits = 0;
    for (const auto& s : f.sites()) hits += (s - p.location).norm() < 1e-9;
    CHECK(hits == 1);
  }
}

TEST_CASE("deduplication is idempotent") {
  const auto f = Family::periodic({vec({0.1, 0.2}), vec({0.6, 0.7})});
  const auto first = find_all_critical(f, Box::unit_cell(2));
  const auto second = find_all_critical(f, Box::unit_cell(2));
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].location == second[i].location);
    CHECK(first[i].index == second[i].index);
  }
  for (std::size_t i = 0; i < first.size(); ++i) {
    for (std::size_t j = i + 1; j < first.size(); ++j) CHECK(f.distance(first[i].location, first[j].location) > 1e-7);
  }
}

TEST_CASE("three-dimensional sites") {
  const auto f = Family::point_sites({vec({1, 0, 0}), vec({-1, 0, 0}), vec({0, 1.2, 0}), vec({0, 0, 1.1})});
  const auto pts = find_all_critical(f, Box::cube(3, -3, 3));
  long counts[4] = {0, 0, 0, 0};
  for (const auto& p : pts) ++counts[p.index];
  CHECK(counts[0] == 4);
  CHECK(counts[0] - counts[1] + counts[2] - counts[3] == 1);
}

}  // TEST_SUITE
