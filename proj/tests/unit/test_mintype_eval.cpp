#include "helpers.hpp"
#include "oracles/oracles.hpp"

#include "mintype/mintype_eval.hpp"

#include <doctest.h>

#include <algorithm>

using namespace mintype;
using testing_support::vec;

TEST_SUITE("mintype_eval") {

TEST_CASE("evaluate_min examples") {
  const auto two = testing_support::two_point();
  CHECK(evaluate_min(two, vec({0, 0})) == 1.0);
  CHECK(evaluate_min(two, vec({-1, 0})) == 0.0);
  const auto torus = testing_support::torus_single();
  CHECK(evaluate_min(torus, vec({0.5, 0.5})) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(oracle::periodic_min({vec({0, 0})}, {1.0}, vec({0.5, 0.5})) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("active_set examples") {
  const auto two = testing_support::two_point();
  const auto saddle = active_set(two, vec({0, 0}), 1e-8);
  REQUIRE(saddle.size() == 2);
  CHECK(saddle.members[0].gradient.isApprox(vec({2, 0})));
  CHECK(saddle.members[1].gradient.isApprox(vec({-2, 0})));

  const auto site = active_set(two, vec({-1, 0}));
  REQUIRE(site.size() == 1);
  CHECK(site.members[0].id.base == 0);
  CHECK(site.members[0].gradient.norm() == 0.0);

  const auto top = active_set(testing_support::torus_single(), vec({0.5, 0.5}));
  REQUIRE(top.size() == 4);
  auto grads = top.gradients();
  auto brute = oracle::periodic_active_gradients({vec({0, 0})}, {1.0}, vec({0.5, 0.5}), 1e-12);
  REQUIRE(brute.size() == 4);
  const auto lex = [](const Vector& a, const Vector& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  };
  std::sort(grads.begin(), grads.end(), lex);
  std::sort(brute.begin(), brute.end(), lex);
  for (std::size_t i = 0; i < 4; ++i) CHECK((grads[i] - brute[i]).norm() < 1e-14);
  CHECK((grads[0] - vec({-1, -1})).norm() < 1e-14);
  CHECK((grads[3] - vec({1, 1})).norm() < 1e-14);
}

TEST_CASE("active-set tolerance is relative and inclusive") {
  const auto two = testing_support::two_point();
  const auto aset = active_set(two, vec({0, 0}));
  CHECK(aset.tolerance_used == doctest::Approx(1e-8));
  // Values far from zero scale the tolerance.
  const auto far = active_set(two, vec({100, 0}));
  CHECK(far.tolerance_used == doctest::Approx(1e-8 * evaluate_min(two, vec({100, 0}))));
  // A gap exactly equal to an explicit tolerance still counts as active.
  const auto shifted = Family::quadratic({ConvexQuadratic(Matrix::Identity(1, 1), Vector::Zero(1), 0.0),
                                          ConvexQuadratic(Matrix::Identity(1, 1), Vector::Zero(1), 0.25)});
  CHECK(active_set(shifted, vec({0}), 0.25).size() == 2);
  CHECK(active_set(shifted, vec({0}), 0.2).size() == 1);
}

TEST_CASE("directional_derivative examples and errors") {
  const std::vector<Vector> g = {vec({2, 0}), vec({-2, 0})};
  CHECK(directional_derivative(g, vec({0, 1})) == 0.0);
  CHECK(directional_derivative(g, vec({1, 0})) == -2.0);
  CHECK(directional_derivative(std::vector<Vector>{vec({0, 0})}, vec({0.3, -0.7})) == 0.0);
  try {
    (void)directional_derivative(g, vec({0, 0}));
    FAIL("expected ZeroDirection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroDirection);
  }
  try {
    (void)directional_derivative(std::vector<Vector>{}, vec({1, 0}));
    FAIL("expected EmptyGradientList");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyGradientList);
  }
}

TEST_CASE("minimum equals the smallest piece at 1000 random points") {
  std::mt19937_64 rng(17);
  std::vector<Vector> sites;
  for (int k = 0; k < 6; ++k) sites.push_back(testing_support::uniform_vector(rng, 2, -2, 2));
  const auto family = Family::point_sites(sites);
  for (int t = 0; t < 1000; ++t) {
    const Vector x = testing_support::uniform_vector(rng, 2, -3, 3);
    const double f = evaluate_min(family, x);
    bool attained = false;
    for (std::size_t i = 0; i < sites.size(); ++i) {
      const double v = family.piece({i, {}}).value(x);
      CHECK(f <= v);
      attained = attained || v == f;
    }
    CHECK(attained);
  }
}

TEST_CASE("minimum is Lipschitz on a probe box") {
  std::mt19937_64 rng(19);
  const auto family = Family::periodic({vec({0.1, 0.2}), vec({0.7, 0.6})});
  // Gradients 2(x - p) of an active translate are bounded by 2 sqrt(2) on the torus.
  const double lipschitz = 2.0 * std::sqrt(2.0);
  for (int t = 0; t < 500; ++t) {
    const Vector x = testing_support::uniform_vector(rng, 2, -1, 2);
    const Vector y = x + testing_support::uniform_vector(rng, 2, -0.05, 0.05);
    CHECK(std::abs(evaluate_min(family, x) - evaluate_min(family, y)) <= lipschitz * (x - y).norm() + 1e-12);
  }
}

TEST_CASE("directional derivative is the one-sided difference limit") {
  std::mt19937_64 rng(23);
  const auto family = Family::point_sites({vec({-1, 0}), vec({1, 0}), vec({0, 1.3})});
  const double h = 1e-6;
  for (int t = 0; t < 200; ++t) {
    Vector x = testing_support::uniform_vector(rng, 2, -2, 2);
    // Land half the probes exactly on the bisector to exercise nonsmooth points.
    if (t % 2 == 0) x[0] = 0.0;
    const Vector v = testing_support::uniform_vector(rng, 2, -1, 1);
    const double rate = directional_derivative(active_set(family, x), v);
    const double quotient = (evaluate_min(family, x + h * v) - evaluate_min(family, x)) / h;
    CHECK(std::abs(rate - quotient) < 1e-5);
  }
}

}  // TEST_SUITE
