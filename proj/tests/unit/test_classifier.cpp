#include "helpers.hpp"
#include "oracles/oracles.hpp"

#include "mintype/classifier.hpp"
#include "mintype/simplex.hpp"

#include <doctest.h>

using namespace mintype;
using testing_support::vec;

namespace {

std::vector<Vector> diamond() { return {vec({1, 1}), vec({-1, 1}), vec({1, -1}), vec({-1, -1})}; }

ActiveSet synthetic(const std::vector<Vector>& gradients) {
  ActiveSet aset;
  aset.point = Vector::Zero(gradients.front().size());
  for (std::size_t i = 0; i < gradients.size(); ++i) aset.members.push_back({PieceId{i, {}}, 0.0, gradients[i]});
  return aset;
}

}  // namespace

TEST_SUITE("simplex") {

TEST_CASE("bounded maximization") {
  // max x + y s.t. x + 2y <= 4, 3x + y <= 6.
  lp::LinearProgram prog(2);
  prog.set_objective(vec({1, 1}));
  prog.add_constraint(vec({1, 2}), lp::Relation::LessEqual, 4);
  prog.add_constraint(vec({3, 1}), lp::Relation::LessEqual, 6);
  const auto r = prog.maximize();
  REQUIRE(r.status == lp::Status::Optimal);
  CHECK(r.objective == doctest::Approx(2.8));
  CHECK(r.x[0] == doctest::Approx(1.6));
  CHECK(r.x[1] == doctest::Approx(1.2));
}

TEST_CASE("equalities, free variables and infeasibility") {
  lp::LinearProgram prog(2);
  prog.set_free(0);
  prog.set_objective(vec({-1, 0}));
  prog.add_constraint(vec({1, 1}), lp::Relation::Equal, -3);
  prog.add_constraint(vec({0, 1}), lp::Relation::LessEqual, 2);
  const auto r = prog.maximize();
  REQUIRE(r.status == lp::Status::Optimal);
  // y is pushed to its bound so that x = -3 - y is as small as possible.
  CHECK(r.x[0] == doctest::Approx(-5));
  CHECK(r.x[1] == doctest::Approx(2));

  lp::LinearProgram bad(1);
  bad.add_constraint(vec({1}), lp::Relation::GreaterEqual, 2);
  bad.add_constraint(vec({1}), lp::Relation::LessEqual, 1);
  CHECK(bad.maximize().status == lp::Status::Infeasible);

  lp::LinearProgram open(1);
  open.set_objective(vec({1}));
  CHECK(open.maximize().status == lp::Status::Unbounded);
}

TEST_CASE("redundant equality rows are tolerated") {
  lp::LinearProgram prog(2);
  prog.set_objective(vec({1, 0}));
  prog.add_constraint(vec({1, 1}), lp::Relation::Equal, 1);
  prog.add_constraint(vec({2, 2}), lp::Relation::Equal, 2);
  const auto r = prog.maximize();
  REQUIRE(r.status == lp::Status::Optimal);
  CHECK(r.objective == doctest::Approx(1));
}

}  // TEST_SUITE

TEST_SUITE("classifier") {

TEST_CASE("has_increase_direction examples") {
  CHECK_FALSE(has_increase_direction({vec({2, 0}), vec({-2, 0})}).exists);
  const auto quadrant = has_increase_direction({vec({1, 0}), vec({0, 1})});
  REQUIRE(quadrant.exists);
  REQUIRE(quadrant.direction);
  CHECK((*quadrant.direction)[0] > 0);
  CHECK((*quadrant.direction)[1] > 0);
  CHECK(quadrant.direction->lpNorm<Eigen::Infinity>() <= 1.0 + 1e-12);
  CHECK(quadrant.margin > 1e-9);
  CHECK_FALSE(has_increase_direction(diamond()).exists);
  try {
    (void)has_increase_direction({});
    FAIL("expected EmptyGradientList");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyGradientList);
  }
}

TEST_CASE("positive_combination examples") {
  const auto pair = positive_combination({vec({2, 0}), vec({-2, 0})});
  REQUIRE(pair.exists);
  CHECK(pair.lambda[0] == doctest::Approx(0.5));
  CHECK(pair.lambda[1] == doctest::Approx(0.5));

  const auto boundary = positive_combination({vec({2, 0}), vec({-2, 0}), vec({0, 2})});
  CHECK_FALSE(boundary.exists);
  CHECK(boundary.in_hull);

  const auto four = positive_combination(diamond());
  REQUIRE(four.exists);
  for (double l : four.lambda) CHECK(l == doctest::Approx(0.25));
  CHECK(four.residual < 1e-9);
}

TEST_CASE("span_rank examples") {
  CHECK(span_rank({vec({2, 0}), vec({-2, 0})}) == 1);
  CHECK(span_rank({vec({0, 0})}) == 0);
  CHECK(span_rank({vec({1, 1}), vec({-1, 1})}) == 2);
}

TEST_CASE("classify_point examples") {
  const auto two = testing_support::two_point();
  const auto saddle = classify_point(two, vec({0, 0}));
  CHECK(saddle.verdict == Verdict::Critical);
  CHECK(saddle.index == 1);
  REQUIRE(saddle.lambda.size() == 2);
  CHECK(saddle.lambda[0] == doctest::Approx(0.5));

  const auto minimum = classify_point(two, vec({-1, 0}));
  CHECK(minimum.verdict == Verdict::Critical);
  CHECK(minimum.index == 0);

  const auto top = classify_point(testing_support::torus_single(), vec({0.5, 0.5}));
  CHECK(top.verdict == Verdict::Critical);
  CHECK(top.index == 2);
  CHECK_FALSE(oracle::scan_max_min_rate(top.active.gradients(), 3600) > 1e-9);

  const auto regular = classify_point(two, vec({0.3, 0.4}));
  CHECK(regular.verdict == Verdict::Regular);
}

TEST_CASE("boundary configuration is degenerate-regular, never critical") {
  const std::vector<Vector> g = {vec({2, 0}), vec({-2, 0}), vec({0, 2})};
  for (double scale : {0.1, 1.0, 10.0}) {
    Tolerances tol;
    tol.feasibility *= scale;
    tol.rank *= scale;
    tol.active_rel *= scale;
    const auto c = classify_active_set(synthetic(g), tol);
    CHECK(c.verdict == Verdict::DegenerateRegular);
  }
  // Realized by a family: two opposite sites and a third whose equal-value
  // locus passes through the origin with gradient (0, 2).
  const auto family = Family::point_sites({vec({-1, 0}), vec({1, 0}), vec({0, -1})});
  CHECK(classify_point(family, vec({0, 0})).verdict == Verdict::DegenerateRegular);
}

TEST_CASE("single quadratic is critical exactly at its minimizer") {
  std::mt19937_64 rng(29);
  Matrix m = Matrix::Random(2, 2);
  const ConvexQuadratic q(m * m.transpose() + 0.5 * Matrix::Identity(2, 2), vec({0.4, -0.3}), 1.0);
  const auto family = Family::quadratic({q});
  const Vector xmin = -0.5 * q.A.ldlt().solve(q.b);
  const auto at = classify_point(family, xmin);
  CHECK(at.verdict == Verdict::Critical);
  CHECK(at.index == 0);
  for (int t = 0; t < 200; ++t) {
    const Vector x = testing_support::uniform_vector(rng, 2, -3, 3);
    CHECK(classify_point(family, x).verdict == Verdict::Regular);
  }
}

TEST_CASE("Gordan duality against the scan oracle") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> dim(1, 3), count(1, 5);
  int agree = 0;
  for (int t = 0; t < 300; ++t) {
    const int n = dim(rng), k = count(rng);
    std::vector<Vector> g;
    for (int i = 0; i < k; ++i) g.push_back(testing_support::uniform_vector(rng, n, -1, 1));
    const bool lp = has_increase_direction(g).exists;
    const bool scan = oracle::scan_max_min_rate(g, n == 3 ? 20000 : 3600) > 1e-9;
    if (lp == scan) {
      ++agree;
    } else {
      CHECK(oracle::hull_distance(g) <= 1e-6);
    }
  }
  CHECK(agree >= 299);
}

TEST_CASE("certificates satisfy their bounds") {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + t % 2;
    std::vector<Vector> g;
    for (int i = 0; i < 1 + t % 5; ++i) g.push_back(testing_support::uniform_vector(rng, n, -1, 1));
    const auto c = classify_active_set(synthetic(g));
    CHECK_NOTHROW(check_certificate(c));
    if (c.direction) {
      for (const auto& v : g) CHECK(v.dot(*c.direction) > 0.0);
    }
  }
}

}  // TEST_SUITE
