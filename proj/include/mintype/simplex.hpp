#pragma once

#include "mintype/box.hpp"

#include <vector>

namespace mintype::lp {

enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
  Status status = Status::Infeasible;
  double objective = 0.0;
  Vector x;
};

// Small dense two-phase tableau simplex with Bland's pivoting rule.
// Maximizes c'x subject to the added rows; variables are nonnegative unless
// marked free. Sized for the handful of rows the feasibility tests need.
class LinearProgram {
 public:
  explicit LinearProgram(int num_vars);

  void set_free(int var);
  void set_objective(const Vector& c);
  void add_constraint(const Vector& a, Relation rel, double rhs);

  Result maximize() const;

 private:
  struct Row {
    Vector a;
    Relation rel;
    double rhs;
  };

  int num_vars_;
  std::vector<bool> free_;
  Vector objective_;
  std::vector<Row> rows_;
};

}  // namespace mintype::lp
