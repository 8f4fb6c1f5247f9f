#pragma once

#include "mintype/mintype_eval.hpp"
#include "mintype/tolerances.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace mintype {

enum class Verdict { Regular, Critical, DegenerateRegular };

std::string_view to_string(Verdict verdict);

// Outcome of the first-order increase test: max over |v|_inf <= 1 of
// min_i <g_i, v>. An increase direction exists iff margin > feasibility.
struct IncreaseTest {
  bool exists = false;
  std::optional<Vector> direction;
  double margin = 0.0;
};

// Outcome of the strictly positive combination test: max of min_i lambda_i
// over sum lambda_i g_i = 0, sum lambda_i = 1, lambda >= 0.
struct CombinationTest {
  bool exists = false;   // strictly positive combination vanishes
  bool in_hull = false;  // some nonnegative combination vanishes
  std::vector<double> lambda;
  double min_weight = 0.0;
  double residual = 0.0;
};

IncreaseTest has_increase_direction(const std::vector<Vector>& gradients, const Tolerances& tol = {});
CombinationTest positive_combination(const std::vector<Vector>& gradients, const Tolerances& tol = {});
int span_rank(const std::vector<Vector>& gradients, const Tolerances& tol = {});

// Verdict plus its numeric certificate.
//
//  Critical: lambda strictly positive, sum 1, sum lambda_i g_i ~ 0; index is
//            the rank of the active gradients.
//  Regular: direction along which every active piece increases to first
//           order (margin is the smallest rate).
//  DegenerateRegular: 0 lies on the boundary of the gradient hull; lambda is
//           a vanishing combination with some zero weight.
struct Classification {
  Verdict verdict = Verdict::Regular;
  int index = -1;
  int span_rank = 0;
  std::vector<double> lambda;
  std::optional<Vector> direction;
  double margin = 0.0;
  double residual = 0.0;
  ActiveSet active;

  bool is_critical() const { return verdict == Verdict::Critical; }
};

Classification classify_active_set(const ActiveSet& active, const Tolerances& tol = {});
Classification classify_point(const Family& family, const Vector& x, std::optional<double> active_tol = std::nullopt,
                              const Tolerances& tol = {});

// Throws SingularSystem if a certificate does not meet its stated bounds.
void check_certificate(const Classification& c, const Tolerances& tol = {});

}  // namespace mintype
