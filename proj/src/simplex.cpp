#include "mintype/simplex.hpp"

#include "mintype/error.hpp"

#include <cmath>
#include <limits>

namespace mintype::lp {

namespace {

constexpr double kPivotEps = 1e-12;
constexpr double kCostEps = 1e-12;
constexpr double kPhaseOneEps = 1e-10;

class Tableau {
 public:
  Tableau(int rows, int cols) : t_(Matrix::Zero(rows + 1, cols + 1)), basis_(static_cast<std::size_t>(rows), -1) {}

  int rows() const { return static_cast<int>(t_.rows()) - 1; }
  int cols() const { return static_cast<int>(t_.cols()) - 1; }
  double& at(int r, int c) { return t_(r, c); }
  double rhs(int r) const { return t_(r, cols()); }
  double objective() const { return t_(rows(), cols()); }
  std::vector<int>& basis() { return basis_; }

  // Objective row holds reduced costs for "maximize c'x" as -c + c_B B^{-1} A.
  void load_objective(const Vector& c) {
    t_.row(rows()).setZero();
    for (int j = 0; j < static_cast<int>(c.size()); ++j) t_(rows(), j) = -c[j];
    for (int r = 0; r < rows(); ++r) {
      const int b = basis_[static_cast<std::size_t>(r)];
      const double coeff = t_(rows(), b);
      if (coeff != 0.0) t_.row(rows()) -= coeff * t_.row(r);
    }
  }

  void pivot(int r, int c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  // Runs Bland's rule over the columns flagged usable. Returns false if unbounded.
  bool optimize(const std::vector<bool>& usable) {
    const Eigen::Index m = t_.rows() - 1;
    const Eigen::Index nc = t_.cols() - 1;
    const Eigen::Index max_iter = 50 * (m + nc + 10);
    for (Eigen::Index iter = 0; iter < max_iter; ++iter) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < nc; ++j) {
        if (usable[static_cast<std::size_t>(j)] && t_(m, j) < -kCostEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index r = 0; r < m; ++r) {
        const double a = t_(r, enter);
        if (a <= kPivotEps) continue;
        const double ratio = t_(r, nc) / a;
        const bool tie = leave >= 0 && std::abs(ratio - best) <= 1e-15;
        if (leave < 0 || (!tie && ratio < best) ||
            (tie && basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)])) {
          best = std::min(best, ratio);
          leave = r;
        }
      }
      if (leave < 0) return false;
      pivot(static_cast<int>(leave), static_cast<int>(enter));
    }
    raise(ErrorCode::SingularSystem, "simplex iteration limit reached");
  }

  void drop_row(int r) {
    const int last = rows() - 1;
    if (r != last) {
      t_.row(r).swap(t_.row(last));
      std::swap(basis_[static_cast<std::size_t>(r)], basis_[static_cast<std::size_t>(last)]);
    }
    // Keep the objective row last.
    Matrix shrunk(t_.rows() - 1, t_.cols());
    shrunk.topRows(last) = t_.topRows(last);
    shrunk.row(last) = t_.row(rows());
    t_ = std::move(shrunk);
    basis_.pop_back();
  }

 private:
  Matrix t_;
  std::vector<int> basis_;
};

}  // namespace

LinearProgram::LinearProgram(int num_vars)
    : num_vars_(num_vars), free_(static_cast<std::size_t>(num_vars), false), objective_(Vector::Zero(num_vars)) {}

void LinearProgram::set_free(int var) { free_.at(static_cast<std::size_t>(var)) = true; }

void LinearProgram::set_objective(const Vector& c) {
  if (c.size() != num_vars_) raise(ErrorCode::DimensionMismatch, "objective length");
  objective_ = c;
}

void LinearProgram::add_constraint(const Vector& a, Relation rel, double rhs) {
  if (a.size() != num_vars_) raise(ErrorCode::DimensionMismatch, "constraint length");
  rows_.push_back(Row{a, rel, rhs});
}

Result LinearProgram::maximize() const {
  // Column layout: structural (free vars split in two), slack/surplus, artificial.
  std::vector<int> pos_col(static_cast<std::size_t>(num_vars_)), neg_col(static_cast<std::size_t>(num_vars_), -1);
  int ncols = 0;
  for (int v = 0; v < num_vars_; ++v) {
    pos_col[static_cast<std::size_t>(v)] = ncols++;
    if (free_[static_cast<std::size_t>(v)]) neg_col[static_cast<std::size_t>(v)] = ncols++;
  }
  const int structural = ncols;
  const int m = static_cast<int>(rows_.size());

  std::vector<Relation> rel(static_cast<std::size_t>(m));
  std::vector<double> sign(static_cast<std::size_t>(m), 1.0);
  int slack_count = 0, artificial_count = 0;
  for (int r = 0; r < m; ++r) {
    const auto& row = rows_[static_cast<std::size_t>(r)];
    Relation rr = row.rel;
    if (row.rhs < 0.0) {
      sign[static_cast<std::size_t>(r)] = -1.0;
      if (rr == Relation::LessEqual) rr = Relation::GreaterEqual;
      else if (rr == Relation::GreaterEqual) rr = Relation::LessEqual;
    }
    rel[static_cast<std::size_t>(r)] = rr;
    if (rr != Relation::Equal) ++slack_count;
    if (rr != Relation::LessEqual) ++artificial_count;
  }
  const int first_artificial = structural + slack_count;
  const int total = first_artificial + artificial_count;

  Tableau tab(m, total);
  int next_slack = structural, next_art = first_artificial;
  for (int r = 0; r < m; ++r) {
    const auto& row = rows_[static_cast<std::size_t>(r)];
    const double s = sign[static_cast<std::size_t>(r)];
    for (int v = 0; v < num_vars_; ++v) {
      tab.at(r, pos_col[static_cast<std::size_t>(v)]) = s * row.a[v];
      if (neg_col[static_cast<std::size_t>(v)] >= 0) tab.at(r, neg_col[static_cast<std::size_t>(v)]) = -s * row.a[v];
    }
    tab.at(r, total) = s * row.rhs;
    switch (rel[static_cast<std::size_t>(r)]) {
      case Relation::LessEqual:
        tab.at(r, next_slack) = 1.0;
        tab.basis()[static_cast<std::size_t>(r)] = next_slack++;
        break;
      case Relation::GreaterEqual:
        tab.at(r, next_slack++) = -1.0;
        tab.at(r, next_art) = 1.0;
        tab.basis()[static_cast<std::size_t>(r)] = next_art++;
        break;
      case Relation::Equal:
        tab.at(r, next_art) = 1.0;
        tab.basis()[static_cast<std::size_t>(r)] = next_art++;
        break;
    }
  }

  std::vector<bool> usable(static_cast<std::size_t>(total), true);
  if (artificial_count > 0) {
    Vector phase_one = Vector::Zero(total);
    for (int j = first_artificial; j < total; ++j) phase_one[j] = -1.0;
    tab.load_objective(phase_one);
    tab.optimize(usable);
    if (tab.objective() < -kPhaseOneEps) return Result{Status::Infeasible, 0.0, Vector()};
    // Drive remaining artificials out of the basis; rows that cannot pivot are redundant.
    for (int r = tab.rows() - 1; r >= 0; --r) {
      if (tab.basis()[static_cast<std::size_t>(r)] < first_artificial) continue;
      int col = -1;
      double best = kPivotEps;
      for (int j = 0; j < first_artificial; ++j) {
        if (std::abs(tab.at(r, j)) > best) {
          best = std::abs(tab.at(r, j));
          col = j;
        }
      }
      if (col >= 0) tab.pivot(r, col);
      else tab.drop_row(r);
    }
    for (int j = first_artificial; j < total; ++j) usable[static_cast<std::size_t>(j)] = false;
  }

  Vector c = Vector::Zero(total);
  for (int v = 0; v < num_vars_; ++v) {
    c[pos_col[static_cast<std::size_t>(v)]] = objective_[v];
    if (neg_col[static_cast<std::size_t>(v)] >= 0) c[neg_col[static_cast<std::size_t>(v)]] = -objective_[v];
  }
  tab.load_objective(c);
  if (!tab.optimize(usable)) return Result{Status::Unbounded, std::numeric_limits<double>::infinity(), Vector()};

  Vector column_values = Vector::Zero(total);
  for (int r = 0; r < tab.rows(); ++r) column_values[tab.basis()[static_cast<std::size_t>(r)]] = tab.rhs(r);
  Result result;
  result.status = Status::Optimal;
  result.x.resize(num_vars_);
  for (int v = 0; v < num_vars_; ++v) {
    double value = column_values[pos_col[static_cast<std::size_t>(v)]];
    if (neg_col[static_cast<std::size_t>(v)] >= 0) value -= column_values[neg_col[static_cast<std::size_t>(v)]];
    result.x[v] = value;
  }
  result.objective = objective_.dot(result.x);
  return result;
}

}  // namespace mintype::lp
