#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "gpk/rational.hpp"

namespace gpk::lp {

enum class Relation { less_equal, greater_equal, equal };
enum class Sense { minimize, maximize };
enum class Status { optimal, infeasible, unbounded };

struct Row {
  std::vector<Rational> coefficients;
  Relation relation = Relation::greater_equal;
  Rational rhs = 0;
};

/// optimize objective . x  subject to rows, x >= 0.
struct LinearProgram {
  std::size_t variables = 0;
  std::vector<Rational> objective;
  std::vector<Row> rows;
  Sense sense = Sense::minimize;

  explicit LinearProgram(std::size_t n = 0, Sense s = Sense::minimize)
      : variables(n), objective(n), sense(s) {}

  Row& add_row(Relation relation, Rational rhs) {
    rows.push_back(Row{std::vector<Rational>(variables), relation, std::move(rhs)});
    return rows.back();
  }
};

/// Solver output. For an optimal program, `dual` holds one multiplier per
/// row such that value = dual . rhs and the reduced costs are sign-feasible
/// (minimize: >= rows get y >= 0, <= rows y <= 0; maximize: the reverse).
/// For an infeasible program, `farkas` satisfies farkas . A <= 0 (columnwise)
/// and farkas . rhs > 0 with the same row sign pattern as a minimize dual.
/// For an unbounded program, `ray` is a recession direction improving the
/// objective.
struct Solution {
  Status status = Status::infeasible;
  Rational value = 0;
  std::vector<Rational> primal;
  std::vector<Rational> dual;
  std::vector<Rational> farkas;
  std::vector<Rational> ray;
  std::size_t pivots = 0;
};

namespace detail {

/// Dense two-phase tableau simplex with Bland's rule.
class Tableau {
 public:
  explicit Tableau(const LinearProgram& program) : program_(program) {
    const std::size_t m = program.rows.size();
    const std::size_t n = program.variables;
    flipped_.assign(m, false);
    relation_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      if (program.rows[i].coefficients.size() != n)
        throw std::invalid_argument("LP row width does not match the variable count");
      Relation rel = program.rows[i].relation;
      if (program.rows[i].rhs < 0) {
        flipped_[i] = true;
        if (rel == Relation::less_equal)
          rel = Relation::greater_equal;
        else if (rel == Relation::greater_equal)
          rel = Relation::less_equal;
      }
      relation_[i] = rel;
    }

    // Column layout: structural | slack/surplus | artificial.
    std::size_t col = n;
    slack_col_.assign(m, kNone);
    identity_col_.assign(m, kNone);
    for (std::size_t i = 0; i < m; ++i)
      if (relation_[i] != Relation::equal) slack_col_[i] = col++;
    first_artificial_ = col;
    for (std::size_t i = 0; i < m; ++i) {
      if (relation_[i] == Relation::less_equal)
        identity_col_[i] = slack_col_[i];
      else
        identity_col_[i] = col++;
    }
    columns_ = col;

    table_.assign(m, std::vector<Rational>(columns_ + 1));
    basis_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const Row& row = program.rows[i];
      auto& t = table_[i];
      for (std::size_t j = 0; j < n; ++j)
        t[j] = flipped_[i] ? Rational(-row.coefficients[j]) : row.coefficients[j];
      t[columns_] = flipped_[i] ? Rational(-row.rhs) : row.rhs;
      if (relation_[i] == Relation::less_equal) t[slack_col_[i]] = 1;
      if (relation_[i] == Relation::greater_equal) t[slack_col_[i]] = -1;
      t[identity_col_[i]] = 1;
      basis_[i] = identity_col_[i];
    }
  }

  Solution solve() {
    Solution out;
    const std::size_t m = table_.size();
    const std::size_t n = program_.variables;

    // Phase I: minimize the sum of artificials.
    if (first_artificial_ < columns_) {
      std::vector<Rational> cost(columns_);
      for (std::size_t j = first_artificial_; j < columns_; ++j) cost[j] = 1;
      load_costs(cost);
      run(columns_, out.pivots);  // phase I is bounded below by zero
      if (reduced_[columns_] != 0) {
        out.status = Status::infeasible;
        out.farkas.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
          Rational y = cost[identity_col_[i]] - reduced_[identity_col_[i]];
          out.farkas[i] = flipped_[i] ? Rational(-y) : y;
        }
        return out;
      }
      drive_out_artificials(out.pivots);
    }

    // Phase II.
    std::vector<Rational> cost(columns_);
    for (std::size_t j = 0; j < n; ++j)
      cost[j] = program_.sense == Sense::minimize ? program_.objective[j]
                                                  : Rational(-program_.objective[j]);
    load_costs(cost);
    const std::size_t blocked = run(first_artificial_, out.pivots);
    if (blocked != kNone) {
      out.status = Status::unbounded;
      out.ray.assign(n, 0);
      if (blocked < n) out.ray[blocked] = 1;
      for (std::size_t i = 0; i < m; ++i)
        if (basis_[i] < n) out.ray[basis_[i]] = -table_[i][blocked];
      return out;
    }

    out.status = Status::optimal;
    out.primal.assign(n, 0);
    for (std::size_t i = 0; i < m; ++i)
      if (basis_[i] < n) out.primal[basis_[i]] = table_[i][columns_];
    Rational min_value = -reduced_[columns_];
    out.value = program_.sense == Sense::minimize ? min_value : Rational(-min_value);
    out.dual.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      Rational y = cost[identity_col_[i]] - reduced_[identity_col_[i]];
      if (program_.sense == Sense::maximize) y = -y;
      out.dual[i] = flipped_[i] ? Rational(-y) : y;
    }
    return out;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  void load_costs(const std::vector<Rational>& cost) {
    reduced_.assign(columns_ + 1, 0);
    for (std::size_t j = 0; j < columns_; ++j) reduced_[j] = cost[j];
    for (std::size_t i = 0; i < table_.size(); ++i) {
      const Rational& cb = cost[basis_[i]];
      if (cb.is_zero()) continue;
      const auto& t = table_[i];
      for (std::size_t j = 0; j <= columns_; ++j)
        if (!t[j].is_zero()) reduced_[j] -= cb * t[j];
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    auto& pr = table_[row];
    const Rational inv = 1 / pr[col];
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j <= columns_; ++j)
      if (!pr[j].is_zero()) {
        pr[j] *= inv;
        support.push_back(j);
      }
    auto eliminate = [&](std::vector<Rational>& target) {
      if (target[col].is_zero()) return;
      const Rational factor = target[col];
      for (std::size_t j : support) target[j] -= factor * pr[j];
    };
    for (std::size_t i = 0; i < table_.size(); ++i)
      if (i != row) eliminate(table_[i]);
    eliminate(reduced_);
    basis_[row] = col;
  }

  /// Bland's rule over columns [0, limit). Returns kNone at optimality or
  /// the entering column of an unbounded direction.
  std::size_t run(std::size_t limit, std::size_t& pivots) {
    while (true) {
      std::size_t entering = kNone;
      for (std::size_t j = 0; j < limit; ++j)
        if (reduced_[j] < 0) {
          entering = j;
          break;
        }
      if (entering == kNone) return kNone;

      std::size_t leaving = kNone;
      Rational best;
      for (std::size_t i = 0; i < table_.size(); ++i) {
        const Rational& a = table_[i][entering];
        if (a <= 0) continue;
        Rational ratio = table_[i][columns_] / a;
        if (leaving == kNone || ratio < best || (ratio == best && basis_[i] < basis_[leaving])) {
          leaving = i;
          best = std::move(ratio);
        }
      }
      if (leaving == kNone) return entering;
      pivot(leaving, entering);
      ++pivots;
    }
  }

  void drive_out_artificials(std::size_t& pivots) {
    for (std::size_t i = 0; i < table_.size(); ++i) {
      if (basis_[i] < first_artificial_) continue;
      for (std::size_t j = 0; j < first_artificial_; ++j)
        if (!table_[i][j].is_zero()) {
          pivot(i, j);
          ++pivots;
          break;
        }
      // A row with no structural support is redundant; its artificial stays
      // basic at zero and never re-enters.
    }
  }

  const LinearProgram& program_;
  std::vector<bool> flipped_;
  std::vector<Relation> relation_;
  std::vector<std::size_t> slack_col_;
  std::vector<std::size_t> identity_col_;
  std::size_t first_artificial_ = 0;
  std::size_t columns_ = 0;
  std::vector<std::vector<Rational>> table_;
  std::vector<Rational> reduced_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

/// Exact simplex. Terminates on every input (Bland's rule).
inline Solution solve(const LinearProgram& program) {
  if (program.objective.size() != program.variables)
    throw std::invalid_argument("LP objective width does not match the variable count");
  return detail::Tableau(program).solve();
}

}  // namespace gpk::lp
