#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "gpk/capacity.hpp"
#include "gpk/errors.hpp"
#include "gpk/lp.hpp"
#include "gpk/measure.hpp"

namespace gpk {

// The credal set of a capacity c is the polytope
//   core(c) = { p probability on X : p(B) >= c(B) for every B }.
// The routines below solve the LP dual (n rows, up to 2^n columns) and read
// the primal point off the dual multipliers.

struct CoreOptimum {
  Rational value;
  ProbabilityMeasure point;
};

/// Minimizes sum_x weights[x] p(x) over core(c). Throws InfeasibleError when
/// the core is empty; the certificate is indexed by subset, entry B > 0
/// holding a multiplier y_B >= 0 and entry 0 holding the multiplier t of
/// the normalization, with sum_{B ni x} y_B + t <= 0 for every x and
/// sum_B y_B c(B) + t > 0.
inline CoreOptimum minimize_over_core(const Capacity& c, const std::vector<Rational>& weights) {
  const Frame& frame = c.frame();
  const std::size_t n = frame.size();
  if (weights.size() != n) throw std::invalid_argument("weight count mismatch");

  // Shift so every right-hand side is nonnegative; sum p = 1 makes it exact.
  const Rational shift = *std::min_element(weights.begin(), weights.end());

  std::vector<Subset> columns;
  for (Subset b = 1; b < frame.full(); ++b)
    if (c[b] > 0) columns.push_back(b);

  lp::LinearProgram dual(columns.size() + 2, lp::Sense::maximize);
  for (std::size_t j = 0; j < columns.size(); ++j) dual.objective[j] = c[columns[j]];
  const std::size_t t_plus = columns.size();
  const std::size_t t_minus = columns.size() + 1;
  dual.objective[t_plus] = 1;
  dual.objective[t_minus] = -1;
  for (std::size_t x = 0; x < n; ++x) {
    auto& row = dual.add_row(lp::Relation::less_equal, weights[x] - shift);
    for (std::size_t j = 0; j < columns.size(); ++j)
      if (contains(columns[j], x)) row.coefficients[j] = 1;
    row.coefficients[t_plus] = 1;
    row.coefficients[t_minus] = -1;
  }

  lp::Solution sol = lp::solve(dual);
  if (sol.status == lp::Status::unbounded) {
    std::vector<Rational> certificate(frame.subset_count());
    for (std::size_t j = 0; j < columns.size(); ++j) certificate[columns[j]] = sol.ray[j];
    certificate[0] = sol.ray[t_plus] - sol.ray[t_minus];
    throw InfeasibleError("no probability measure dominates the capacity", std::move(certificate));
  }
  if (sol.status != lp::Status::optimal)
    throw std::logic_error("credal dual program cannot be infeasible");
  return {sol.value + shift, ProbabilityMeasure(frame, std::move(sol.dual))};
}

/// min { p(A) : p in core(c) }.
inline Rational envelope_value(const Capacity& c, Subset a) {
  std::vector<Rational> w(c.frame().size());
  for (std::size_t x = 0; x < w.size(); ++x) w[x] = contains(a, x) ? 1 : 0;
  return minimize_over_core(c, w).value;
}

inline bool core_is_empty(const Capacity& c) {
  try {
    minimize_over_core(c, std::vector<Rational>(c.frame().size()));
    return false;
  } catch (const InfeasibleError&) {
    return true;
  }
}

/// c is the lower envelope of its (nonempty) core.
inline bool check_coherent(const Capacity& c) {
  const Frame& frame = c.frame();
  if (core_is_empty(c)) return false;
  for (Subset a = 1; a < frame.full(); ++a)
    if (envelope_value(c, a) != c[a]) return false;
  return true;
}

/// inf { p(A|E) : p in core(c), p(E) > 0 } by the Charnes-Cooper substitution
/// z = t p, t = 1/p(E):
///   min z(A n E)  s.t.  z(E) = 1,  z(X) = t,  z(B) >= c(B) t,  z, t >= 0.
/// Every feasible (z, t) has t >= 1, so the program's minimum is the
/// infimum over the open condition p(E) > 0. It is solved through its dual
///   max alpha  s.t.  alpha [x in E] + beta + sum_{B ni x} y_B <= [x in A n E],
///                    -beta - sum_B c(B) y_B <= 0,   y >= 0.
inline Rational conditional_envelope(const Capacity& c, Subset a, Subset e) {
  const Frame& frame = c.frame();
  const std::size_t n = frame.size();
  if (c[frame.complement(e)] >= 1)
    throw UndefinedOperation("conditioning on " + frame.format(e) +
                             " is undefined: the complement has lower probability 1");

  std::vector<Subset> columns;
  for (Subset b = 1; b <= frame.full(); ++b)
    if (c[b] > 0) columns.push_back(b);

  // alpha+, alpha-, beta+, beta-, y_B...
  const std::size_t k = 4;
  lp::LinearProgram dual(k + columns.size(), lp::Sense::maximize);
  dual.objective[0] = 1;
  dual.objective[1] = -1;
  const Subset target = a & e;
  for (std::size_t x = 0; x < n; ++x) {
    auto& row = dual.add_row(lp::Relation::less_equal, contains(target, x) ? 1 : 0);
    if (contains(e, x)) {
      row.coefficients[0] = 1;
      row.coefficients[1] = -1;
    }
    row.coefficients[2] = 1;
    row.coefficients[3] = -1;
    for (std::size_t j = 0; j < columns.size(); ++j)
      if (contains(columns[j], x)) row.coefficients[k + j] = 1;
  }
  auto& t_row = dual.add_row(lp::Relation::less_equal, 0);
  t_row.coefficients[2] = -1;
  t_row.coefficients[3] = 1;
  for (std::size_t j = 0; j < columns.size(); ++j) t_row.coefficients[k + j] = -c[columns[j]];

  lp::Solution sol = lp::solve(dual);
  if (sol.status != lp::Status::optimal)
    throw UndefinedOperation("no dominating probability gives " + frame.format(e) +
                             " positive probability");
  return sol.value;
}

/// sup { p(A|E) : p in core(c), p(E) > 0 }.
inline Rational conditional_upper_envelope(const Capacity& c, Subset a, Subset e) {
  return 1 - conditional_envelope(c, c.frame().complement(a), e);
}

/// Marginal vectors of a 2-monotone capacity, one per ordering of X,
/// deduplicated in order of first appearance over lexicographic orderings.
inline std::vector<ProbabilityMeasure> core_vertices_2monotone(const Capacity& c) {
  if (!is_k_monotone(c, 2)) throw std::invalid_argument("capacity is not 2-monotone");
  const Frame& frame = c.frame();
  std::vector<std::size_t> order(frame.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<ProbabilityMeasure> out;
  std::set<std::vector<Rational>> seen;
  do {
    std::vector<Rational> w(frame.size());
    Subset prefix = 0;
    for (std::size_t x : order) {
      const Subset next = prefix | singleton(x);
      w[x] = c[next] - c[prefix];
      prefix = next;
    }
    if (seen.insert(w).second) out.emplace_back(frame, std::move(w));
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

/// min Q(A x Y) over joint measures compatible with the model: Y-marginal u
/// and Q(x, y) = 0 whenever x is not in gamma(y).
inline Rational joint_marginal_envelope(const DempsterModel& model, Subset a) {
  struct Cell {
    std::size_t x, y;
  };
  std::vector<Cell> cells;
  for (std::size_t y = 0; y < model.y_frame().size(); ++y)
    for (std::size_t x = 0; x < model.x_frame().size(); ++x)
      if (contains(model.gamma()[y], x)) cells.push_back({x, y});

  lp::LinearProgram program(cells.size(), lp::Sense::minimize);
  for (std::size_t j = 0; j < cells.size(); ++j)
    program.objective[j] = contains(a, cells[j].x) ? 1 : 0;
  for (std::size_t y = 0; y < model.y_frame().size(); ++y) {
    auto& row = program.add_row(lp::Relation::equal, model.u()[y]);
    for (std::size_t j = 0; j < cells.size(); ++j)
      if (cells[j].y == y) row.coefficients[j] = 1;
  }
  lp::Solution sol = lp::solve(program);
  if (sol.status != lp::Status::optimal)
    throw std::logic_error("compatible joint measures always exist");
  return sol.value;
}

// ---------------------------------------------------------------------------
// Envelope revision: for a prior lower probability l1 and evidence l2 with
// Moebius masses m2 and focal family F2,
//   lambda(A) = inf { sum_{E in F2} m2(E) p(A|E) : p in core(l1), p > 0 on F2 }.
// lambda is bracketed between a lower bound from per-term conditional
// envelopes and the best value found at an evaluated feasible point.

struct RevisionCell {
  Subset event = 0;
  Rational lower_bound;
  Rational best_found;
  ProbabilityMeasure witness;

  bool collapsed() const { return lower_bound == best_found; }
};

struct EnvelopeRevision {
  std::vector<RevisionCell> cells;  // indexed by subset bitmask
  Rational epsilon;                 // vertex mixing weight
  ProbabilityMeasure interior;      // the point positive on F2 used for mixing
  std::size_t evaluation_points = 0;
};

struct EnvelopeRevisionOptions {
  std::size_t descent_starts = 3;
  std::size_t descent_sweeps = 24;
  std::size_t step_halvings = 2;
};

namespace detail {

inline Rational mixture_objective(const SignedMassFunction& m2, const SignedMeasure& p, Subset a) {
  Rational sum = 0;
  for (const auto& [e, mass] : m2.masses()) sum += mass * p(a & e) / p(e);
  return sum;
}

inline bool positive_on(const SignedMeasure& p, const std::vector<Subset>& focal) {
  return std::all_of(focal.begin(), focal.end(), [&](Subset e) { return p(e) > 0; });
}

/// Maximizes the smallest p(E), E in focal, over core(c).
inline std::optional<ProbabilityMeasure> max_min_focal_point(const Capacity& c,
                                                             const std::vector<Subset>& focal) {
  const Frame& frame = c.frame();
  const std::size_t n = frame.size();
  lp::LinearProgram program(n + 1, lp::Sense::maximize);
  program.objective[n] = 1;
  for (Subset b = 1; b < frame.full(); ++b) {
    if (c[b] <= 0) continue;
    auto& row = program.add_row(lp::Relation::greater_equal, c[b]);
    for (std::size_t x = 0; x < n; ++x)
      if (contains(b, x)) row.coefficients[x] = 1;
  }
  auto& norm = program.add_row(lp::Relation::equal, 1);
  for (std::size_t x = 0; x < n; ++x) norm.coefficients[x] = 1;
  for (Subset e : focal) {
    auto& row = program.add_row(lp::Relation::greater_equal, 0);
    for (std::size_t x = 0; x < n; ++x)
      if (contains(e, x)) row.coefficients[x] = 1;
    row.coefficients[n] = -1;
  }
  lp::Solution sol = lp::solve(program);
  if (sol.status == lp::Status::infeasible)
    throw InfeasibleError("no probability measure dominates the prior lower probability",
                          sol.farkas);
  if (sol.status != lp::Status::optimal || sol.value <= 0) return std::nullopt;
  sol.primal.resize(n);
  return ProbabilityMeasure(frame, std::move(sol.primal));
}

/// Largest step along e_to - e_from that stays in core(c).
inline Rational max_transfer(const Capacity& c, const ProbabilityMeasure& p, std::size_t from,
                             std::size_t to) {
  const Frame& frame = c.frame();
  Rational limit = p.weight(from);
  for (Subset b = 1; b < frame.full(); ++b) {
    if (!contains(b, from) || contains(b, to)) continue;
    Rational slack = p(b) - c[b];
    if (slack < limit) limit = std::move(slack);
  }
  return limit;
}

}  // namespace detail

/// Brackets the envelope revision of l1 by l2 on every subset. Both
/// capacities must be 2-monotone.
inline EnvelopeRevision envelope_revise(const Capacity& l1, const Capacity& l2,
                                        const EnvelopeRevisionOptions& options = {}) {
  const Frame& frame = l1.frame();
  if (!(l2.frame() == frame)) throw std::invalid_argument("capacities live on different frames");
  if (!is_k_monotone(l1, 2)) throw std::invalid_argument("prior lower probability is not 2-monotone");
  if (!is_k_monotone(l2, 2)) throw std::invalid_argument("evidence lower bound is not 2-monotone");

  const SignedMassFunction m2 = l2.mobius();
  const std::vector<Subset> focal = m2.focal_sets();

  auto interior = detail::max_min_focal_point(l1, focal);
  if (!interior)
    throw UndefinedOperation("no dominating probability is positive on every focal set");

  EnvelopeRevision out;
  out.epsilon = make_rational(1, 1L << 20);
  out.interior = *interior;

  // Evaluation set: admissible vertices, every vertex mixed toward the
  // interior point, and the interior point itself.
  std::vector<ProbabilityMeasure> points;
  for (const auto& v : core_vertices_2monotone(l1)) {
    if (detail::positive_on(v, focal)) points.push_back(v);
    std::vector<Rational> w(frame.size());
    for (std::size_t x = 0; x < w.size(); ++x)
      w[x] = (1 - out.epsilon) * v.weight(x) + out.epsilon * interior->weight(x);
    points.emplace_back(frame, std::move(w));
  }
  points.push_back(*interior);
  out.evaluation_points = points.size();

  out.cells.resize(frame.subset_count());
  for (Subset a = 0; a <= frame.full(); ++a) {
    RevisionCell& cell = out.cells[a];
    cell.event = a;

    for (const auto& [e, mass] : m2.masses()) {
      const Rational term = mass > 0 ? conditional_envelope(l1, a, e)
                                     : conditional_upper_envelope(l1, a, e);
      cell.lower_bound += mass * term;
    }

    std::vector<std::pair<Rational, std::size_t>> ranked;
    for (std::size_t i = 0; i < points.size(); ++i)
      ranked.emplace_back(detail::mixture_objective(m2, points[i], a), i);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& l, const auto& r) { return l.first < r.first; });
    cell.best_found = ranked.front().first;
    cell.witness = points[ranked.front().second];

    // Pairwise-transfer coordinate descent from the best starts.
    const std::size_t starts = std::min(options.descent_starts, ranked.size());
    for (std::size_t s = 0; s < starts; ++s) {
      ProbabilityMeasure p = points[ranked[s].second];
      Rational fp = ranked[s].first;
      for (std::size_t sweep = 0; sweep < options.descent_sweeps; ++sweep) {
        bool improved = false;
        for (std::size_t from = 0; from < frame.size(); ++from)
          for (std::size_t to = 0; to < frame.size(); ++to) {
            if (from == to || p.weight(from) == 0) continue;
            Rational step = detail::max_transfer(l1, p, from, to);
            for (std::size_t h = 0; h <= options.step_halvings && step > 0; ++h, step /= 2) {
              std::vector<Rational> w = p.weights();
              w[from] -= step;
              w[to] += step;
              ProbabilityMeasure candidate(frame, std::move(w));
              if (!detail::positive_on(candidate, focal)) continue;
              Rational fc = detail::mixture_objective(m2, candidate, a);
              if (fc < fp) {
                p = std::move(candidate);
                fp = std::move(fc);
                improved = true;
                break;
              }
            }
          }
        if (!improved) break;
      }
      if (fp < cell.best_found) {
        cell.best_found = fp;
        cell.witness = p;
      }
    }
  }
  return out;
}

}  // namespace gpk
