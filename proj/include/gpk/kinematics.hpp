#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gpk/capacity.hpp"
#include "gpk/credal.hpp"
#include "gpk/errors.hpp"
#include "gpk/measure.hpp"

namespace gpk {

/// Pairwise-disjoint evidence cells with positive weights summing to 1.
struct JeffreySpec {
  std::vector<Subset> partition;
  std::vector<Rational> weights;

  JeffreySpec(std::vector<Subset> cells, std::vector<Rational> cell_weights)
      : partition(std::move(cells)), weights(std::move(cell_weights)) {
    if (partition.size() != weights.size())
      throw std::invalid_argument("one weight per partition cell is required");
    Subset seen = 0;
    Rational total = 0;
    for (std::size_t i = 0; i < partition.size(); ++i) {
      if (partition[i] == 0) throw std::invalid_argument("partition cells must be nonempty");
      if (partition[i] & seen) throw std::invalid_argument("partition cells must be disjoint");
      if (weights[i] <= 0) throw std::invalid_argument("partition weights must be positive");
      seen |= partition[i];
      total += weights[i];
    }
    if (total != 1)
      throw std::invalid_argument("partition weights sum to " + to_string(total) + ", expected 1");
  }

  /// Accepts a mass function whose focal sets are pairwise disjoint.
  static JeffreySpec from_masses(const SignedMassFunction& m) {
    std::vector<Subset> cells;
    std::vector<Rational> w;
    for (const auto& [set, mass] : m.masses()) {
      cells.push_back(set);
      w.push_back(mass);
    }
    return JeffreySpec(std::move(cells), std::move(w));
  }

  SignedMassFunction to_masses(const Frame& frame) const {
    SignedMassFunction m(frame);
    for (std::size_t i = 0; i < partition.size(); ++i) m.set_mass(partition[i], weights[i]);
    return m;
  }
};

/// q(A) = sum over focal E of m(E) p(A|E). Exactly additive with total mass
/// equal to that of m; nonnegative whenever zeta(m) is monotone. Throws
/// UndefinedOperation naming the first focal set of prior probability zero.
inline SignedMeasure kinematic_revise(const ProbabilityMeasure& p, const SignedMassFunction& m) {
  if (!(p.frame() == m.frame())) throw std::invalid_argument("prior and masses live on different frames");
  const Frame& frame = p.frame();
  std::vector<Rational> q(frame.size());
  for (const auto& [e, mass] : m.masses()) {
    const Rational pe = p(e);
    if (pe == 0)
      throw UndefinedOperation("prior assigns zero probability to focal set " + frame.format(e));
    const Rational scale = mass / pe;
    for (std::size_t x = 0; x < frame.size(); ++x)
      if (contains(e, x)) q[x] += scale * p.weight(x);
  }
  return SignedMeasure(frame, std::move(q));
}

/// Classical rule over a partition, evaluated cell by cell: an element in
/// cell E receives weight(E) p(x) / p(E); elements outside every cell get 0.
inline ProbabilityMeasure jeffrey_revise(const ProbabilityMeasure& p, const JeffreySpec& spec) {
  const Frame& frame = p.frame();
  std::vector<Rational> q(frame.size());
  for (std::size_t x = 0; x < frame.size(); ++x)
    for (std::size_t i = 0; i < spec.partition.size(); ++i) {
      if (!contains(spec.partition[i], x)) continue;
      q[x] = spec.weights[i] * p.conditional(singleton(x), spec.partition[i]);
    }
  return ProbabilityMeasure(frame, std::move(q));
}

// ---------------------------------------------------------------------------
// Joint measures on X x Y and the conservation condition.

/// Q(x, y) = u(y) p(x | gamma(y)).
inline JointMeasure canonical_joint(const DempsterModel& model, const ProbabilityMeasure& p) {
  const Frame& xf = model.x_frame();
  const Frame& yf = model.y_frame();
  if (!(p.frame() == xf)) throw std::invalid_argument("prior does not live on the model frame");
  std::vector<Rational> w(xf.size() * yf.size());
  for (std::size_t y = 0; y < yf.size(); ++y) {
    const Rational pg = p(model.gamma()[y]);
    if (pg == 0)
      throw UndefinedOperation("prior assigns zero probability to the image of '" + yf.label(y) + "'");
    for (std::size_t x = 0; x < xf.size(); ++x)
      if (contains(model.gamma()[y], x)) w[x * yf.size() + y] = model.u()[y] * p.weight(x) / pg;
  }
  return JointMeasure(xf, yf, std::move(w));
}

struct JointReport {
  bool compatible = false;
  bool conserving = false;
  std::size_t skipped_cells = 0;  // focal sets with Q(E*) = 0 or p(E) = 0
};

/// Compatibility with (u, gamma) and conservation of conditional
/// probability: Q(A x E* | X x E*) = p(A|E) for every A and focal E, where
/// E* = { y : gamma(y) = E }.
inline JointReport verify_joint(const JointMeasure& q, const DempsterModel& model,
                                const ProbabilityMeasure& p) {
  const Frame& xf = model.x_frame();
  const Frame& yf = model.y_frame();
  if (!(q.x_frame() == xf) || !(q.y_frame() == yf) || !(p.frame() == xf))
    throw std::invalid_argument("joint measure, model and prior frames differ");

  JointReport report;
  report.compatible = q.y_marginal() == model.u();
  for (std::size_t y = 0; y < yf.size() && report.compatible; ++y)
    for (std::size_t x = 0; x < xf.size(); ++x)
      if (!contains(model.gamma()[y], x) && q.at(x, y) != 0) {
        report.compatible = false;
        break;
      }

  std::vector<Subset> focal(model.gamma());
  std::sort(focal.begin(), focal.end());
  focal.erase(std::unique(focal.begin(), focal.end()), focal.end());

  report.conserving = true;
  for (Subset e : focal) {
    Subset e_star = 0;
    for (std::size_t y = 0; y < yf.size(); ++y)
      if (model.gamma()[y] == e) e_star |= singleton(y);
    const Rational mass = q.rectangle(xf.full(), e_star);
    if (mass == 0 || p(e) == 0) {
      ++report.skipped_cells;
      continue;
    }
    for (Subset a = 0; a <= xf.full(); ++a)
      if (q.rectangle(a, e_star) / mass != p.conditional(a, e)) {
        report.conserving = false;
        return report;
      }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Relative information and its minimization over a credal set.

/// sum_x q(x) ln(q(x)/p(x)) in nats, with 0 ln 0 = 0.
inline double relative_information(const std::vector<double>& q, const std::vector<double>& p) {
  if (q.size() != p.size()) throw std::invalid_argument("measures of different sizes");
  double sum = 0.0;
  for (std::size_t x = 0; x < q.size(); ++x) {
    if (q[x] <= 0.0) continue;
    if (p[x] <= 0.0)
      throw UndefinedOperation("relative information is infinite: q is not absolutely continuous");
    sum += q[x] * std::log(q[x] / p[x]);
  }
  return sum;
}

inline double relative_information(const SignedMeasure& q, const ProbabilityMeasure& p) {
  if (!(q.frame() == p.frame())) throw std::invalid_argument("measures live on different frames");
  double sum = 0.0;
  for (std::size_t x = 0; x < q.frame().size(); ++x) {
    if (q.weight(x) <= 0) continue;
    if (p.weight(x) == 0)
      throw UndefinedOperation("relative information is infinite: q(" + q.frame().label(x) +
                               ") > 0 = p(" + q.frame().label(x) + ")");
    // Log of the exact ratio.
    sum += to_double(q.weight(x)) * std::log(to_double(q.weight(x) / p.weight(x)));
  }
  return sum;
}

struct MaxentOptions {
  double tol = 1e-9;
  std::size_t max_iter = 100000;
};

struct MaxentResult {
  std::vector<double> weights;
  double objective = 0.0;       // I(q*, p)
  double gap = 0.0;             // Frank-Wolfe duality gap at q*
  double stationarity = 0.0;    // gradient residual off the active face
  std::size_t iterations = 0;
  bool converged = false;
};

namespace detail {

inline std::vector<double> entropy_gradient(const std::vector<double>& q, const std::vector<double>& p) {
  std::vector<double> g(q.size());
  for (std::size_t x = 0; x < q.size(); ++x) g[x] = std::log(std::max(q[x], 1e-300) / p[x]) + 1.0;
  return g;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Minimizes I(q + t d, p) over t in [0, t_max] by bisection on the
/// derivative (the restriction is convex).
inline double entropy_line_search(const std::vector<double>& q, const std::vector<double>& d,
                                  const std::vector<double>& p, double t_max) {
  auto slope = [&](double t) {
    double s = 0.0;
    for (std::size_t x = 0; x < q.size(); ++x) {
      if (d[x] == 0.0) continue;
      const double r = std::max(q[x] + t * d[x], 1e-300);
      s += d[x] * (std::log(r / p[x]) + 1.0);
    }
    return s;
  };
  if (slope(t_max) <= 0.0) return t_max;
  if (slope(0.0) >= 0.0) return 0.0;
  double lo = 0.0, hi = t_max;
  for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Norm of the part of g not explained by the constraints active at q.
inline double stationarity_residual(const Capacity& b, const std::vector<double>& q,
                                    const std::vector<double>& g) {
  const Frame& frame = b.frame();
  const std::size_t n = frame.size();
  constexpr double kActive = 1e-7;
  std::vector<Eigen::VectorXd> rows;
  rows.push_back(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n)));
  for (Subset a = 1; a < frame.full(); ++a) {
    if (b[a] <= 0) continue;
    double qa = 0.0;
    for (std::size_t x = 0; x < n; ++x)
      if (contains(a, x)) qa += q[x];
    if (qa - to_double(b[a]) > kActive) continue;
    Eigen::VectorXd r = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t x = 0; x < n; ++x)
      if (contains(a, x)) r[static_cast<Eigen::Index>(x)] = 1.0;
    rows.push_back(r);
  }
  for (std::size_t x = 0; x < n; ++x)
    if (q[x] <= kActive) {
      Eigen::VectorXd r = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
      r[static_cast<Eigen::Index>(x)] = 1.0;
      rows.push_back(r);
    }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = rows[j];
  Eigen::VectorXd gv(static_cast<Eigen::Index>(n));
  for (std::size_t x = 0; x < n; ++x) gv[static_cast<Eigen::Index>(x)] = g[x];
  const Eigen::VectorXd coeffs = m.completeOrthogonalDecomposition().solve(gv);
  return (m * coeffs - gv).lpNorm<Eigen::Infinity>();
}

}  // namespace detail

/// argmin { I(q, p) : q probability, q(A) >= b(A) for all A } by away-step
/// conditional gradient. The linear subproblems are exact LPs over core(b);
/// the objective and line searches run in floating point.
inline MaxentResult maxent_project(const ProbabilityMeasure& p, const Capacity& b,
                                   const MaxentOptions& options = {}) {
  const Frame& frame = p.frame();
  const std::size_t n = frame.size();
  if (!(b.frame() == frame)) throw std::invalid_argument("prior and bound live on different frames");
  std::vector<double> pd(n);
  for (std::size_t x = 0; x < n; ++x) {
    if (p.weight(x) <= 0) throw std::invalid_argument("maxent prior must be strictly positive");
    pd[x] = to_double(p.weight(x));
  }

  struct Atom {
    std::vector<Rational> exact;
    std::vector<double> point;
    double weight;
  };
  auto oracle = [&](const std::vector<double>& g) {
    std::vector<Rational> w(n);
    for (std::size_t x = 0; x < n; ++x) w[x] = from_double(g[x]);
    CoreOptimum opt = minimize_over_core(b, w);
    std::vector<double> d(n);
    for (std::size_t x = 0; x < n; ++x) d[x] = to_double(opt.point.weight(x));
    return Atom{opt.point.weights(), std::move(d), 0.0};
  };

  // Start at the core vertex closest to p in the linear sense.
  std::vector<Atom> active;
  {
    std::vector<double> g(n);
    for (std::size_t x = 0; x < n; ++x) g[x] = -pd[x];
    active.push_back(oracle(g));
    active.back().weight = 1.0;
  }

  MaxentResult result;
  std::vector<double> q(n);
  auto rebuild = [&] {
    std::fill(q.begin(), q.end(), 0.0);
    for (const auto& atom : active)
      for (std::size_t x = 0; x < n; ++x) q[x] += atom.weight * atom.point[x];
  };
  rebuild();

  for (result.iterations = 0; result.iterations < options.max_iter; ++result.iterations) {
    const std::vector<double> g = detail::entropy_gradient(q, pd);
    Atom s = oracle(g);
    const double gq = detail::dot(g, q);
    result.gap = gq - detail::dot(g, s.point);
    if (result.gap <= options.tol) {
      result.converged = true;
      break;
    }

    std::size_t away = 0;
    for (std::size_t i = 1; i < active.size(); ++i)
      if (detail::dot(g, active[i].point) > detail::dot(g, active[away].point)) away = i;
    const double away_gap = detail::dot(g, active[away].point) - gq;

    std::vector<double> d(n);
    if (result.gap >= away_gap || active.size() == 1) {
      for (std::size_t x = 0; x < n; ++x) d[x] = s.point[x] - q[x];
      const double t = detail::entropy_line_search(q, d, pd, 1.0);
      for (auto& atom : active) atom.weight *= 1.0 - t;
      auto it = std::find_if(active.begin(), active.end(),
                             [&](const Atom& atom) { return atom.exact == s.exact; });
      if (t >= 1.0) {
        active.clear();
        s.weight = 1.0;
        active.push_back(std::move(s));
      } else if (it != active.end()) {
        it->weight += t;
      } else {
        s.weight = t;
        active.push_back(std::move(s));
      }
    } else {
      const double alpha = active[away].weight;
      const double t_max = alpha / (1.0 - alpha);
      for (std::size_t x = 0; x < n; ++x) d[x] = q[x] - active[away].point[x];
      const double t = detail::entropy_line_search(q, d, pd, t_max);
      for (auto& atom : active) atom.weight *= 1.0 + t;
      active[away].weight -= t;
      if (t >= t_max) active.erase(active.begin() + static_cast<std::ptrdiff_t>(away));
    }
    std::erase_if(active, [](const Atom& atom) { return atom.weight <= 0.0; });
    rebuild();
  }

  result.weights = q;
  result.objective = relative_information(q, pd);
  result.stationarity = detail::stationarity_residual(b, q, detail::entropy_gradient(q, pd));
  return result;
}

}  // namespace gpk
