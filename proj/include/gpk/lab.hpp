#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gpk/capacity.hpp"
#include "gpk/conditioning.hpp"
#include "gpk/kinematics.hpp"
#include "gpk/measure.hpp"

namespace gpk::lab {

/// Seeded source of grid rationals drawn straight from the mt19937_64 engine.
class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : engine_() % bound; }
  bool coin() { return below(2) == 1; }

  /// k / den with k uniform in [lo, hi].
  Rational grid(long lo, long hi, long den) {
    return make_rational(lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1))), den);
  }

 private:
  std::mt19937_64 engine_;
};

enum class CapacityKind { any, monotone, two_monotone, belief, probability };

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Positive weights on a grid, normalized to sum 1.
inline ProbabilityMeasure gen_probability(const Frame& frame, std::uint64_t seed,
                                          bool strictly_positive = true, long grid = 8) {
  Random rng(mix_seed(seed, 11));
  std::vector<Rational> w(frame.size());
  Rational total = 0;
  for (auto& x : w) {
    x = rng.grid(strictly_positive ? 1 : 0, grid, 1);
    total += x;
  }
  if (total == 0) {
    w[0] = 1;
    total = 1;
  }
  for (auto& x : w) x /= total;
  return ProbabilityMeasure(frame, std::move(w));
}

/// Nonnegative masses on a few random focal sets.
inline Capacity gen_belief(const Frame& frame, std::uint64_t seed, long grid = 8) {
  Random rng(mix_seed(seed, 13));
  SignedMassFunction m(frame);
  const std::size_t focal = 1 + rng.below(std::min<std::uint64_t>(frame.full(), 4));
  Rational total = 0;
  std::vector<std::pair<Subset, Rational>> picks;
  for (std::size_t i = 0; i < focal; ++i) {
    const Subset s = 1 + static_cast<Subset>(rng.below(frame.full()));
    Rational w = rng.grid(1, grid, 1);
    total += w;
    picks.emplace_back(s, std::move(w));
  }
  for (auto& [s, w] : picks) m.set_mass(s, m.mass(s) + w / total);
  return Capacity::from_masses(m);
}

/// c(A) = min(1, max_x c(A - x) + step), steps drawn from the grid.
inline Capacity gen_monotone(const Frame& frame, std::uint64_t seed, long grid = 8) {
  Random rng(mix_seed(seed, 17));
  SetFunction f(frame);
  for (Subset a = 1; a < frame.full(); ++a) {
    Rational floor = 0;
    for (std::size_t x = 0; x < frame.size(); ++x)
      if (contains(a, x) && f[a ^ singleton(x)] > floor) floor = f[a ^ singleton(x)];
    Rational v = floor + rng.grid(0, grid / 2, grid);
    f[a] = v > 1 ? Rational(1) : v;
  }
  f[frame.full()] = 1;
  return Capacity(std::move(f));
}

/// p mapped through t -> ((t - theta)_+ / (1 - theta))^power. Convex
/// distortions of an additive measure are 2-monotone; power k - 1 gives
/// k-monotone.
inline Capacity distorted_probability(const ProbabilityMeasure& p, const Rational& theta,
                                      unsigned power) {
  const Frame& frame = p.frame();
  SetFunction f(frame);
  for (Subset a = 0; a <= frame.full(); ++a) {
    Rational t = p(a) - theta;
    if (t <= 0) continue;
    Rational base = t / (1 - theta);
    Rational v = 1;
    for (unsigned i = 0; i < power; ++i) v *= base;
    f[a] = v;
  }
  return Capacity(std::move(f));
}

inline Capacity mix(const Capacity& a, const Capacity& b, const Rational& weight_a) {
  SetFunction f(a.frame());
  for (Subset s = 0; s <= a.frame().full(); ++s) f[s] = weight_a * a[s] + (1 - weight_a) * b[s];
  return Capacity(std::move(f));
}

/// k-monotone capacity: a distortion of a random probability, mixed with a
/// random belief function. Verified before returning.
inline Capacity gen_k_monotone(const Frame& frame, std::size_t k, std::uint64_t seed, long grid = 8) {
  if (k < 2) throw std::invalid_argument("k-monotonicity needs k >= 2");
  Random rng(mix_seed(seed, 19 + k));
  const ProbabilityMeasure p = gen_probability(frame, rng.below(1u << 30));
  const Rational theta = rng.grid(0, grid - 2, grid);
  Capacity c = distorted_probability(p, theta, static_cast<unsigned>(k - 1));
  if (rng.coin()) c = mix(c, gen_belief(frame, rng.below(1u << 30), grid), rng.grid(1, grid, grid));
  for (std::size_t j = 2; j <= k; ++j)
    if (!is_k_monotone(c, j)) throw std::logic_error("generated capacity is not k-monotone");
  return c;
}

/// Deterministic in (frame, kind, seed); the requested property holds by
/// construction or by rejection.
inline Capacity gen_capacity(const Frame& frame, CapacityKind kind, std::uint64_t seed,
                             long grid = 8) {
  Random rng(mix_seed(seed, 23 + static_cast<std::uint64_t>(kind)));
  switch (kind) {
    case CapacityKind::any: {
      SetFunction f(frame);
      for (Subset a = 1; a < frame.full(); ++a) f[a] = rng.grid(0, grid, grid);
      f[frame.full()] = 1;
      return Capacity(std::move(f));
    }
    case CapacityKind::monotone: return gen_monotone(frame, rng.below(1u << 30), grid);
    case CapacityKind::two_monotone: {
      if (rng.coin())
        for (int attempt = 0; attempt < 64; ++attempt) {
          Capacity c = gen_monotone(frame, rng.below(1u << 30), grid);
          if (is_k_monotone(c, 2)) return c;
        }
      return gen_k_monotone(frame, 2, rng.below(1u << 30), grid);
    }
    case CapacityKind::belief: return gen_belief(frame, rng.below(1u << 30), grid);
    case CapacityKind::probability: {
      const ProbabilityMeasure p = gen_probability(frame, rng.below(1u << 30), true, grid);
      return Capacity::additive(frame, p.weights());
    }
  }
  throw std::invalid_argument("unknown capacity kind");
}

/// Random Dempster model with |Y| = y_size.
inline DempsterModel gen_model(const Frame& x_frame, std::size_t y_size, std::uint64_t seed,
                               long grid = 8) {
  Random rng(mix_seed(seed, 29));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < y_size; ++i) labels.push_back("y" + std::to_string(i + 1));
  std::vector<Rational> u(y_size);
  std::vector<Subset> gamma(y_size);
  Rational total = 0;
  for (std::size_t y = 0; y < y_size; ++y) {
    u[y] = rng.grid(1, grid, 1);
    total += u[y];
    gamma[y] = 1 + static_cast<Subset>(rng.below(x_frame.full()));
  }
  for (auto& w : u) w /= total;
  return DempsterModel(x_frame, Frame(std::move(labels)), std::move(u), std::move(gamma));
}

/// Random partition-supported masses: disjoint cells with positive weights.
inline JeffreySpec gen_jeffrey(const Frame& frame, std::uint64_t seed, long grid = 8) {
  Random rng(mix_seed(seed, 31));
  const std::size_t cells = 1 + rng.below(frame.size());
  std::vector<Subset> partition(cells);
  for (std::size_t x = 0; x < frame.size(); ++x) {
    // Some elements are left out of every cell.
    const std::uint64_t slot = rng.below(cells + 1);
    if (slot < cells) partition[slot] |= singleton(x);
  }
  std::erase(partition, Subset{0});
  if (partition.empty()) partition.push_back(frame.full());
  std::vector<Rational> w(partition.size());
  Rational total = 0;
  for (auto& x : w) {
    x = rng.grid(1, grid, 1);
    total += x;
  }
  for (auto& x : w) x /= total;
  return JeffreySpec(std::move(partition), std::move(w));
}

// ---------------------------------------------------------------------------
// Counterexample search.

enum class Claim {
  monotone_characterization,
  two_monotone_characterization,
  maxent_gap,
  it_self_conditional,
  tbar_dominance,
};

inline std::string to_string(Claim claim) {
  switch (claim) {
    case Claim::monotone_characterization: return "monotone-characterization";
    case Claim::two_monotone_characterization: return "two-monotone-characterization";
    case Claim::maxent_gap: return "maxent-gap";
    case Claim::it_self_conditional: return "it-self-conditional";
    case Claim::tbar_dominance: return "tbar-dominance";
  }
  return "?";
}

using gpk::to_string;

inline Claim parse_claim(const std::string& id) {
  for (Claim c : {Claim::monotone_characterization, Claim::two_monotone_characterization,
                  Claim::maxent_gap, Claim::it_self_conditional, Claim::tbar_dominance})
    if (to_string(c) == id) return c;
  throw std::invalid_argument("unknown claim '" + id + "'");
}

struct SearchBudget {
  std::size_t max_frame_size = 3;
  long grid_denominator = 8;
  std::size_t random_samples = 2000;
  std::uint64_t seed = 0;
};

/// An exact instance. `primary` is c (characterizations), b (maxent-gap) or
/// b1 (combination claims); `secondary` is b2; `event` is F or A.
struct Witness {
  Capacity primary;
  std::optional<Capacity> secondary;
  std::optional<ProbabilityMeasure> prior;
  std::optional<Subset> event;
  std::string violation;
};

struct SearchReport {
  Claim claim = Claim::monotone_characterization;
  bool found = false;
  std::string phase;  // "grid" or "random"
  std::size_t candidates = 0;
  std::optional<Witness> witness;
  bool validated = false;
  std::string regression;  // curated instance, re-evaluated
  bool regression_reproduced = false;
};

namespace detail {

/// Calls visit on every vector of `length` grid values in [0, 1], in
/// lexicographic order, until it returns true.
inline bool for_each_grid_vector(std::size_t length, long den,
                                 const std::function<bool(const std::vector<Rational>&)>& visit) {
  std::vector<long> digits(length, 0);
  std::vector<Rational> values(length, Rational(0));
  while (true) {
    if (visit(values)) return true;
    std::size_t pos = length;
    while (pos > 0 && digits[pos - 1] == den) {
      digits[pos - 1] = 0;
      values[pos - 1] = 0;
      --pos;
    }
    if (pos == 0) return false;
    ++digits[pos - 1];
    values[pos - 1] = make_rational(digits[pos - 1], den);
  }
}

/// Compositions of den into `parts` parts (strictly positive when asked),
/// lexicographic, as weights summing to 1.
inline bool for_each_composition(std::size_t parts, long den, bool positive,
                                 const std::function<bool(const std::vector<Rational>&)>& visit) {
  std::vector<long> digits(parts, 0);
  const long low = positive ? 1 : 0;
  std::function<bool(std::size_t, long)> rec = [&](std::size_t i, long remaining) -> bool {
    if (i + 1 == parts) {
      if (remaining < low) return false;
      digits[i] = remaining;
      std::vector<Rational> w(parts);
      for (std::size_t j = 0; j < parts; ++j) w[j] = make_rational(digits[j], den);
      return visit(w);
    }
    for (long d = low; d <= remaining - low * static_cast<long>(parts - i - 1); ++d) {
      digits[i] = d;
      if (rec(i + 1, remaining - d)) return true;
    }
    return false;
  };
  return rec(0, den);
}

inline std::string format_prior(const ProbabilityMeasure& p) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.weights().size(); ++i) {
    if (i) out += ", ";
    out += to_string(p.weight(i));
  }
  return out + ")";
}

inline std::optional<std::string> q_negative(const Capacity& c, const ProbabilityMeasure& p) {
  const SignedMeasure q = kinematic_revise(p, c.mobius());
  for (std::size_t x = 0; x < q.weights().size(); ++x)
    if (q.weight(x) < 0)
      return "q(" + c.frame().format(singleton(x)) + ") = " + to_string(q.weight(x)) + " < 0";
  return std::nullopt;
}

inline std::optional<std::string> q_below(const Capacity& c, const ProbabilityMeasure& p) {
  const SignedMeasure q = kinematic_revise(p, c.mobius());
  for (Subset a = 1; a <= c.frame().full(); ++a)
    if (q(a) < c[a])
      return "q(" + c.frame().format(a) + ") = " + to_string(q(a)) + " < c(" + c.frame().format(a) +
             ") = " + to_string(c[a]);
  return std::nullopt;
}

inline double maxent_gap(const Capacity& b, const ProbabilityMeasure& p, double* maxent_value = nullptr) {
  const SignedMeasure q = kinematic_revise(p, b.mobius());
  const MaxentResult star = maxent_project(p, b);
  if (maxent_value) *maxent_value = star.objective;
  return relative_information(q, p) - star.objective;
}

inline std::optional<std::string> maxent_violation(const Capacity& b, const ProbabilityMeasure& p) {
  constexpr double kCertified = 1e-6;
  double star = 0.0;
  const double gap = maxent_gap(b, p, &star);
  if (gap <= kCertified) return std::nullopt;
  const SignedMeasure q = kinematic_revise(p, b.mobius());
  for (Subset a = 1; a <= b.frame().full(); ++a)
    if (q(a) < b[a]) return std::nullopt;  // not a feasible posterior
  std::ostringstream os;
  os.precision(12);
  os << "I(q, p) = ~" << relative_information(q, p) << " exceeds min I = ~" << star << " by ~" << gap;
  return os.str();
}

inline std::optional<std::pair<Subset, std::string>> it_violation(const Capacity& b1) {
  const Frame& frame = b1.frame();
  for (Subset f = 1; f <= frame.full(); ++f) {
    const Rational den = 1 - b1[frame.complement(f)];
    if (den <= 0) continue;
    const Rational value = (b1[f] - b1[f & frame.complement(f)]) / den;
    if (value < 1)
      return std::make_pair(f, "b1_it(" + frame.format(f) + " | " + frame.format(f) + ") = " +
                                   to_string(value) + " < 1");
  }
  return std::nullopt;
}

inline std::optional<std::pair<Subset, std::string>> tbar_violation(const Capacity& b1,
                                                                   const Capacity& b2) {
  Combination t;
  try {
    t = combine_belief(b1, b2, CombinationRule::tbar, CombinationLevel::belief);
  } catch (const UndefinedOperation&) {
    return std::nullopt;
  }
  const Frame& frame = b1.frame();
  for (Subset a = 1; a <= frame.full(); ++a)
    if (t.belief[a] < b2[a])
      return std::make_pair(a, "tbar(" + frame.format(a) + ") = " + to_string(t.belief[a]) +
                                   " < b2(" + frame.format(a) + ") = " + to_string(b2[a]));
  return std::nullopt;
}

inline Capacity capacity_from_grid(const Frame& frame, const std::vector<Rational>& proper) {
  SetFunction f(frame);
  for (Subset a = 1; a < frame.full(); ++a) f[a] = proper[a - 1];
  f[frame.full()] = 1;
  return Capacity(std::move(f));
}

inline Capacity belief_from_grid(const Frame& frame, const std::vector<Rational>& masses) {
  SignedMassFunction m(frame);
  for (Subset a = 1; a <= frame.full(); ++a) m.set_mass(a, masses[a - 1]);
  return Capacity::from_masses(m);
}

}  // namespace detail

/// Re-checks a witness through the public operations it is claimed to
/// violate.
inline bool validate(Claim claim, const Witness& w) {
  try {
    switch (claim) {
      case Claim::monotone_characterization:
        return w.prior && !kinematic_revise(*w.prior, w.primary.mobius()).is_probability();
      case Claim::two_monotone_characterization: {
        if (!w.prior || !is_monotone(w.primary)) return false;
        const SignedMeasure q = kinematic_revise(*w.prior, w.primary.mobius());
        for (Subset a = 0; a <= w.primary.frame().full(); ++a)
          if (q(a) < w.primary[a]) return true;
        return false;
      }
      case Claim::maxent_gap:
        return w.prior && is_belief(w.primary) && detail::maxent_violation(w.primary, *w.prior);
      case Claim::it_self_conditional: {
        if (!w.event) return false;
        const Frame& frame = w.primary.frame();
        const Subset f = *w.event;
        const auto conditioned = condition_lower(w.primary, f, ConditioningRule::it).capacity;
        return is_belief(w.primary) && conditioned[f] < 1 && f != frame.full();
      }
      case Claim::tbar_dominance: {
        if (!w.secondary || !w.event) return false;
        const auto t = combine_belief(w.primary, *w.secondary, CombinationRule::tbar,
                                      CombinationLevel::mass);
        return t.belief[*w.event] < (*w.secondary)[*w.event];
      }
    }
  } catch (const std::exception&) {
    return false;
  }
  return false;
}

namespace detail {

inline void curated(SearchReport& report) {
  const Frame f3({"a", "b", "c"});
  const Frame f2({"a", "b"});
  auto r = [](long n, long d) { return make_rational(n, d); };
  switch (report.claim) {
    case Claim::monotone_characterization: {
      const Capacity c(f3, {0, r(1, 2), 0, r(1, 4), 0, r(1, 2), 0, 1});
      const ProbabilityMeasure p(f3, {r(1, 8), r(1, 8), r(3, 4)});
      const Rational qb = kinematic_revise(p, c.mobius()).weight(1);
      report.regression = "q({b}) = " + to_string(qb);
      report.regression_reproduced = qb == r(-1, 32);
      break;
    }
    case Claim::two_monotone_characterization: {
      const Capacity c(f3, {0, 0, 0, r(3, 4), 0, r(3, 4), 0, 1});
      const ProbabilityMeasure p(f3, {r(1, 100), r(98, 100), r(1, 100)});
      const Rational qab = kinematic_revise(p, c.mobius())(3);
      report.regression = "q({a,b}) = " + to_string(qab) + " vs c({a,b}) = 3/4";
      report.regression_reproduced = qab == r(63, 100) && is_monotone(c) && !is_k_monotone(c, 2);
      break;
    }
    case Claim::maxent_gap: {
      SignedMassFunction m(f2);
      m.set_mass(1, r(1, 2));
      m.set_mass(3, r(1, 2));
      const ProbabilityMeasure p(f2, {r(1, 4), r(3, 4)});
      const double gap = maxent_gap(Capacity::from_masses(m), p);
      std::ostringstream os;
      os.precision(12);
      os << "I-gap = ~" << gap;
      report.regression = os.str();
      report.regression_reproduced = std::abs(gap - 0.168911) < 1e-6;
      break;
    }
    case Claim::it_self_conditional: {
      const Capacity b1 = Capacity::vacuous(f2);
      const Rational v = condition_lower(b1, 1, ConditioningRule::it).capacity[1];
      report.regression = "b1_it({a} | {a}) = " + to_string(v) + " for vacuous b1";
      report.regression_reproduced = v == 0;
      break;
    }
    case Claim::tbar_dominance:
      report.regression = "exploratory";
      report.regression_reproduced = true;
      break;
  }
}

}  // namespace detail

/// Grid-first, then seeded-random search for an instance of the claim. The
/// grid phase enumerates frames of size 2..max_frame_size and instances in
/// canonical (lexicographic value-vector) order, so the reported witness is
/// the least one on the grid.
inline SearchReport search_witness(Claim claim, const SearchBudget& budget) {
  if (budget.max_frame_size < 2 || budget.max_frame_size > 5)
    throw std::invalid_argument("max frame size must be between 2 and 5");
  if (budget.grid_denominator < 1) throw std::invalid_argument("grid denominator must be positive");

  SearchReport report;
  report.claim = claim;
  const long den = budget.grid_denominator;

  // Per-frame-size candidate test returning a witness or nothing.
  auto try_capacity_prior = [&](const Capacity& c, const ProbabilityMeasure& p) -> std::optional<Witness> {
    std::optional<std::string> v;
    switch (claim) {
      case Claim::monotone_characterization: v = detail::q_negative(c, p); break;
      case Claim::two_monotone_characterization:
        if (is_monotone(c)) v = detail::q_below(c, p);
        break;
      case Claim::maxent_gap: v = detail::maxent_violation(c, p); break;
      default: break;
    }
    if (!v) return std::nullopt;
    return Witness{c, std::nullopt, p, std::nullopt, *v};
  };
  auto try_pair = [&](const Capacity& b1, const Capacity& b2) -> std::optional<Witness> {
    if (claim == Claim::it_self_conditional) {
      if (auto v = detail::it_violation(b1)) return Witness{b1, std::nullopt, std::nullopt, v->first, v->second};
    } else if (auto v = detail::tbar_violation(b1, b2)) {
      return Witness{b1, b2, std::nullopt, v->first, v->second};
    }
    return std::nullopt;
  };

  const bool capacity_claim = claim == Claim::monotone_characterization ||
                              claim == Claim::two_monotone_characterization;

  // Grid phase.
  for (std::size_t n = 2; n <= budget.max_frame_size && !report.found; ++n) {
    const Frame frame = Frame::of_size(n);
    const std::size_t proper = frame.subset_count() - 2;
    auto record = [&](std::optional<Witness> w) {
      ++report.candidates;
      if (!w) return false;
      report.found = true;
      report.phase = "grid";
      report.witness = std::move(w);
      return true;
    };
    if (capacity_claim) {
      // Larger frames are left to the random phase.
      if (n > 3) break;
      detail::for_each_grid_vector(proper, den, [&](const std::vector<Rational>& values) {
        const Capacity c = detail::capacity_from_grid(frame, values);
        return detail::for_each_composition(n, den, true, [&](const std::vector<Rational>& w) {
          return record(try_capacity_prior(c, ProbabilityMeasure(frame, w)));
        });
      });
    } else if (claim == Claim::maxent_gap) {
      if (n > 2) break;
      detail::for_each_composition(frame.full(), den, false, [&](const std::vector<Rational>& m) {
        const Capacity b = detail::belief_from_grid(frame, m);
        return detail::for_each_composition(n, den, true, [&](const std::vector<Rational>& w) {
          return record(try_capacity_prior(b, ProbabilityMeasure(frame, w)));
        });
      });
    } else {
      if (n > 3) break;
      detail::for_each_composition(frame.full(), den, false, [&](const std::vector<Rational>& m1) {
        const Capacity b1 = detail::belief_from_grid(frame, m1);
        if (claim == Claim::it_self_conditional) return record(try_pair(b1, b1));
        return detail::for_each_composition(frame.full(), den, false, [&](const std::vector<Rational>& m2) {
          return record(try_pair(b1, detail::belief_from_grid(frame, m2)));
        });
      });
    }
  }

  // Random phase.
  for (std::size_t i = 0; i < budget.random_samples && !report.found; ++i) {
    Random rng(mix_seed(budget.seed, 1000 + i));
    const std::size_t n = 2 + rng.below(budget.max_frame_size - 1);
    const Frame frame = Frame::of_size(n);
    const std::uint64_t s1 = rng.below(1ULL << 40), s2 = rng.below(1ULL << 40);
    std::optional<Witness> w;
    switch (claim) {
      case Claim::monotone_characterization:
        w = try_capacity_prior(gen_capacity(frame, CapacityKind::any, s1, den), gen_probability(frame, s2));
        break;
      case Claim::two_monotone_characterization:
        w = try_capacity_prior(gen_capacity(frame, CapacityKind::monotone, s1, den), gen_probability(frame, s2));
        break;
      case Claim::maxent_gap:
        w = try_capacity_prior(gen_belief(frame, s1, den), gen_probability(frame, s2));
        break;
      case Claim::it_self_conditional:
      case Claim::tbar_dominance:
        w = try_pair(gen_belief(frame, s1, den), gen_belief(frame, s2, den));
        break;
    }
    ++report.candidates;
    if (w) {
      report.found = true;
      report.phase = "random";
      report.witness = std::move(w);
    }
  }

  if (report.witness) report.validated = validate(claim, *report.witness);
  detail::curated(report);
  return report;
}

}  // namespace gpk::lab
