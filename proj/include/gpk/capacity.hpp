#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gpk/lattice.hpp"

namespace gpk {

/// Normalized set function: c(empty) = 0 and c(X) = 1. Monotonicity and
/// the range [0, 1] are checked properties, not invariants.
class Capacity {
 public:
  Capacity() = default;

  explicit Capacity(SetFunction base) : base_(std::move(base)) {
    if (base_[0] != 0) throw std::invalid_argument("capacity must vanish on the empty set");
    if (base_[base_.frame().full()] != 1)
      throw std::invalid_argument("capacity must equal 1 on the full frame");
  }

  Capacity(Frame frame, std::vector<Rational> values)
      : Capacity(SetFunction(std::move(frame), std::move(values))) {}

  /// Zeta transform of masses that sum to 1.
  static Capacity from_masses(const SignedMassFunction& m) { return Capacity(zeta_transform(m)); }

  /// c(A) = 0 for A != X.
  static Capacity vacuous(const Frame& frame) {
    SetFunction f(frame);
    f[frame.full()] = 1;
    return Capacity(std::move(f));
  }

  /// Additive capacity with the given singleton weights.
  static Capacity additive(const Frame& frame, const std::vector<Rational>& weights) {
    if (weights.size() != frame.size()) throw std::invalid_argument("weight count mismatch");
    SignedMassFunction m(frame);
    for (std::size_t i = 0; i < weights.size(); ++i) m.set_mass(singleton(i), weights[i]);
    return from_masses(m);
  }

  const Frame& frame() const noexcept { return base_.frame(); }
  const SetFunction& base() const noexcept { return base_; }
  const Rational& operator[](Subset s) const { return base_[s]; }
  const Rational& operator()(Subset s) const { return base_[s]; }

  SignedMassFunction mobius() const { return mobius_transform(base_); }

  bool in_unit_range() const {
    return std::all_of(base_.values().begin(), base_.values().end(),
                       [](const Rational& v) { return v >= 0 && v <= 1; });
  }

  friend bool operator==(const Capacity&, const Capacity&) = default;

 private:
  SetFunction base_;
};

/// a(E) = 1 - c(complement of E).
inline Capacity conjugate(const Capacity& c) {
  const Frame& frame = c.frame();
  SetFunction out(frame);
  for (Subset s = 0; s <= frame.full(); ++s) out[s] = 1 - c[frame.complement(s)];
  return Capacity(std::move(out));
}

// ---------------------------------------------------------------------------
// Structural property checks. Each find_* returns the first violation in
// canonical (bitmask) order, or nullopt when the property holds.

struct MonotoneViolation {
  Subset smaller;
  Subset larger;
};

/// Checks c(A) <= c(A + x) for every A and x; monotonicity follows by chaining.
inline std::optional<MonotoneViolation> find_monotone_violation(const Capacity& c) {
  const Frame& frame = c.frame();
  for (Subset a = 0; a <= frame.full(); ++a)
    for (std::size_t i = 0; i < frame.size(); ++i) {
      if (contains(a, i)) continue;
      const Subset b = a | singleton(i);
      if (c[a] > c[b]) return MonotoneViolation{a, b};
    }
  return std::nullopt;
}

struct SuperadditiveViolation {
  Subset first;
  Subset second;
};

inline std::optional<SuperadditiveViolation> find_superadditive_violation(const Capacity& c) {
  const Frame& frame = c.frame();
  for (Subset a = 0; a <= frame.full(); ++a) {
    const Subset rest = frame.complement(a);
    // Enumerate b over the subsets of rest.
    for (Subset b = rest;; b = (b - 1) & rest) {
      if (c[a | b] < c[a] + c[b]) return SuperadditiveViolation{a, b};
      if (b == 0) break;
    }
  }
  return std::nullopt;
}

/// A sequence A_1..A_k on which the k-monotonicity inequality fails.
struct KMonotoneViolation {
  std::vector<Subset> sets;
  Rational union_value;      // c(A_1 u ... u A_k)
  Rational alternating_sum;  // sum over nonempty I of (-1)^{|I|-1} c(cap A_i)
};

namespace detail {

inline Rational alternating_intersection_sum(const Capacity& c, const std::vector<Subset>& sets,
                                             Subset full) {
  Rational sum = 0;
  const std::size_t k = sets.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
    Subset meet = full;
    for (std::size_t i = 0; i < k; ++i)
      if ((mask >> i) & 1U) meet &= sets[i];
    if (std::popcount(mask) % 2 == 1)
      sum += c[meet];
    else
      sum -= c[meet];
  }
  return sum;
}

}  // namespace detail

/// Inclusion-exclusion inequality for every sequence of exactly k subsets,
/// enumerated as nondecreasing sequences with repeats.
inline std::optional<KMonotoneViolation> find_k_monotone_violation(const Capacity& c,
                                                                   std::size_t k) {
  if (k < 2) throw std::invalid_argument("k-monotonicity needs k >= 2");
  const Frame& frame = c.frame();
  const Subset full = frame.full();
  std::vector<Subset> sets(k, 0);
  while (true) {
    Subset join = 0;
    for (Subset s : sets) join |= s;
    Rational rhs = detail::alternating_intersection_sum(c, sets, full);
    if (c[join] < rhs) return KMonotoneViolation{sets, c[join], rhs};

    // Next nondecreasing sequence.
    std::size_t pos = k;
    while (pos > 0 && sets[pos - 1] == full) --pos;
    if (pos == 0) break;
    const Subset next = sets[pos - 1] + 1;
    for (std::size_t i = pos - 1; i < k; ++i) sets[i] = next;
  }
  return std::nullopt;
}

inline bool is_monotone(const Capacity& c) { return !find_monotone_violation(c); }
inline bool is_superadditive(const Capacity& c) { return !find_superadditive_violation(c); }
inline bool is_k_monotone(const Capacity& c, std::size_t k) {
  return !find_k_monotone_violation(c, k);
}

/// Nonnegative Moebius masses; equivalent to k-monotone for every k.
inline bool is_belief(const Capacity& c) { return c.mobius().nonnegative(); }

/// Additive iff every focal set is a singleton.
inline bool is_additive(const Capacity& c) {
  const SignedMassFunction m = c.mobius();
  for (const auto& [set, mass] : m.masses())
    if (cardinality(set) != 1) return false;
  return true;
}

// ---------------------------------------------------------------------------

/// Auxiliary probability space (Y, u) with a multivalued map into X.
class DempsterModel {
 public:
  DempsterModel(Frame x_frame, Frame y_frame, std::vector<Rational> u, std::vector<Subset> gamma)
      : x_frame_(std::move(x_frame)),
        y_frame_(std::move(y_frame)),
        u_(std::move(u)),
        gamma_(std::move(gamma)) {
    if (u_.size() != y_frame_.size() || gamma_.size() != y_frame_.size())
      throw std::invalid_argument("model needs one weight and one image per auxiliary element");
    Rational total = 0;
    for (std::size_t y = 0; y < u_.size(); ++y) {
      if (u_[y] <= 0)
        throw std::invalid_argument("weight of '" + y_frame_.label(y) + "' must be positive");
      if (gamma_[y] == 0 || !is_subset(gamma_[y], x_frame_.full()))
        throw std::invalid_argument("image of '" + y_frame_.label(y) +
                                    "' must be a nonempty subset of the frame");
      total += u_[y];
    }
    if (total != 1)
      throw std::invalid_argument("auxiliary weights sum to " + to_string(total) + ", expected 1");
  }

  const Frame& x_frame() const noexcept { return x_frame_; }
  const Frame& y_frame() const noexcept { return y_frame_; }
  const std::vector<Rational>& u() const noexcept { return u_; }
  const std::vector<Subset>& gamma() const noexcept { return gamma_; }

  friend bool operator==(const DempsterModel&, const DempsterModel&) = default;

 private:
  Frame x_frame_;
  Frame y_frame_;
  std::vector<Rational> u_;
  std::vector<Subset> gamma_;
};

struct DempsterProjection {
  SignedMassFunction mass;
  Capacity belief;
  Capacity plausibility;
};

/// Masses, lower and upper probabilities induced by a Dempster model. The
/// lower and upper functions are computed twice (lattice route and direct
/// u-summation); a mismatch is a logic error.
inline DempsterProjection project_dempster(const DempsterModel& model) {
  const Frame& frame = model.x_frame();
  SignedMassFunction m(frame);
  for (std::size_t y = 0; y < model.u().size(); ++y)
    m.set_mass(model.gamma()[y], m.mass(model.gamma()[y]) + model.u()[y]);

  Capacity belief = Capacity::from_masses(m);
  Capacity plausibility = conjugate(belief);

  for (Subset e = 0; e <= frame.full(); ++e) {
    Rational below = 0;
    Rational meets = 0;
    for (std::size_t y = 0; y < model.u().size(); ++y) {
      if (is_subset(model.gamma()[y], e)) below += model.u()[y];
      if (model.gamma()[y] & e) meets += model.u()[y];
    }
    if (below != belief[e] || meets != plausibility[e])
      throw std::logic_error("Dempster projection routes disagree at " + frame.format(e));
  }
  return {std::move(m), std::move(belief), std::move(plausibility)};
}

}  // namespace gpk
