#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "gpk/capacity.hpp"
#include "gpk/credal.hpp"
#include "gpk/errors.hpp"

namespace gpk {

enum class ConditioningRule { bayes, geometric, dempster, it };

inline std::string to_string(ConditioningRule rule) {
  switch (rule) {
    case ConditioningRule::bayes: return "bayes";
    case ConditioningRule::geometric: return "geometric";
    case ConditioningRule::dempster: return "dempster";
    case ConditioningRule::it: return "it";
  }
  return "?";
}

struct ConditionedCapacity {
  Capacity capacity;
  /// Cells evaluated by the LP envelope because the closed form had a zero
  /// denominator (bayes only).
  std::vector<Subset> envelope_cells;
};

/// Conditions a lower probability on E.
///   bayes      l(A n E) / (l(A n E) + 1 - l(A u ~E))   (l 2-monotone, l(~E) < 1)
///   geometric  l(A n E) / l(E)                          (l(E) > 0)
///   dempster   (l(A u ~E) - l(~E)) / (1 - l(~E))        (l(~E) < 1)
///   it         (l(A) - l(A n ~E)) / (1 - l(~E))         (l(~E) < 1)
/// For a capacity that is not 2-monotone the bayes rule is rejected; use
/// conditional_envelope for the exact value.
inline ConditionedCapacity condition_lower(const Capacity& l, Subset e, ConditioningRule rule) {
  const Frame& frame = l.frame();
  if (!is_subset(e, frame.full())) throw std::invalid_argument("event outside the frame");
  const Subset not_e = frame.complement(e);
  const std::string event = frame.format(e);

  switch (rule) {
    case ConditioningRule::bayes:
      if (!is_k_monotone(l, 2))
        throw std::invalid_argument("bayes closed form needs a 2-monotone capacity");
      [[fallthrough]];
    case ConditioningRule::dempster:
    case ConditioningRule::it:
      if (l[not_e] >= 1)
        throw UndefinedOperation(to_string(rule) + " conditioning on " + event +
                                 " is undefined: the complement has lower probability 1");
      break;
    case ConditioningRule::geometric:
      if (l[e] <= 0)
        throw UndefinedOperation("geometric conditioning on " + event +
                                 " is undefined: it has lower probability 0");
      break;
  }

  SetFunction out(frame);
  std::vector<Subset> envelope_cells;
  for (Subset a = 0; a <= frame.full(); ++a) {
    switch (rule) {
      case ConditioningRule::bayes: {
        const Rational num = l[a & e];
        const Rational den = num + 1 - l[a | not_e];
        if (den == 0) {
          out[a] = conditional_envelope(l, a, e);
          envelope_cells.push_back(a);
        } else {
          out[a] = num / den;
        }
        break;
      }
      case ConditioningRule::geometric: out[a] = l[a & e] / l[e]; break;
      case ConditioningRule::dempster: out[a] = (l[a | not_e] - l[not_e]) / (1 - l[not_e]); break;
      case ConditioningRule::it: out[a] = (l[a] - l[a & not_e]) / (1 - l[not_e]); break;
    }
  }
  return {Capacity(std::move(out)), std::move(envelope_cells)};
}

// ---------------------------------------------------------------------------
// Asymmetric combination of belief functions b1 (prior) and b2 (evidence).

enum class CombinationRule { bar, dbar, tbar, dempster };
enum class CombinationLevel { mass, belief };

inline std::string to_string(CombinationRule rule) {
  switch (rule) {
    case CombinationRule::bar: return "bar";
    case CombinationRule::dbar: return "dbar";
    case CombinationRule::tbar: return "tbar";
    case CombinationRule::dempster: return "dempster";
  }
  return "?";
}

struct Combination {
  Capacity belief;
  SignedMassFunction mass;
};

namespace detail {

inline void check_denominators(const Capacity& b1, const SignedMassFunction& m2, CombinationRule rule) {
  const Frame& frame = b1.frame();
  for (const auto& [f, mass] : m2.masses()) {
    if (rule == CombinationRule::dbar && b1[f] <= 0)
      throw UndefinedOperation("dbar combination is undefined: b1(" + frame.format(f) +
                               ") = 0 for focal set " + frame.format(f));
    if ((rule == CombinationRule::bar || rule == CombinationRule::tbar) &&
        1 - b1[frame.complement(f)] <= 0)
      throw UndefinedOperation(to_string(rule) + " combination is undefined: 1 - b1(" +
                               frame.format(frame.complement(f)) + ") = 0 for focal set " +
                               frame.format(f));
  }
}

inline SignedMassFunction combine_masses(const Capacity& b1, const SignedMassFunction& m1,
                                         const SignedMassFunction& m2, CombinationRule rule) {
  const Frame& frame = b1.frame();
  SignedMassFunction out(frame);
  auto add = [&](Subset h, const Rational& v) {
    if (h != 0) out.set_mass(h, out.mass(h) + v);
  };
  switch (rule) {
    case CombinationRule::bar:
      // Products landing on the empty set are the renormalized-away part.
      for (const auto& [e, me] : m1.masses())
        for (const auto& [f, mf] : m2.masses())
          add(e & f, me * mf / (1 - b1[frame.complement(f)]));
      break;
    case CombinationRule::dbar:
      for (const auto& [h, mh] : m1.masses()) {
        Rational factor = 0;
        for (const auto& [f, mf] : m2.masses())
          if (is_subset(h, f)) factor += mf / b1[f];
        add(h, mh * factor);
      }
      break;
    case CombinationRule::tbar:
      for (const auto& [h, mh] : m1.masses()) {
        Rational factor = 0;
        for (const auto& [f, mf] : m2.masses())
          if (h & f) factor += mf / (1 - b1[frame.complement(f)]);
        add(h, mh * factor);
      }
      break;
    case CombinationRule::dempster: {
      Rational agreement = 0;
      for (const auto& [e, me] : m1.masses())
        for (const auto& [f, mf] : m2.masses())
          if (e & f) {
            agreement += me * mf;
            add(e & f, me * mf);
          }
      if (agreement == 0) throw UndefinedOperation("Dempster combination of totally conflicting evidence");
      SignedMassFunction normalized(frame);
      for (const auto& [h, v] : out.masses()) normalized.set_mass(h, v / agreement);
      return normalized;
    }
  }
  return out;
}

inline Capacity combine_beliefs(const Capacity& b1, const SignedMassFunction& m2, CombinationRule rule) {
  const Frame& frame = b1.frame();
  SetFunction out(frame);
  Rational agreement = 0;
  if (rule == CombinationRule::dempster) {
    for (const auto& [f, mf] : m2.masses()) agreement += mf * (1 - b1[frame.complement(f)]);
    if (agreement == 0) throw UndefinedOperation("Dempster combination of totally conflicting evidence");
  }
  for (Subset a = 0; a <= frame.full(); ++a) {
    Rational sum = 0;
    for (const auto& [f, mf] : m2.masses()) {
      const Subset not_f = frame.complement(f);
      switch (rule) {
        case CombinationRule::bar: sum += mf * (b1[a | not_f] - b1[not_f]) / (1 - b1[not_f]); break;
        case CombinationRule::dbar: sum += mf * b1[a & f] / b1[f]; break;
        case CombinationRule::tbar: sum += mf * (b1[a] - b1[a & not_f]) / (1 - b1[not_f]); break;
        case CombinationRule::dempster: sum += mf * (b1[a | not_f] - b1[not_f]); break;
      }
    }
    out[a] = rule == CombinationRule::dempster ? Rational(sum / agreement) : sum;
  }
  return Capacity(std::move(out));
}

}  // namespace detail

/// Combines two belief functions. The mass level evaluates the focal-set
/// products and sums; the belief level evaluates the equivalent set
/// function forms directly. Both levels produce the same capacity.
inline Combination combine_belief(const Capacity& b1, const Capacity& b2, CombinationRule rule,
                                  CombinationLevel level) {
  if (!(b1.frame() == b2.frame())) throw std::invalid_argument("capacities live on different frames");
  const SignedMassFunction m1 = b1.mobius();
  const SignedMassFunction m2 = b2.mobius();
  if (!m1.nonnegative()) throw std::invalid_argument("b1 is not a belief function");
  if (!m2.nonnegative()) throw std::invalid_argument("b2 is not a belief function");
  detail::check_denominators(b1, m2, rule);

  if (level == CombinationLevel::mass) {
    SignedMassFunction m = detail::combine_masses(b1, m1, m2, rule);
    Capacity c = Capacity::from_masses(m);
    return {std::move(c), std::move(m)};
  }
  Capacity c = detail::combine_beliefs(b1, m2, rule);
  SignedMassFunction m = c.mobius();
  return {std::move(c), std::move(m)};
}

}  // namespace gpk
