#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "gpk/gpk.hpp"

namespace gpk::test {

inline Rational R(const std::string& text) {
  Rational r;
  if (!parse_rational(text, r)) throw std::invalid_argument("bad rational in test: " + text);
  return r;
}

inline Subset S(const Frame& frame, const std::string& literal) {
  return detail::parse_subset(frame, literal, 0).first;
}

/// Capacity given by sparse (subset, value) pairs; the full frame gets 1.
inline Capacity capacity(const Frame& frame,
                         std::initializer_list<std::pair<const char*, const char*>> values) {
  SetFunction f(frame);
  f[frame.full()] = 1;
  for (const auto& [set, value] : values) f[S(frame, set)] = R(value);
  return Capacity(std::move(f));
}

inline SignedMassFunction masses(const Frame& frame,
                                 std::initializer_list<std::pair<const char*, const char*>> values) {
  SignedMassFunction m(frame);
  for (const auto& [set, value] : values) m.set_mass(S(frame, set), R(value));
  return m;
}

inline ProbabilityMeasure probability(const Frame& frame, std::initializer_list<const char*> weights) {
  std::vector<Rational> w;
  for (const char* v : weights) w.push_back(R(v));
  return ProbabilityMeasure(frame, std::move(w));
}

inline const Frame& abc() {
  static const Frame f({"a", "b", "c"});
  return f;
}

inline const Frame& ab() {
  static const Frame f({"a", "b"});
  return f;
}

/// Singletons 0, pairs 1/2.
inline Capacity pairs_capacity() {
  return capacity(abc(), {{"{a,b}", "1/2"}, {"{a,c}", "1/2"}, {"{b,c}", "1/2"}});
}

inline Capacity nonmonotone_witness() {
  return capacity(abc(), {{"{a}", "1/2"}, {"{a,b}", "1/4"}, {"{a,c}", "1/2"}});
}

/// Pairs {a,b} and {a,c} at 3/4, everything else minimal.
inline Capacity monotone_not_supermodular() {
  return capacity(abc(), {{"{a,b}", "3/4"}, {"{a,c}", "3/4"}});
}

/// m({a}) = 1/2, m({b,c}) = 1/2.
inline Capacity split_belief() {
  return Capacity::from_masses(masses(abc(), {{"{a}", "1/2"}, {"{b,c}", "1/2"}}));
}

/// m({a}) = 1/2, m(X) = 1/2 on {a,b}.
inline Capacity half_a_belief() {
  return Capacity::from_masses(masses(ab(), {{"{a}", "1/2"}, {"{a,b}", "1/2"}}));
}

inline DempsterModel two_point_model() {
  return DempsterModel(ab(), Frame({"y1", "y2"}), {R("1/2"), R("1/2")},
                       {S(ab(), "{a}"), S(ab(), "{a,b}")});
}

}  // namespace gpk::test
