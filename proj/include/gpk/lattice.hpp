#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "gpk/rational.hpp"

namespace gpk {

/// A subset of a frame, element i of the frame <-> bit i.
using Subset = std::uint32_t;

inline constexpr std::size_t kMaxFrameSize = 16;

inline int cardinality(Subset s) { return std::popcount(s); }
inline bool is_subset(Subset a, Subset b) { return (a & ~b) == 0; }
inline bool contains(Subset s, std::size_t element) { return (s >> element) & 1U; }
inline Subset singleton(std::size_t element) { return Subset{1} << element; }

/// Ordered finite universe with labeled elements.
class Frame {
 public:
  Frame() = default;

  explicit Frame(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty() || labels_.size() > kMaxFrameSize)
      throw std::invalid_argument("frame size must be between 1 and " +
                                  std::to_string(kMaxFrameSize));
    std::unordered_set<std::string> seen;
    for (const auto& label : labels_) {
      if (label.empty()) throw std::invalid_argument("empty frame label");
      if (!seen.insert(label).second)
        throw std::invalid_argument("duplicate frame label '" + label + "'");
    }
  }

  /// Frame with labels x0, x1, ... (or a, b, c, ... when n <= 26).
  static Frame of_size(std::size_t n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i)
      labels.push_back(n <= 26 ? std::string(1, static_cast<char>('a' + i))
                               : "x" + std::to_string(i));
    return Frame(std::move(labels));
  }

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t subset_count() const noexcept { return std::size_t{1} << labels_.size(); }
  Subset full() const noexcept { return static_cast<Subset>(subset_count() - 1); }
  Subset complement(Subset s) const noexcept { return full() & ~s; }

  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::optional<std::size_t> index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return i;
    return std::nullopt;
  }

  /// "{a,c}" in frame order; "{}" for the empty set.
  std::string format(Subset s) const {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (!contains(s, i)) continue;
      if (!first) out += ',';
      out += labels_[i];
      first = false;
    }
    return out + "}";
  }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::vector<std::string> labels_;
};

/// Dense table of exact values, one per subset of the frame.
class SetFunction {
 public:
  SetFunction() = default;
  explicit SetFunction(Frame frame)
      : frame_(std::move(frame)), values_(frame_.subset_count()) {}

  SetFunction(Frame frame, std::vector<Rational> values)
      : frame_(std::move(frame)), values_(std::move(values)) {
    if (values_.size() != frame_.subset_count())
      throw std::invalid_argument("set function needs exactly 2^n values");
  }

  const Frame& frame() const noexcept { return frame_; }
  const std::vector<Rational>& values() const noexcept { return values_; }
  std::vector<Rational>& values() noexcept { return values_; }

  const Rational& operator[](Subset s) const { return values_[s]; }
  Rational& operator[](Subset s) { return values_[s]; }

  friend bool operator==(const SetFunction&, const SetFunction&) = default;

 private:
  Frame frame_;
  std::vector<Rational> values_;
};

/// Sparse focal-set masses. No entry for the empty set, no zero entries.
class SignedMassFunction {
 public:
  using Map = std::map<Subset, Rational>;

  SignedMassFunction() = default;
  explicit SignedMassFunction(Frame frame) : frame_(std::move(frame)) {}
  SignedMassFunction(Frame frame, const Map& masses) : frame_(std::move(frame)) {
    for (const auto& [set, mass] : masses) set_mass(set, mass);
  }

  const Frame& frame() const noexcept { return frame_; }
  const Map& masses() const noexcept { return masses_; }

  Rational mass(Subset s) const {
    auto it = masses_.find(s);
    return it == masses_.end() ? Rational(0) : it->second;
  }

  /// Zero masses erase the entry. The empty set is rejected.
  void set_mass(Subset s, const Rational& value) {
    if (s == 0) throw std::invalid_argument("mass on the empty set");
    if (!is_subset(s, frame_.full()))
      throw std::invalid_argument("focal set outside the frame");
    if (value == 0)
      masses_.erase(s);
    else
      masses_[s] = value;
  }

  Rational total() const {
    Rational sum = 0;
    for (const auto& [set, mass] : masses_) sum += mass;
    return sum;
  }

  bool nonnegative() const {
    for (const auto& [set, mass] : masses_)
      if (mass < 0) return false;
    return true;
  }

  std::vector<Subset> focal_sets() const {
    std::vector<Subset> out;
    for (const auto& [set, mass] : masses_) out.push_back(set);
    return out;
  }

  friend bool operator==(const SignedMassFunction&, const SignedMassFunction&) = default;

 private:
  Frame frame_;
  Map masses_;
};

/// m(E) = sum over H subset of E of (-1)^{|E-H|} c(H), via the in-place
/// subset-difference recurrence in O(n 2^n).
inline SignedMassFunction mobius_transform(const SetFunction& c) {
  std::vector<Rational> v = c.values();
  const std::size_t n = c.frame().size();
  for (std::size_t i = 0; i < n; ++i) {
    const Subset bit = singleton(i);
    for (Subset s = 0; s < v.size(); ++s)
      if (s & bit) v[s] -= v[s ^ bit];
  }
  SignedMassFunction m(c.frame());
  // v[0] = c(empty); a capacity has it at 0, a raw table may not.
  for (Subset s = 1; s < v.size(); ++s)
    if (v[s] != 0) m.set_mass(s, v[s]);
  return m;
}

/// c(A) = sum of m(E) over E subset of A.
inline SetFunction zeta_transform(const SignedMassFunction& m) {
  SetFunction c(m.frame());
  auto& v = c.values();
  for (const auto& [set, mass] : m.masses()) v[set] = mass;
  const std::size_t n = m.frame().size();
  for (std::size_t i = 0; i < n; ++i) {
    const Subset bit = singleton(i);
    for (Subset s = 0; s < v.size(); ++s)
      if (s & bit) v[s] += v[s ^ bit];
  }
  return c;
}

}  // namespace gpk
