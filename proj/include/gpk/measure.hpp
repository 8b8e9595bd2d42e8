#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "gpk/errors.hpp"
#include "gpk/lattice.hpp"

namespace gpk {

/// Additive set function given by per-element weights summing to 1. The
/// weights may be negative; see `is_probability`.
class SignedMeasure {
 public:
  SignedMeasure() = default;
  SignedMeasure(Frame frame, std::vector<Rational> weights)
      : frame_(std::move(frame)), weights_(std::move(weights)) {
    if (weights_.size() != frame_.size())
      throw std::invalid_argument("measure needs one weight per frame element");
  }

  const Frame& frame() const noexcept { return frame_; }
  const std::vector<Rational>& weights() const noexcept { return weights_; }
  const Rational& weight(std::size_t element) const { return weights_.at(element); }

  Rational operator()(Subset s) const {
    Rational sum = 0;
    for (std::size_t i = 0; i < weights_.size(); ++i)
      if (contains(s, i)) sum += weights_[i];
    return sum;
  }

  Rational total() const { return (*this)(frame_.full()); }

  bool is_probability() const {
    if (total() != 1) return false;
    for (const auto& w : weights_)
      if (w < 0) return false;
    return true;
  }

  friend bool operator==(const SignedMeasure&, const SignedMeasure&) = default;

 protected:
  Frame frame_;
  std::vector<Rational> weights_;
};

/// Nonnegative weights summing to exactly 1.
class ProbabilityMeasure : public SignedMeasure {
 public:
  ProbabilityMeasure() = default;
  ProbabilityMeasure(Frame frame, std::vector<Rational> weights)
      : SignedMeasure(std::move(frame), std::move(weights)) {
    for (std::size_t i = 0; i < weights_.size(); ++i)
      if (weights_[i] < 0)
        throw std::invalid_argument("probability of '" + frame_.label(i) + "' is negative");
    if (total() != 1)
      throw std::invalid_argument("probabilities sum to " + to_string(total()) + ", expected 1");
  }

  explicit ProbabilityMeasure(const SignedMeasure& measure)
      : ProbabilityMeasure(measure.frame(), measure.weights()) {}

  static ProbabilityMeasure uniform(const Frame& frame) {
    return ProbabilityMeasure(frame,
                              std::vector<Rational>(frame.size(), make_rational(1, frame.size())));
  }

  /// p(A | E). Throws UndefinedOperation when p(E) = 0.
  Rational conditional(Subset a, Subset e) const {
    const Rational pe = (*this)(e);
    if (pe == 0)
      throw UndefinedOperation("conditioning on " + frame_.format(e) + " of probability zero");
    return (*this)(a & e) / pe;
  }

  bool strictly_positive_on(Subset s) const { return (*this)(s) > 0; }
};

/// Probability on X x Y, stored row-major by X element.
class JointMeasure {
 public:
  JointMeasure(Frame x_frame, Frame y_frame, std::vector<Rational> weights)
      : x_frame_(std::move(x_frame)), y_frame_(std::move(y_frame)), weights_(std::move(weights)) {
    if (weights_.size() != x_frame_.size() * y_frame_.size())
      throw std::invalid_argument("joint measure needs |X|*|Y| weights");
    Rational total = 0;
    for (const auto& w : weights_) {
      if (w < 0) throw std::invalid_argument("joint weights must be nonnegative");
      total += w;
    }
    if (total != 1)
      throw std::invalid_argument("joint weights sum to " + to_string(total) + ", expected 1");
  }

  const Frame& x_frame() const noexcept { return x_frame_; }
  const Frame& y_frame() const noexcept { return y_frame_; }
  const std::vector<Rational>& weights() const noexcept { return weights_; }

  const Rational& at(std::size_t x, std::size_t y) const {
    return weights_.at(x * y_frame_.size() + y);
  }

  /// Q(A x B) for A subset of X and B subset of Y.
  Rational rectangle(Subset a, Subset b) const {
    Rational sum = 0;
    for (std::size_t x = 0; x < x_frame_.size(); ++x) {
      if (!contains(a, x)) continue;
      for (std::size_t y = 0; y < y_frame_.size(); ++y)
        if (contains(b, y)) sum += at(x, y);
    }
    return sum;
  }

  ProbabilityMeasure x_marginal() const {
    std::vector<Rational> w(x_frame_.size());
    for (std::size_t x = 0; x < x_frame_.size(); ++x)
      for (std::size_t y = 0; y < y_frame_.size(); ++y) w[x] += at(x, y);
    return ProbabilityMeasure(x_frame_, std::move(w));
  }

  std::vector<Rational> y_marginal() const {
    std::vector<Rational> w(y_frame_.size());
    for (std::size_t x = 0; x < x_frame_.size(); ++x)
      for (std::size_t y = 0; y < y_frame_.size(); ++y) w[y] += at(x, y);
    return w;
  }

  friend bool operator==(const JointMeasure&, const JointMeasure&) = default;

 private:
  Frame x_frame_;
  Frame y_frame_;
  std::vector<Rational> weights_;
};

}  // namespace gpk
