#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "gpk/capacity.hpp"
#include "gpk/credal.hpp"

namespace gpk {

enum class PropertyKind { monotone, superadditive, k_monotone, belief, coherent };

struct Property {
  PropertyKind kind = PropertyKind::monotone;
  std::size_t k = 2;  // k_monotone only

  static Property monotone() { return {PropertyKind::monotone}; }
  static Property superadditive() { return {PropertyKind::superadditive}; }
  static Property k_monotone(std::size_t k) {
    if (k < 2) throw std::invalid_argument("k-monotonicity needs k >= 2");
    return {PropertyKind::k_monotone, k};
  }
  static Property belief() { return {PropertyKind::belief}; }
  static Property coherent() { return {PropertyKind::coherent}; }

  std::string name() const {
    switch (kind) {
      case PropertyKind::monotone: return "monotone";
      case PropertyKind::superadditive: return "superadditive";
      case PropertyKind::k_monotone: return std::to_string(k) + "-monotone";
      case PropertyKind::belief: return "belief";
      case PropertyKind::coherent: return "coherent";
    }
    return "?";
  }
};

inline bool check_property(const Capacity& c, const Property& property) {
  switch (property.kind) {
    case PropertyKind::monotone: return is_monotone(c);
    case PropertyKind::superadditive: return is_superadditive(c);
    case PropertyKind::k_monotone:
      if (property.k < 2) throw std::invalid_argument("k-monotonicity needs k >= 2");
      return is_k_monotone(c, property.k);
    case PropertyKind::belief: return is_belief(c);
    case PropertyKind::coherent: return check_coherent(c);
  }
  return false;
}

}  // namespace gpk
