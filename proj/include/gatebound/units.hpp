#pragma once

#include <numbers>
#include <string_view>

namespace gatebound {

using std::numbers::pi;

enum class UnitSystem { natural, si };

/// Reduced Planck constant in J*s (CODATA 2018, exact).
inline constexpr double hbar_si = 1.054571817e-34;

constexpr double hbar_of(UnitSystem units) {
  return units == UnitSystem::si ? hbar_si : 1.0;
}

constexpr std::string_view to_string(UnitSystem units) {
  return units == UnitSystem::si ? "si" : "natural";
}

} // namespace gatebound
