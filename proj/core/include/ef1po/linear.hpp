#pragma once

#include "ef1po/rational.hpp"

#include <optional>
#include <vector>

namespace ef1po {

/// Solves the square system A x = b exactly by Gauss-Jordan elimination.
/// Returns nothing when A is singular.
std::optional<std::vector<Rat>> solve_linear(std::vector<std::vector<Rat>> a, std::vector<Rat> b);

}  // namespace ef1po
