#pragma once

#include <cstdint>

#include "rrbeam/scenario.hpp"

namespace rrbeam {

/// Closed-form complex multiplications per iteration for the four MJIO
/// variants. Throws InvalidArgument for other identifiers or when !(m >= d >= 1).
std::uint64_t complexity_model(Algorithm algorithm, std::uint64_t m, std::uint64_t d);

}  // namespace rrbeam
