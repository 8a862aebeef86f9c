#pragma once

#include "condexp/sigma_algebra.hpp"

#include <cstdint>
#include <random>

namespace condexp {

using Rng = std::mt19937_64;

/// A G-measurable variable with i.i.d. uniform atom values in [-1, 1].
RandomVariable random_measurable(const SigmaAlgebra& g, Rng& rng);

/// A variable with i.i.d. uniform values in [-1, 1] on every outcome.
RandomVariable random_variable(std::size_t n, Rng& rng);

}  // namespace condexp
