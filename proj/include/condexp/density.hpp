#pragma once

#include "condexp/prob_space.hpp"
#include "condexp/sigma_algebra.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace condexp {

/// Per-level record of an approximating sequence. For staircase traces the
/// level parameter is the grid width and the bound is the envelope
/// (max - min) / 2^k on the L2 error. For L1 extension traces the parameter
/// is the truncation level n, the errors compare xi_n with xi, and the bound
/// is ||truncate(X, n) - X||_1 on the L1 error.
struct ApproximationTrace {
    std::size_t levels = 0;
    std::vector<double> parameter;
    std::vector<double> errors_l2;
    std::vector<double> errors_l1;
    std::vector<double> bound;
    bool within_bound = true;
    bool monotone = true;
};

/// Simple G-measurable approximation of a G-measurable X. The range
/// [min X, max X] is cut into 2^k cells of equal width (the last one closed)
/// and every outcome takes the smallest value of X found in its cell, so
/// |X - S_k| stays below the cell width, the levels are nested, and S_k = X
/// as soon as the cells separate the distinct values of X.
/// Throws Error{NotMeasurable} or Error{InvalidArgument} for k == 0.
RandomVariable staircase(const ProbabilitySpace& space, const SigmaAlgebra& g,
                         const RandomVariable& x, std::size_t k);

ApproximationTrace approximation_trace(const ProbabilitySpace& space, const SigmaAlgebra& g,
                                       const RandomVariable& x, std::size_t k_max);

/// Clamps every value to [-n, n]. Throws Error{InvalidArgument} for n <= 0.
RandomVariable truncate(const RandomVariable& x, double n);

/// Relative slack admitted on the L1 contraction bound, which is attained
/// with equality whenever truncation moves every value of an atom the same way.
inline constexpr double kContractionSlack = 1e-12;

/// xi_n = E(truncate(X, n) | G) along a strictly increasing schedule, with
/// ||xi_n - xi||_1 and ||xi_n - xi||_2 against xi = E(X | G).
ApproximationTrace l1_extension_trace(const ProbabilitySpace& space, const SigmaAlgebra& g,
                                      const RandomVariable& x,
                                      std::span<const double> n_schedule);

}  // namespace condexp
