#include "condexp/density.hpp"

#include "condexp/error.hpp"
#include "condexp/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace condexp {

namespace {

std::pair<double, double> value_range(const RandomVariable& x) {
    const auto [lo, hi] = std::minmax_element(x.values().begin(), x.values().end());
    return {*lo, *hi};
}

}  // namespace

RandomVariable staircase(const ProbabilitySpace& space, const SigmaAlgebra& g,
                         const RandomVariable& x, std::size_t k) {
    require_compatible(space, g);
    require_member(space, x);
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "staircase level must be at least 1");
    if (k >= static_cast<std::size_t>(std::numeric_limits<std::uint64_t>::digits))
        throw Error(ErrorCode::InvalidArgument, "staircase level too large");
    require_measurable(space, g, x, "staircase input");

    const auto [lo, hi] = value_range(x);
    const double range = hi - lo;
    if (range == 0.0) return x;

    const std::uint64_t cells = std::uint64_t{1} << k;
    auto cell_of = [&](double v) {
        // (v - lo) / range is computed once per value; scaling by 2^k is
        // exact, so cells at level k + 1 nest inside those at level k.
        const double scaled = std::ldexp((v - lo) / range, static_cast<int>(k));
        const auto c = static_cast<std::uint64_t>(std::floor(scaled));
        return std::min(c, cells - 1);
    };

    std::map<std::uint64_t, double> cell_floor;
    for (double v : x.values()) {
        auto [it, inserted] = cell_floor.try_emplace(cell_of(v), v);
        if (!inserted) it->second = std::min(it->second, v);
    }
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = cell_floor.at(cell_of(x[i]));
    return RandomVariable(std::move(out));
}

ApproximationTrace approximation_trace(const ProbabilitySpace& space, const SigmaAlgebra& g,
                                       const RandomVariable& x, std::size_t k_max) {
    if (k_max == 0) throw Error(ErrorCode::InvalidArgument, "k_max must be at least 1");
    require_member(space, x);
    const auto [lo, hi] = value_range(x);
    const double range = hi - lo;

    ApproximationTrace trace;
    trace.levels = k_max;
    for (std::size_t k = 1; k <= k_max; ++k) {
        const RandomVariable s = staircase(space, g, x, k);
        const RandomVariable diff = x - s;
        const double width = std::ldexp(range, -static_cast<int>(k));
        trace.parameter.push_back(width);
        trace.errors_l2.push_back(norm2(space, diff));
        trace.errors_l1.push_back(norm1(space, diff));
        trace.bound.push_back(width);
        if (trace.errors_l2.back() > width) trace.within_bound = false;
        if (k > 1 && trace.errors_l2[k - 1] > trace.errors_l2[k - 2]) trace.monotone = false;
    }
    return trace;
}

RandomVariable truncate(const RandomVariable& x, double n) {
    if (!(n > 0.0) || std::isnan(n))
        throw Error(ErrorCode::InvalidArgument, "truncation level must be positive");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::clamp(x[i], -n, n);
    return RandomVariable(std::move(out));
}

ApproximationTrace l1_extension_trace(const ProbabilitySpace& space, const SigmaAlgebra& g,
                                      const RandomVariable& x,
                                      std::span<const double> n_schedule) {
    if (n_schedule.empty())
        throw Error(ErrorCode::InvalidArgument, "truncation schedule is empty");
    for (std::size_t s = 0; s < n_schedule.size(); ++s) {
        if (!(n_schedule[s] > 0.0))
            throw Error(ErrorCode::InvalidArgument, "truncation levels must be positive");
        if (s > 0 && !(n_schedule[s] > n_schedule[s - 1]))
            throw Error(ErrorCode::InvalidArgument, "truncation schedule must be increasing");
    }

    const CondExpResult limit = solve_oracle(space, g, x);
    ApproximationTrace trace;
    trace.levels = n_schedule.size();
    for (double n : n_schedule) {
        const RandomVariable clipped = truncate(x, n);
        const CondExpResult approx = solve_oracle(space, g, clipped);
        const RandomVariable diff = approx.xi - limit.xi;
        const double l1 = norm1(space, diff);
        const double bound = norm1(space, clipped - x);
        trace.parameter.push_back(n);
        trace.errors_l1.push_back(l1);
        trace.errors_l2.push_back(norm2(space, diff));
        trace.bound.push_back(bound);
        if (l1 > bound + kContractionSlack * (1.0 + bound)) trace.within_bound = false;
        const std::size_t k = trace.errors_l1.size();
        if (k > 1 && trace.errors_l1[k - 1] > trace.errors_l1[k - 2]) trace.monotone = false;
    }
    return trace;
}

}  // namespace condexp
