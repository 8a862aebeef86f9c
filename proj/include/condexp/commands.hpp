#pragma once

#include "condexp/problem_file.hpp"
#include "condexp/solvers.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace condexp {

enum class RunStatus {
    Ok,
    NotConverged,
    VerificationFailed,
};

/// Output of one command: a deterministic JSON document (no timings) and a
/// human-readable rendering of the same content.
struct RunReport {
    std::string command;
    RunStatus status = RunStatus::Ok;
    std::string json;
    std::string text;
};

struct SolveOptions {
    std::string variable = "X";
    std::string sigma = "G";
    Method method = Method::Oracle;
    GradientConfig gradient;
    /// Variable names forming a projection basis; atom indicators if empty.
    std::vector<std::string> basis;
    bool verify = false;
    std::uint64_t seed = 0;
};

struct VerifyOptions {
    std::string variable = "X";
    std::string sigma = "G";
    std::uint64_t seed = 0;
    std::size_t samples = 100;
    /// Replaces every check tolerance when set.
    std::optional<double> tolerance;
    /// Variable holding a claimed E(X|G); the oracle solution otherwise.
    std::string claimed;
    /// Coarser sigma-algebra for the tower check.
    std::string coarse;
};

struct DerivativeOptions {
    std::string variable = "X";
    std::string sigma = "G";
    std::uint64_t seed = 0;
    std::size_t directions = 20;
    std::vector<double> steps;  // default_step_sizes() when empty
    std::optional<double> tolerance;
};

struct DensityOptions {
    std::string variable = "X";
    std::string sigma = "G";
    std::size_t k_max = 10;
    /// Truncation levels; powers of ten up to max |X| when empty.
    std::vector<double> schedule;
};

RunReport run_solve(const ProblemFile& problem, const SolveOptions& options);
RunReport run_verify(const ProblemFile& problem, const VerifyOptions& options);
RunReport run_check_derivatives(const ProblemFile& problem, const DerivativeOptions& options);
RunReport run_density(const ProblemFile& problem, const DensityOptions& options);

}  // namespace condexp
