// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
// Usage: acceptance <path-to-condexp-cli> <data-dir>

#include "condexp/density.hpp"
#include "condexp/functional.hpp"
#include "condexp/problem_file.hpp"
#include "condexp/solvers.hpp"
#include "support/random_problems.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace condexp;

namespace {

constexpr std::uint64_t kSeed = 20240917;
constexpr std::size_t kProblems = 200;
constexpr std::size_t kSmallSuite = 50;

struct Verdict {
    bool pass = true;
    std::string detail;
};

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(3) << v;
    return os.str();
}

std::vector<testing::RandomProblem> make_problems(std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<testing::RandomProblem> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(testing::random_problem(rng, 2, 64));
    return out;
}

Verdict cross_solver(const std::vector<testing::RandomProblem>& problems) {
    double worst_projection = 0.0, worst_gradient = 0.0;
    for (const auto& p : problems) {
        const auto oracle = solve_oracle(p.space, p.g, p.x).xi;
        const auto projection = solve_projection(p.space, p.g, p.x).xi;
        const auto gradient = solve_gradient(p.space, p.g, p.x).result.xi;
        worst_projection = std::max(worst_projection, norm2(p.space, oracle - projection));
        worst_gradient = std::max(worst_gradient, norm2(p.space, oracle - gradient));
    }
    return {worst_projection <= 1e-10 && worst_gradient <= 1e-12,
            "max ||oracle - projection|| = " + fmt(worst_projection) + " (<= 1e-10), " +
                "max ||oracle - gradient|| = " + fmt(worst_gradient) + " (<= 1e-12)"};
}

Verdict defining_property(const std::vector<testing::RandomProblem>& problems) {
    std::size_t failures = 0, detected = 0;
    double worst_ratio = 0.0;
    Rng rng(kSeed + 2);
    for (std::size_t i = 0; i < problems.size(); ++i) {
        const auto& p = problems[i];
        const auto r = solve_oracle(p.space, p.g, p.x);
        DefiningPropertyOptions options;
        options.seed = i;
        const auto report = verify_defining_property(p.space, p.g, p.x, r.xi, options);
        if (!report.overall_pass()) ++failures;
        for (const auto& c : report.checks)
            worst_ratio = std::max(worst_ratio, c.max_defect / c.tolerance);

        std::vector<std::size_t> non_null;
        const auto probs = atom_probabilities(p.space, p.g);
        for (std::size_t j = 0; j < probs.size(); ++j)
            if (probs[j] > 0.0) non_null.push_back(j);
        const std::size_t j =
            non_null[std::uniform_int_distribution<std::size_t>(0, non_null.size() - 1)(rng)];
        auto values = r.atom_values;
        values[j] += 0.1;
        const auto corrupted = from_atom_values(p.g, values);
        if (!verify_defining_property(p.space, p.g, p.x, corrupted, options).overall_pass())
            ++detected;
    }
    return {failures == 0 && detected == problems.size(),
            std::to_string(problems.size() - failures) + "/" + std::to_string(problems.size()) +
                " pass, worst defect/tolerance = " + fmt(worst_ratio) + "; corruption detected " +
                std::to_string(detected) + "/" + std::to_string(problems.size())};
}

Verdict product_identity(const std::vector<testing::RandomProblem>& problems) {
    std::size_t failures = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < problems.size(); ++i) {
        const auto& p = problems[i];
        const auto xi = solve_oracle(p.space, p.g, p.x).xi;
        const auto report = verify_product_identity(p.space, p.g, p.x, xi, 100, kSeed + i);
        if (!report.overall_pass()) ++failures;
        for (const auto& c : report.checks) worst = std::max(worst, c.max_defect);
    }
    return {failures == 0, std::to_string(failures) + " failures, worst normalized defect " +
                               fmt(worst) + " (<= 1e-10)"};
}

Verdict dirichlet(const std::vector<testing::RandomProblem>& problems) {
    std::size_t failures = 0;
    double worst_relative = 0.0;
    for (std::size_t i = 0; i < problems.size(); ++i) {
        const auto& p = problems[i];
        const auto xi = solve_oracle(p.space, p.g, p.x).xi;
        DirichletOptions options;
        options.samples = 100;
        options.seed = kSeed + i;
        const auto report = verify_dirichlet(p.space, p.g, p.x, xi, options);
        if (!report.overall_pass()) ++failures;
        for (const auto& c : report.checks)
            if (c.name == "dirichlet.gap_equals_half_distance")
                worst_relative = std::max(worst_relative, c.max_defect);
    }
    return {failures == 0, std::to_string(failures) + " failures, worst relative gap defect " +
                               fmt(worst_relative) + " (<= 1e-10)"};
}

Verdict gateaux(const std::vector<testing::RandomProblem>& problems) {
    std::size_t failures = 0;
    std::vector<std::pair<std::string, double>> worst;
    const auto steps = default_step_sizes();
    for (std::size_t i = 0; i < problems.size(); ++i) {
        const auto& p = problems[i];
        const EnergyProblem problem(p.space, p.x, p.g);
        const auto report = check_derivatives(problem, 20, steps, kSeed + i);
        if (!report.pass() || report.step_sizes.size() != 6) ++failures;
        if (worst.empty())
            for (const auto& f : report.formulas) worst.emplace_back(f.name, 0.0);
        for (std::size_t k = 0; k < report.formulas.size(); ++k)
            worst[k].second = std::max(worst[k].second, report.formulas[k].max_defect);
    }
    std::string detail = std::to_string(failures) + " failures; worst defects:";
    for (const auto& [name, d] : worst) detail += " " + name + " " + fmt(d);
    return {failures == 0, detail};
}

Verdict gradient_descent(const std::vector<testing::RandomProblem>& problems) {
    constexpr double kBand = 1e-12;
    std::size_t not_converged = 0, not_monotone = 0, most_iterations = 0;
    for (const auto& p : problems) {
        GradientConfig config;
        config.step_policy = StepPolicy::Fixed;
        config.tolerance = 1e-10;
        config.max_iterations = 2000;
        const auto out = solve_gradient(p.space, p.g, p.x, config);
        if (!out.converged) ++not_converged;
        most_iterations = std::max(most_iterations, out.result.iterations);

        const EnergyProblem problem(p.space, p.x, p.g);
        const double j_min = j_eval(problem, solve_oracle(p.space, p.g, p.x).xi);
        const auto& trace = out.energy_trace;
        bool ok = true;
        for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
            if (trace[k] - j_min > kBand)
                ok = ok && trace[k + 1] < trace[k];
            else
                ok = ok && trace[k + 1] - j_min <= kBand;
        }
        if (!ok) ++not_monotone;
    }
    return {not_converged == 0 && not_monotone == 0,
            std::to_string(problems.size() - not_converged) + "/" +
                std::to_string(problems.size()) + " converged within 2000 iterations (max " +
                std::to_string(most_iterations) + "), " + std::to_string(not_monotone) +
                " non-monotone traces"};
}

Verdict tower(const std::string& data_dir) {
    Rng rng(kSeed + 7);
    std::size_t failures = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < kSmallSuite; ++i) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 64)(rng);
        const auto fine_labels = testing::random_labels(n, rng);
        const auto coarse_labels = testing::coarsen(fine_labels, rng);
        const auto space = ProbabilitySpace::create(testing::random_weights(n, rng));
        const auto x = random_variable(n, rng);
        const auto report = tower_check(space, SigmaAlgebra::from_labels(coarse_labels),
                                        SigmaAlgebra::from_labels(fine_labels), x);
        if (!report.overall_pass()) ++failures;
        worst = std::max(worst, report.checks.front().max_defect);
    }

    const auto file = ProblemFile::load(data_dir + "/tower8.json");
    const auto space = file.space();
    const auto x = file.variable("X");
    const auto fine = file.sigma("G");
    const auto coarse = file.sigma("halves");
    const auto nested = solve_oracle(space, coarse, solve_oracle(space, fine, x).xi).xi;
    const auto direct = solve_oracle(space, coarse, x).xi;
    const RandomVariable expected{2.5, 2.5, 2.5, 2.5, 6.5, 6.5, 6.5, 6.5};
    const bool fixture = tower_check(space, coarse, fine, x).overall_pass() &&
                         almost_sure_distance(space, nested, expected) <= 1e-11 &&
                         almost_sure_distance(space, direct, expected) <= 1e-11;
    return {failures == 0 && fixture,
            std::to_string(kSmallSuite - failures) + "/" + std::to_string(kSmallSuite) +
                " refinement pairs pass (worst defect " + fmt(worst) +
                "), 8-point fixture " + (fixture ? "matches" : "MISMATCH")};
}

Verdict density(const std::vector<testing::RandomProblem>& problems) {
    std::size_t outside = 0, not_recovered = 0;
    for (const auto& p : problems) {
        const auto xi = solve_oracle(p.space, p.g, p.x).xi;
        if (!approximation_trace(p.space, p.g, xi, 10).within_bound) ++outside;

        std::vector<double> distinct(xi.values().begin(), xi.values().end());
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        const double range = distinct.back() - distinct.front();
        double gap = range;
        for (std::size_t i = 1; i < distinct.size(); ++i)
            gap = std::min(gap, distinct[i] - distinct[i - 1]);
        std::size_t k = 1;
        while (gap > 0.0 && std::ldexp(range, -static_cast<int>(k)) >= gap / 2 && k < 60) ++k;
        if (!(staircase(p.space, p.g, xi, k) == xi)) ++not_recovered;
    }
    return {outside == 0 && not_recovered == 0,
            std::to_string(problems.size() - outside) + "/" + std::to_string(problems.size()) +
                " traces within (max-min)/2^k for k=1..10, exact recovery " +
                std::to_string(problems.size() - not_recovered) + "/" +
                std::to_string(problems.size())};
}

Verdict l1_extension(const std::vector<testing::RandomProblem>& problems,
                     const std::string& data_dir) {
    std::vector<double> schedule;
    for (int e = 0; e <= 24; ++e) schedule.push_back(std::ldexp(1.0, e));
    std::size_t violations = 0;
    Rng rng(kSeed + 9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const auto& p : problems) {
        // Pareto-type tails: |X| = 1/U.
        std::vector<double> heavy(p.x.size());
        for (std::size_t i = 0; i < heavy.size(); ++i)
            heavy[i] = (p.x[i] < 0 ? -1.0 : 1.0) / std::max(unit(rng), 1e-7);
        const auto trace = l1_extension_trace(p.space, p.g, RandomVariable(heavy), schedule);
        if (!trace.within_bound) ++violations;
    }

    const auto file = ProblemFile::load(data_dir + "/heavy_tail.json");
    const std::vector<double> levels{1, 10, 25, 50, 75, 99, 100, 150, 1000};
    const auto trace = l1_extension_trace(file.space(), file.sigma("G"), file.variable("X"), levels);
    double worst = 0.0;
    for (std::size_t s = 0; s < levels.size(); ++s) {
        const double expected = levels[s] < 100 ? 0.25 * (100 - levels[s]) : 0.0;
        worst = std::max(worst, std::abs(trace.errors_l1[s] - expected));
    }
    return {violations == 0 && worst <= 1e-12,
            std::to_string(problems.size() - violations) + "/" + std::to_string(problems.size()) +
                " traces respect ||xi_n - xi||_1 <= ||X_n - X||_1; heavy-tail fixture max error " +
                fmt(worst)};
}

struct CliRun {
    int exit_code = -1;
    std::string out;
};

CliRun run_cli(const std::string& cli, const std::string& args) {
    const std::string command = "\"" + cli + "\" " + args + " 2>/dev/null";
    CliRun run;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) return run;
    std::array<char, 4096> buffer{};
    std::size_t got = 0;
    while ((got = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) run.out.append(buffer.data(), got);
    const int status = pclose(pipe);
    run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return run;
}

Verdict cli_black_box(const std::string& cli, const std::string& data_dir) {
    const std::vector<std::string> fixtures{"uniform4.json", "tower8.json", "heavy_tail.json"};
    const std::vector<std::string> commands{
        "solve",
        "solve --method projection",
        "solve --method gradient --step-policy fixed --verify",
        "verify",
        "check-derivatives",
        "density",
    };
    std::size_t identical = 0, total = 0;
    bool clean_exits = true;
    for (const auto& f : fixtures) {
        for (const auto& c : commands) {
            const std::string args = "--space " + data_dir + "/" + f + " --seed 11 --out - " + c;
            const auto a = run_cli(cli, args);
            const auto b = run_cli(cli, args);
            ++total;
            if (a.exit_code == 0 && b.exit_code == 0 && !a.out.empty() && a.out == b.out)
                ++identical;
            if (a.exit_code != 0) clean_exits = false;
        }
    }

    const int corrupted =
        run_cli(cli, "--space " + data_dir + "/uniform4.json verify --claimed xi_corrupted")
            .exit_code;
    {
        std::ofstream bad("acceptance_malformed.json");
        bad << "{\"probabilities\": [1, 1], \"variables\": {\"X\": [1, 2]";
    }
    const int malformed = run_cli(cli, "--space acceptance_malformed.json solve").exit_code;
    std::remove("acceptance_malformed.json");

    return {identical == total && clean_exits && corrupted == 3 && malformed == 2,
            std::to_string(identical) + "/" + std::to_string(total) +
                " report pairs byte-identical; exit codes: corrupted xi " +
                std::to_string(corrupted) + " (expect 3), malformed file " +
                std::to_string(malformed) + " (expect 2)"};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: acceptance <condexp-cli> <data-dir>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const std::string data_dir = argv[2];

    const auto problems = make_problems(kProblems, kSeed);
    const std::vector<testing::RandomProblem> small(problems.begin(),
                                                    problems.begin() + kSmallSuite);

    struct Criterion {
        int id;
        const char* name;
        std::function<Verdict()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "cross-solver agreement", [&] { return cross_solver(problems); }},
        {2, "defining property", [&] { return defining_property(problems); }},
        {3, "product identity", [&] { return product_identity(problems); }},
        {4, "dirichlet principle", [&] { return dirichlet(problems); }},
        {5, "gateaux calculus", [&] { return gateaux(problems); }},
        {6, "gradient descent", [&] { return gradient_descent(problems); }},
        {7, "tower property", [&] { return tower(data_dir); }},
        {8, "staircase density", [&] { return density(small); }},
        {9, "L1 extension", [&] { return l1_extension(small, data_dir); }},
        {10, "CLI black box", [&] { return cli_black_box(cli, data_dir); }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!v.pass) ++failed;
        std::cout << (v.pass ? "PASS" : "FAIL") << "  [" << std::setw(2) << c.id << "] " << c.name
                  << ": " << v.detail << " (" << std::fixed << std::setprecision(2) << seconds
                  << " s)" << std::defaultfloat << '\n';
    }
    std::cout << (failed == 0 ? "all 10 criteria passed" : std::to_string(failed) + " criteria failed")
              << '\n';
    return failed == 0 ? 0 : 1;
}
