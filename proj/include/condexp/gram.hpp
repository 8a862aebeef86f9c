#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace condexp {

/// Dense symmetric matrix in row-major order.
class SymmetricMatrix {
public:
    explicit SymmetricMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }

private:
    std::size_t n_;
    std::vector<double> data_;
};

/// Result of a symmetric positive semidefinite solve.
struct GramSolution {
    std::vector<double> coefficients;
    std::size_t rank = 0;
    /// Diagonal pivots that fell under the rank tolerance, in original indexing.
    std::vector<std::size_t> dropped;
};

/// Solves G c = b for symmetric positive semidefinite G via Cholesky with
/// diagonal pivoting. Pivots at or below rank_tolerance * max_i G(i,i) end
/// the factorization; for a consistent rank-deficient system the returned c
/// is the minimum Euclidean norm solution.
GramSolution solve_gram(const SymmetricMatrix& gram, std::span<const double> rhs,
                        double rank_tolerance = 1e-12);

}  // namespace condexp
