#include "condexp/gram.hpp"

#include "condexp/error.hpp"
#include "condexp/summation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace condexp {

namespace {

// Solves A z = y in place for the r x r SPD matrix A = M^T M, given its
// Cholesky factor R (upper triangular, A = R^T R), stored row-major.
void cholesky_solve(const std::vector<double>& r_factor, std::size_t r,
                    std::vector<double>& z) {
    for (std::size_t i = 0; i < r; ++i) {
        CompensatedSum acc;
        acc.add(z[i]);
        for (std::size_t k = 0; k < i; ++k) acc.add(-r_factor[k * r + i] * z[k]);
        z[i] = acc.value() / r_factor[i * r + i];
    }
    for (std::size_t i = r; i-- > 0;) {
        CompensatedSum acc;
        acc.add(z[i]);
        for (std::size_t k = i + 1; k < r; ++k) acc.add(-r_factor[i * r + k] * z[k]);
        z[i] = acc.value() / r_factor[i * r + i];
    }
}

}  // namespace

GramSolution solve_gram(const SymmetricMatrix& gram, std::span<const double> rhs,
                        double rank_tolerance) {
    const std::size_t n = gram.size();
    if (rhs.size() != n)
        throw Error(ErrorCode::SizeMismatch, "right-hand side does not match the Gram matrix");

    GramSolution out;
    out.coefficients.assign(n, 0.0);
    if (n == 0) return out;

    // Pivoted outer-product Cholesky: gram = P L L^T P^T with L (n x rank)
    // lower trapezoidal. `work` holds the Schur complement, `l` the columns.
    SymmetricMatrix work = gram;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::vector<double> l(n * n, 0.0);  // l[row * n + col], rows in pivoted order

    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, gram(i, i));
    const double threshold = rank_tolerance * max_diag;

    std::size_t rank = 0;
    for (; rank < n; ++rank) {
        std::size_t pivot = rank;
        for (std::size_t i = rank + 1; i < n; ++i)
            if (work(perm[i], perm[i]) > work(perm[pivot], perm[pivot])) pivot = i;
        const double d = work(perm[pivot], perm[pivot]);
        if (!(d > threshold)) break;

        std::swap(perm[rank], perm[pivot]);
        for (std::size_t c = 0; c < rank; ++c) std::swap(l[rank * n + c], l[pivot * n + c]);

        const double root = std::sqrt(d);
        l[rank * n + rank] = root;
        const std::size_t p = perm[rank];
        for (std::size_t i = rank + 1; i < n; ++i)
            l[i * n + rank] = work(perm[i], p) / root;
        for (std::size_t i = rank + 1; i < n; ++i) {
            for (std::size_t j = rank + 1; j <= i; ++j) {
                const double updated =
                    work(perm[i], perm[j]) - l[i * n + rank] * l[j * n + rank];
                work(perm[i], perm[j]) = updated;
                work(perm[j], perm[i]) = updated;
            }
        }
    }
    out.rank = rank;
    for (std::size_t i = rank; i < n; ++i) out.dropped.push_back(perm[i]);
    std::sort(out.dropped.begin(), out.dropped.end());
    if (rank == 0) return out;

    if (rank == n) {
        // Full rank: forward and back substitution with the pivoted factor.
        std::vector<double> z(n);
        for (std::size_t i = 0; i < n; ++i) {
            CompensatedSum acc;
            acc.add(rhs[perm[i]]);
            for (std::size_t k = 0; k < i; ++k) acc.add(-l[i * n + k] * z[k]);
            z[i] = acc.value() / l[i * n + i];
        }
        for (std::size_t i = n; i-- > 0;) {
            CompensatedSum acc;
            acc.add(z[i]);
            for (std::size_t k = i + 1; k < n; ++k) acc.add(-l[k * n + i] * z[k]);
            z[i] = acc.value() / l[i * n + i];
        }
        for (std::size_t i = 0; i < n; ++i) out.coefficients[perm[i]] = z[i];
        return out;
    }

    // With M = P L (n x rank, full column rank) the minimum-norm solution of
    // M M^T c = b is c = M (M^T M)^{-2} M^T b.
    std::vector<double> y(rank);
    for (std::size_t c = 0; c < rank; ++c) {
        CompensatedSum acc;
        for (std::size_t i = 0; i < n; ++i) acc.add(l[i * n + c] * rhs[perm[i]]);
        y[c] = acc.value();
    }

    std::vector<double> mtm(rank * rank);
    for (std::size_t a = 0; a < rank; ++a) {
        for (std::size_t b = a; b < rank; ++b) {
            CompensatedSum acc;
            for (std::size_t i = 0; i < n; ++i) acc.add(l[i * n + a] * l[i * n + b]);
            mtm[a * rank + b] = mtm[b * rank + a] = acc.value();
        }
    }
    // Cholesky of the small SPD matrix M^T M.
    std::vector<double> r_factor(rank * rank, 0.0);
    for (std::size_t i = 0; i < rank; ++i) {
        for (std::size_t j = i; j < rank; ++j) {
            double s = mtm[i * rank + j];
            for (std::size_t k = 0; k < i; ++k) s -= r_factor[k * rank + i] * r_factor[k * rank + j];
            if (i == j) {
                if (!(s > 0.0))
                    throw Error(ErrorCode::DegenerateBasis, "Gram factor lost positive definiteness");
                r_factor[i * rank + i] = std::sqrt(s);
            } else {
                r_factor[i * rank + j] = s / r_factor[i * rank + i];
            }
        }
    }
    cholesky_solve(r_factor, rank, y);
    cholesky_solve(r_factor, rank, y);

    for (std::size_t i = 0; i < n; ++i) {
        CompensatedSum acc;
        for (std::size_t c = 0; c < rank; ++c) acc.add(l[i * n + c] * y[c]);
        out.coefficients[perm[i]] = acc.value();
    }
    return out;
}

}  // namespace condexp
