#pragma once

// Slow, independent reference computations used to cross-check the
// reduction algorithms: exact determinant, rank by fraction-free
// elimination, and the GCD of all k x k minors.

#include "kbnf/matrix.hpp"

#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace kbnf {

// Exact determinant by Bareiss fraction-free elimination with row pivoting.
inline Int determinant(const ExactMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix not square");
    const std::size_t n = m.rows();
    ExactMatrix a = m;
    Int prev = 1;
    int sgn = 1;
    for (std::size_t k = 1; k < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = 0;
            for (std::size_t i = k + 1; i <= n; ++i)
                if (a(i, k) != 0) { p = i; break; }
            if (p == 0) return 0;
            swap_rows(a, k, p);
            sgn = -sgn;
        }
        for (std::size_t i = k + 1; i <= n; ++i) {
            for (std::size_t j = k + 1; j <= n; ++j) {
                Int t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                assert(t % prev == 0);
                a(i, j) = t / prev;
            }
            a(i, k) = 0;
        }
        prev = a(k, k);
    }
    return sgn > 0 ? a(n, n) : -a(n, n);
}

// Rank over the integers (= rank over the rationals), fraction-free.
inline std::size_t rank_oracle(const ExactMatrix& m) {
    ExactMatrix a = m;
    const std::size_t n = a.rows(), cols = a.cols();
    std::size_t r = 0;
    Int prev = 1;
    for (std::size_t c = 1; c <= cols && r < n; ++c) {
        std::size_t p = 0;
        for (std::size_t i = r + 1; i <= n; ++i)
            if (a(i, c) != 0) { p = i; break; }
        if (p == 0) continue;
        ++r;
        swap_rows(a, p, r);
        for (std::size_t i = r + 1; i <= n; ++i) {
            for (std::size_t j = c + 1; j <= cols; ++j) {
                Int t = a(i, j) * a(r, c) - a(i, c) * a(r, j);
                assert(t % prev == 0);
                a(i, j) = t / prev;
            }
            a(i, c) = 0;
        }
        prev = a(r, c);
    }
    return r;
}

namespace detail {

// Visits all k-subsets of {1..n} in lexicographic order.
inline bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t k = idx.size();
    for (std::size_t i = k; i-- > 0;) {
        if (idx[i] < n - (k - 1 - i)) {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

inline std::vector<std::size_t> first_combination(std::size_t k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i + 1;
    return idx;
}

}  // namespace detail

// GCD of the determinants of all k x k submatrices.  Returns 0 when every
// such minor vanishes (k > rank), 1 for k == 0.  Exponential in k; meant
// for desk-scale matrices only.
inline Int minor_gcd_oracle(const ExactMatrix& m, std::size_t k) {
    if (k == 0) return 1;
    if (k > m.rows() || k > m.cols())
        throw std::invalid_argument("minor_gcd_oracle: k exceeds matrix dimensions");
    Int g = 0;
    auto rows_idx = detail::first_combination(k);
    do {
        auto cols_idx = detail::first_combination(k);
        do {
            ExactMatrix sub(k, k);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) sub(i + 1, j + 1) = m(rows_idx[i], cols_idx[j]);
            g = gcd(g, determinant(sub));
            if (g == 1) return g;
        } while (detail::next_combination(cols_idx, m.cols()));
    } while (detail::next_combination(rows_idx, m.rows()));
    return g;
}

}  // namespace kbnf
