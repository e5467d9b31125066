#pragma once

// Shared fixtures for the test suite.

#include "kbnf/kbnf.hpp"

namespace kbnf::testing {

// The 4x5 scrambled matrix with planted Smith form (1, 3, 9, 0): the
// running example every golden value below refers to.
inline ExactMatrix toy_matrix() {
    return ExactMatrix(4, 5,
                       {37584,  4383,  29997,  -54,  11688,   //
                        308,    36,    250,    0,    96,      //
                        -40316, -4707, -33907, -153, -12552,  //
                        5626,   657,   4778,   27,   1752});
}

// Its column-style Hermite form: triangular rank-3 block with the reduced
// residues, one rectangle row, null trailing columns.
inline ExactMatrix toy_hnf1() {
    return ExactMatrix(4, 5,
                       {3,   0,  0,    0, 0,  //
                        0,   2,  0,    0, 0,  //
                        180, 49, 3087, 0, 0,  //
                        -30, -8, -513, 0, 0});
}

inline ExactMatrix random_matrix(SeededRng& rng, std::size_t rows, std::size_t cols,
                                 long long lo, long long hi) {
    ExactMatrix m(rows, cols);
    for (std::size_t i = 1; i <= rows; ++i)
        for (std::size_t j = 1; j <= cols; ++j) m(i, j) = Int(rng.uniform(lo, hi));
    return m;
}

// A chain pair d' (m x n) and d (n x p) with d'd = 0 and known quotient:
// ker d' is spanned by the last n - r1 coordinates and the image inside it
// by t_h * e_(r1+h), so ker/im = (+) Z/t_h (+) Z^(n - r1 - r2).
struct PlantedComplex {
    ExactMatrix dprime, d;
    std::size_t free_rank = 0;
    std::vector<Int> torsion;  // canonical chain, entries > 1 only
};

inline PlantedComplex plant_complex(SeededRng& rng, std::size_t m, std::size_t n, std::size_t p,
                                    std::size_t r1, std::size_t r2, long long t_max) {
    assert(r1 <= std::min(m, n));
    assert(r2 <= std::min(n - r1, p));
    PlantedComplex c{ExactMatrix(m, n), ExactMatrix(n, p), 0, {}};
    for (std::size_t i = 1; i <= r1; ++i) c.dprime(i, i) = rng.uniform(1, 9);
    std::vector<Int> ts;
    for (std::size_t h = 1; h <= r2; ++h) {
        c.d(r1 + h, h) = rng.uniform(1, t_max);
        ts.push_back(c.d(r1 + h, h));
    }
    for (const Int& t : detail::canonical_invariants(ts))
        if (t > 1) c.torsion.push_back(t);
    c.free_rank = n - r1 - r2;
    return c;
}

// Equivalence-preserving scramble: row operations on d' alone, column
// operations on d alone, and middle-basis changes applied to d' columns
// and d rows as inverse pairs so d'd stays zero.
inline void scramble_complex(PlantedComplex& c, SeededRng& rng, int rounds) {
    const std::size_t m = c.dprime.rows(), n = c.dprime.cols(), p = c.d.cols();
    for (int round = 0; round < rounds; ++round) {
        if (m >= 2) {
            const std::size_t i = rng.index(m), j = rng.index_other_than(m, i);
            row_shear(c.dprime, i, j, Int(rng.uniform(-3, 3)));
            swap_rows(c.dprime, rng.index(m), rng.index(m));
        }
        negate_row(c.dprime, rng.index(m));

        if (p >= 2) {
            const std::size_t i = rng.index(p), j = rng.index_other_than(p, i);
            column_shear(c.d, i, j, Int(rng.uniform(-3, 3)));
            swap_cols(c.d, rng.index(p), rng.index(p));
        }
        negate_col(c.d, rng.index(p));

        if (n >= 2) {
            const std::size_t i = rng.index(n), j = rng.index_other_than(n, i);
            const Int alpha(rng.uniform(-3, 3));
            column_shear(c.dprime, i, j, alpha);  // d' gains W on the right
            row_shear(c.d, j, i, -alpha);         // d gains W^-1 on the left

            const std::size_t s1 = rng.index(n), s2 = rng.index(n);
            swap_cols(c.dprime, s1, s2);
            swap_rows(c.d, s1, s2);

            const std::size_t ni = rng.index(n);
            negate_col(c.dprime, ni);
            negate_row(c.d, ni);
        }
    }
    assert(is_zero(matrix_product(c.dprime, c.d)));
}

struct QuotientShape {
    std::size_t free_rank = 0;
    std::vector<Int> torsion;  // > 1 only, ascending divisor chain
};

// Brute-force quotient oracle built on minors alone.  ker d' is saturated
// (the quotient embeds in a free group), so the invariant factors of im d
// inside the kernel equal those of the matrix d itself, which are ratios
// of consecutive minor GCDs; the free rank is a difference of Bareiss
// ranks.  Exponential, desk-scale inputs only.
inline QuotientShape brute_quotient(const ExactMatrix& dprime, const ExactMatrix& d) {
    assert(dprime.cols() == d.rows());
    assert(is_zero(matrix_product(dprime, d)));
    QuotientShape q;
    const std::size_t kernel_dim = dprime.cols() - rank_oracle(dprime);
    const std::size_t r2 = rank_oracle(d);
    assert(r2 <= kernel_dim);
    q.free_rank = kernel_dim - r2;
    Int prev(1);
    for (std::size_t j = 1; j <= r2; ++j) {
        const Int g = minor_gcd_oracle(d, j);
        assert(g != 0 && g % prev == 0);
        if (g / prev > 1) q.torsion.push_back(g / prev);
        prev = g;
    }
    return q;
}

}  // namespace kbnf::testing
