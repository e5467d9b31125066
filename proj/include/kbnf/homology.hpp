#pragma once

// Constructive homology of a boundary pair: the group ker d' / im d as
// invariants plus explicit integer cycles representing its generators.
//
// The pipeline follows the two-stage Smith construction: reduce d'
// (s' = v' d' u'), identify the kernel as the last k coordinates in the
// u'-basis, push d through (u'^-1 d lands in those k coordinates because
// d'd = 0), Smith-reduce the restriction, and read torsion and free parts
// off the second diagonal.  Generators lift back through u' v^-1.

#include "kbnf/smith.hpp"

#include <string>
#include <vector>

namespace kbnf {

struct HomologyResult {
    std::size_t free_rank = 0;
    std::vector<Int> torsion;                    // invariants > 1, divisor chain
    std::vector<std::vector<Int>> generators;    // cycles in the domain of d'
    std::vector<Int> orders;                     // per generator: torsion value, 0 if free
};

// `(Z/2)^253 + (Z/4)^9 + Z/8 + Z^5`; the trivial group renders as `0`.
inline std::string group_string(const HomologyResult& h) {
    std::string out;
    auto append = [&](const std::string& part) {
        if (!out.empty()) out += " + ";
        out += part;
    };
    for (std::size_t i = 0; i < h.torsion.size();) {
        std::size_t j = i;
        while (j < h.torsion.size() && h.torsion[j] == h.torsion[i]) ++j;
        const std::string factor = "Z/" + h.torsion[i].str();
        if (j - i == 1)
            append(factor);
        else
            append("(" + factor + ")^" + std::to_string(j - i));
        i = j;
    }
    if (h.free_rank == 1)
        append("Z");
    else if (h.free_rank > 1)
        append("Z^" + std::to_string(h.free_rank));
    return out.empty() ? "0" : out;
}

// One generator as 1-based sparse `index:value` pairs; the zero vector
// renders as an empty string.
inline std::string render_generator_sparse(const std::vector<Int>& g) {
    std::string out;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g[i] != 0) {
            if (!out.empty()) out += ' ';
            out += std::to_string(i + 1) + ':' + g[i].str();
        }
    return out;
}

namespace detail {

inline std::vector<Int> matrix_vector(const ExactMatrix& m, const std::vector<Int>& x) {
    assert(x.size() == m.cols());
    std::vector<Int> y(m.rows(), Int(0));
    for (std::size_t i = 1; i <= m.rows(); ++i)
        for (std::size_t j = 1; j <= m.cols(); ++j)
            if (m(i, j) != 0 && x[j - 1] != 0) y[i - 1] += m(i, j) * x[j - 1];
    return y;
}

inline std::vector<Int> column_of(const ExactMatrix& m, std::size_t j) {
    std::vector<Int> c(m.rows());
    for (std::size_t i = 1; i <= m.rows(); ++i) c[i - 1] = m(i, j);
    return c;
}

}  // namespace detail

// d': Z^n -> Z^m (an m x n matrix) and d: Z^p -> Z^n (n x p), with
// d'd = 0.  Returns the invariants of ker d' / im d and one verified cycle
// per non-unit invariant.
inline HomologyResult homology_group(const ExactMatrix& dprime, const ExactMatrix& d,
                                     KbVariant variant = KbVariant::KB3) {
    if (dprime.cols() != d.rows())
        throw std::invalid_argument("homology_group: boundary shapes do not compose");
    if (!is_zero(matrix_product(dprime, d)))
        throw std::invalid_argument("homology_group: d'd is not zero");

    const std::size_t n = dprime.cols();
    SmithOptions opt;
    opt.with_transforms = true;
    opt.with_inverses = true;

    SmithOutcome first = smith(dprime, variant, opt);
    assert(first.ok());
    const SmithDecomposition& dp = *first.decomposition;
    const std::size_t r1 = dp.rank;
    const std::size_t k = n - r1;

    HomologyResult res;
    if (k == 0) return res;  // no kernel, trivial group

    // u'^-1 d: rows 1..r1 vanish because s' u'^-1 d = v' (d'd) = 0.
    const ExactMatrix x = matrix_product(*dp.u_inv, d);
    for (std::size_t i = 1; i <= r1; ++i)
        for (std::size_t j = 1; j <= x.cols(); ++j) assert(x(i, j) == 0);

    ExactMatrix b(k, x.cols());
    for (std::size_t i = 1; i <= k; ++i)
        for (std::size_t j = 1; j <= x.cols(); ++j) b(i, j) = x(r1 + i, j);

    SmithOutcome second = smith(b, variant, opt);
    assert(second.ok());
    const SmithDecomposition& bd = *second.decomposition;
    const std::size_t r2 = bd.rank;
    res.free_rank = k - r2;

    // In the v-basis the image lattice is spanned by d_h * e_h (h <= r2);
    // columns of v^-1 whose invariant is 1 lie wholly inside the image and
    // are used to size-reduce the representatives.
    std::vector<std::size_t> unit_cols;
    for (std::size_t h = 1; h <= r2; ++h)
        if (bd.s(h, h) == 1) unit_cols.push_back(h);

    auto lift = [&](std::size_t gen_col, const Int& order) {
        std::vector<Int> w = detail::column_of(*bd.v_inv, gen_col);
        for (std::size_t h : unit_cols) {
            const std::vector<Int> c = detail::column_of(*bd.v_inv, h);
            Int dot(0), norm(0);
            for (std::size_t t = 0; t < k; ++t) {
                dot += w[t] * c[t];
                norm += c[t] * c[t];
            }
            const Int q = floor_div(2 * dot + norm, 2 * norm);  // nearest integer to dot/norm
            if (q != 0)
                for (std::size_t t = 0; t < k; ++t) w[t] -= q * c[t];
        }
        // Class check in the v-basis: coordinates of v*w must match e_i up
        // to the per-coordinate modulus (d_h for torsion, exact for free).
        const std::vector<Int> z = detail::matrix_vector(*bd.v, w);
        for (std::size_t h = 1; h <= k; ++h) {
            const Int expect = h == gen_col ? Int(1) : Int(0);
            if (h <= r2 && bd.s(h, h) == 1) continue;  // unit coordinate, anything goes
            if (h <= r2)
                assert((z[h - 1] - expect) % bd.s(h, h) == 0);
            else
                assert(z[h - 1] == expect);
        }
        std::vector<Int> embedded(n, Int(0));
        for (std::size_t t = 0; t < k; ++t) embedded[r1 + t] = w[t];
        std::vector<Int> g = detail::matrix_vector(*dp.u, embedded);
        for (const Int& e : detail::matrix_vector(dprime, g)) {
            assert(e == 0);  // every generator is a verified cycle
            (void)e;
        }
        res.generators.push_back(std::move(g));
        res.orders.push_back(order);
    };

    for (std::size_t h = 1; h <= r2; ++h)
        if (bd.s(h, h) > 1) {
            res.torsion.push_back(bd.s(h, h));
            lift(h, bd.s(h, h));
        }
    for (std::size_t j = r2 + 1; j <= k; ++j) lift(j, Int(0));
    return res;
}

}  // namespace kbnf
