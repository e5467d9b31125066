#pragma once

// Smith normal form via three alternating-Hermite-pass schedules for
// rectangular matrices of any rank.
//
//   KB1  triangularize (hnf1), then clear each column below its diagonal
//        entry with row Bezout operations, re-running hnf1 whenever that
//        creates fill-in.  Kept as the historical baseline: entries of the
//        sub-triangle rectangle can grow without bound, so it runs under
//        an operation budget.
//   KB2  KB1 plus, after every finished column, a row-shear sweep that
//        reduces everything below each diagonal entry into [0, e(c,c)).
//        This bounds the rectangle and tames the growth.
//   KB3  alternate full hnf1 / hnf2 passes until the matrix is diagonal.
//        From the second pass on the diagonal product is pinned to the
//        minor GCD, and each pass can only replace pivots by divisors, so
//        termination is guaranteed and in practice needs a handful of
//        passes.
//
// All variants finish with divisor normalization (gcd/lcm pair fixing) to
// reach the canonical form d1 | d2 | ... | dk.

#include "kbnf/hermite.hpp"
#include "kbnf/oracles.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kbnf {

enum class KbVariant { KB1, KB2, KB3 };

inline const char* variant_name(KbVariant v) {
    switch (v) {
        case KbVariant::KB1: return "kb1";
        case KbVariant::KB2: return "kb2";
        default: return "kb3";
    }
}

inline std::optional<KbVariant> variant_from_name(std::string_view s) {
    std::string low;
    for (char c : s) low.push_back(c >= 'A' && c <= 'Z' ? char(c - 'A' + 'a') : c);
    if (low == "kb1") return KbVariant::KB1;
    if (low == "kb2") return KbVariant::KB2;
    if (low == "kb3") return KbVariant::KB3;
    return std::nullopt;
}

struct RunLengthEntry {
    std::size_t count;
    Int value;
    friend bool operator==(const RunLengthEntry&, const RunLengthEntry&) = default;
};
using RunLengthDiagonal = std::vector<RunLengthEntry>;

// Groups the positive invariant factors of a canonical diagonal; trailing
// zeros are not part of the rendering.  Rejects non-canonical input.
inline RunLengthDiagonal run_length(const std::vector<Int>& diagonal) {
    RunLengthDiagonal rl;
    bool tail = false;
    const Int* prev = nullptr;
    for (const Int& d : diagonal) {
        if (d < 0) throw std::invalid_argument("run_length: negative diagonal entry");
        if (d == 0) {
            tail = true;
            continue;
        }
        if (tail) throw std::invalid_argument("run_length: positive entry after a zero");
        if (prev && d % *prev != 0)
            throw std::invalid_argument("run_length: divisor chain violated");
        if (!rl.empty() && rl.back().value == d)
            ++rl.back().count;
        else
            rl.push_back({1, d});
        prev = &rl.back().value;
    }
    return rl;
}

// `((m1 * v1) (m2 * v2) ...)`; an empty diagonal renders as `()`.
inline std::string render_run_length(const RunLengthDiagonal& rl) {
    std::string out = "(";
    for (std::size_t i = 0; i < rl.size(); ++i) {
        if (i) out += ' ';
        out += '(' + std::to_string(rl[i].count) + " * " + rl[i].value.str() + ')';
    }
    out += ')';
    return out;
}

struct SmithStats {
    std::size_t hnf_invocations = 0;
    std::vector<std::chrono::duration<double>> per_pass_durations;
    std::size_t peak_mean_digits = 0;  // diagnostic: worst mean digit count below the diagonal
};

struct SmithDecomposition {
    ExactMatrix s;
    std::size_t rank = 0;
    RunLengthDiagonal run_length;
    std::optional<ExactMatrix> u, v;          // right (m x m) and left (n x n): s = v * d * u
    std::optional<ExactMatrix> u_inv, v_inv;  // accumulated inverses, never computed by inversion
    KbVariant variant = KbVariant::KB3;
    SmithStats stats;
};

// State captured when an operation budget runs out mid-reduction.
struct BudgetDiagnostics {
    std::uint64_t ops_used = 0;
    std::size_t columns_processed = 0;
    std::size_t mean_digits_below_diagonal = 0;
    std::size_t hnf_invocations = 0;
};

struct SmithOutcome {
    std::optional<SmithDecomposition> decomposition;
    std::optional<BudgetDiagnostics> budget_exhausted;
    bool ok() const { return decomposition.has_value(); }
};

struct SmithOptions {
    bool with_transforms = false;
    bool with_inverses = false;
    // Elementary-operation cap: unset = variant default (10^8 for KB1,
    // unlimited otherwise); an explicit 0 = unlimited.
    std::optional<std::uint64_t> max_ops;
    std::optional<std::chrono::duration<double>> time_budget;
};

inline constexpr std::uint64_t kDefaultKb1OpBudget = 100'000'000;

namespace detail {

inline std::size_t mean_digits_below_diagonal(const ExactMatrix& m, std::size_t k) {
    unsigned long long total = 0, count = 0;
    const std::size_t cols = std::min(k, m.cols());
    for (std::size_t c = 1; c <= cols; ++c)
        for (std::size_t r = c + 1; r <= m.rows(); ++r)
            if (m(r, c) != 0) {
                total += decimal_digits_estimate(m(r, c));
                ++count;
            }
    return count == 0 ? 0 : static_cast<std::size_t>((total + count / 2) / count);
}

// Replaces the isolated diagonal pair (a, b) = (m(i,i), m(j,j)) by
// (gcd, lcm).  Requires a global diagonal matrix, both entries positive,
// a not dividing b.
inline void normalize_pair(ReduceContext& ctx, std::size_t i, std::size_t j) {
    HnfView<false> cv{ctx};
    HnfView<true> rv{ctx};
    const Int a = ctx.m(i, i), b = ctx.m(j, j);
    assert(i < j && a > 0 && b > 0 && b % a != 0);
    rv.col_shear(j, i, Int(-1), 1);  // row_i += row_j: b appears at (i, j)
    const BezoutTriple t = extended_gcd_minimal(a, b);
    cv.col_bezout(i, j, t, 1);
    rv.col_shear(i, j, t.q * b / t.r, 1);  // clears the (j, i) byproduct
    assert(ctx.m(i, i) == t.r && ctx.m(i, j) == 0 && ctx.m(j, i) == 0 &&
           ctx.m(j, j) == a / t.r * b);
}

// Sign-fix, compact zeros to the tail, then sweep pairs until the divisor
// chain holds.  Each pair fix strictly shrinks d_i, so sweeps terminate.
inline std::size_t normalize_diagonal(ReduceContext& ctx) {
    ExactMatrix& m = ctx.m;
    HnfView<false> cv{ctx};
    const std::size_t d = std::min(m.rows(), m.cols());
    for (std::size_t i = 1; i <= d; ++i)
        if (m(i, i) < 0) cv.negate_vcol(i);
    std::size_t w = 1;
    for (std::size_t i = 1; i <= d; ++i)
        if (m(i, i) != 0) {
            if (i != w) {
                cv.swap_vrows(i, w);
                cv.swap_vcols(i, w);
            }
            ++w;
        }
    const std::size_t k = w - 1;
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 1; i + 1 <= k; ++i)
            for (std::size_t j = i + 1; j <= k; ++j)
                if (m(j, j) % m(i, i) != 0) {
                    normalize_pair(ctx, i, j);
                    changed = true;
                }
    }
    return k;
}

inline std::vector<Int> diagonal_prefix(const ExactMatrix& m) {
    std::vector<Int> d;
    const std::size_t n = std::min(m.rows(), m.cols());
    d.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) d.push_back(m(i, i));
    return d;
}

inline std::uint64_t resolve_max_ops(const SmithOptions& opt, KbVariant v) {
    if (opt.max_ops) return *opt.max_ops;
    return v == KbVariant::KB1 ? kDefaultKb1OpBudget : 0;
}

template <typename PassFn>
std::size_t timed_pass(PassFn&& pass, SmithStats& stats) {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t rank = pass();
    stats.per_pass_durations.push_back(std::chrono::steady_clock::now() - start);
    ++stats.hnf_invocations;
    return rank;
}

// Shared KB1/KB2 driver.  Throws BudgetExceeded out of the op layer; the
// public wrappers turn that into a diagnostics-carrying outcome.
inline SmithDecomposition run_kb12(ExactMatrix& m, ReduceContext& ctx, bool bounded_sweep,
                                   KbVariant variant, SmithStats& stats,
                                   std::size_t& columns_done) {
    HnfView<true> rv{ctx};
    const std::size_t k = timed_pass([&] { return hnf_pass<false>(ctx); }, stats);

    for (std::size_t i = 1; i <= k; ++i) {
        for (;;) {
            // Phase 1: clear column i below the pivot with row operations.
            // Rows i..n are zero left of column i (earlier columns are done
            // and hnf passes keep them clean), so ops start at column i.
            bool fill_in = false;
            for (std::size_t j = i + 1; j <= m.rows(); ++j) {
                const Int& b = m(j, i);
                if (b == 0) continue;
                const Int& a = m(i, i);
                if (b % a == 0) {
                    rv.col_shear(i, j, b / a, i);
                } else {
                    const BezoutTriple t = extended_gcd_minimal(a, b);
                    assert(t.r < a);
                    rv.col_bezout(i, j, t, i);
                    fill_in = true;  // row i picked up entries right of the pivot
                }
            }
            if (!fill_in) break;
            // Phase 2: a full hnf1 pass repairs the fill-in; it may leave
            // new residues below (i,i), in which case we go around again
            // with a strictly smaller pivot.
            const std::size_t k2 = timed_pass([&] { return hnf_pass<false>(ctx); }, stats);
            assert(k2 == k);
            (void)k2;
            bool below_clear = true;
            for (std::size_t j = i + 1; j <= m.rows() && below_clear; ++j)
                if (m(j, i) != 0) below_clear = false;
            if (below_clear) break;
        }

        if (bounded_sweep) {
            // KB2 complement: bound every entry below the diagonal by its
            // column's pivot.  Descending columns, so the collateral hits
            // only columns still to be swept.
            for (std::size_t c = k; c >= 1; --c) {
                for (std::size_t j = c + 1; j <= m.rows(); ++j) {
                    const Int& piv = m(c, c);
                    const Int& x = m(j, c);
                    if (x < 0 || x >= piv) rv.col_shear(c, j, floor_div(x, piv), 1);
                }
                if (c == 1) break;
            }
#ifndef KBNF_NO_SWEEP_AUDIT
            for (std::size_t c = 1; c <= k; ++c)
                for (std::size_t j = c + 1; j <= m.rows(); ++j)
                    assert(m(j, c) >= 0 && m(j, c) < m(c, c));
#endif
        }
        columns_done = i;
        stats.peak_mean_digits =
            std::max(stats.peak_mean_digits, mean_digits_below_diagonal(m, k));
    }

    assert(is_diagonal(m));
    const std::size_t kn = normalize_diagonal(ctx);
    assert(kn == k);
    (void)kn;
    SmithDecomposition dec;
    dec.rank = k;
    dec.variant = variant;
    dec.stats = std::move(stats);
    dec.run_length = run_length(diagonal_prefix(m));
    return dec;
}

inline SmithDecomposition run_kb3(ExactMatrix& m, ReduceContext& ctx, SmithStats& stats,
                                  std::size_t& columns_done) {
    std::size_t k = 0;
    for (bool column_style = true;; column_style = !column_style) {
        k = timed_pass(
            [&] { return column_style ? hnf_pass<false>(ctx) : hnf_pass<true>(ctx); }, stats);
        stats.peak_mean_digits =
            std::max(stats.peak_mean_digits, mean_digits_below_diagonal(m, k));
        columns_done = k;
        if (is_diagonal(m)) break;
        assert(stats.hnf_invocations < 64 && "alternation failed to converge");
    }
    const std::size_t kn = normalize_diagonal(ctx);
    assert(kn == k);
    (void)kn;
    SmithDecomposition dec;
    dec.rank = k;
    dec.variant = KbVariant::KB3;
    dec.stats = std::move(stats);
    dec.run_length = run_length(diagonal_prefix(m));
    return dec;
}

inline SmithOutcome smith_run(ExactMatrix m, KbVariant variant, const SmithOptions& opt) {
    TransformSet t =
        TransformSet::make(m.rows(), m.cols(), opt.with_transforms, opt.with_inverses);
    OpBudget budget;
    budget.max_ops = resolve_max_ops(opt, variant);
    if (opt.time_budget)
        budget.deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              *opt.time_budget);
    ReduceContext ctx{m, &t, nullptr, &budget};
    SmithStats stats;
    std::size_t columns_done = 0;
    try {
        SmithDecomposition dec = variant == KbVariant::KB3
                                     ? run_kb3(m, ctx, stats, columns_done)
                                     : run_kb12(m, ctx, variant == KbVariant::KB2, variant,
                                                stats, columns_done);
        dec.s = std::move(m);
        dec.v = std::move(t.left);
        dec.u = std::move(t.right);
        dec.v_inv = std::move(t.left_inv);
        dec.u_inv = std::move(t.right_inv);
        return {std::move(dec), std::nullopt};
    } catch (const BudgetExceeded&) {
        BudgetDiagnostics diag;
        diag.ops_used = budget.used;
        diag.columns_processed = columns_done;
        diag.mean_digits_below_diagonal =
            mean_digits_below_diagonal(m, std::min(m.rows(), m.cols()));
        diag.hnf_invocations = stats.hnf_invocations;
        return {std::nullopt, diag};
    }
}

}  // namespace detail

inline SmithOutcome smith_kb1(ExactMatrix m, const SmithOptions& opt = {}) {
    return detail::smith_run(std::move(m), KbVariant::KB1, opt);
}
inline SmithOutcome smith_kb2(ExactMatrix m, const SmithOptions& opt = {}) {
    return detail::smith_run(std::move(m), KbVariant::KB2, opt);
}
inline SmithOutcome smith_kb3(ExactMatrix m, const SmithOptions& opt = {}) {
    return detail::smith_run(std::move(m), KbVariant::KB3, opt);
}
inline SmithOutcome smith(ExactMatrix m, KbVariant variant, const SmithOptions& opt = {}) {
    return detail::smith_run(std::move(m), variant, opt);
}

inline RunLengthDiagonal run_length(const SmithDecomposition& dec) {
    return run_length(detail::diagonal_prefix(dec.s));
}

// Canonicalizes an already-diagonal matrix in place: positive entries,
// zeros to the tail, divisor chain enforced pairwise.
inline void divisor_normalize(ExactMatrix& d, OpLog* log = nullptr) {
    if (!is_diagonal(d)) throw std::invalid_argument("divisor_normalize: matrix is not diagonal");
    detail::ReduceContext ctx{d, nullptr, log, nullptr};
    detail::normalize_diagonal(ctx);
}

struct VerificationReport {
    bool product_ok = false;     // s == v * d * u
    bool dets_ok = false;        // |det u| == |det v| == 1
    bool chain_ok = false;       // canonical diagonal, rank consistent
    bool minor_gcd_checked = false;
    bool minor_gcd_ok = false;   // product of invariants == gcd of k x k minors
    bool ok() const {
        return product_ok && dets_ok && chain_ok && (!minor_gcd_checked || minor_gcd_ok);
    }
};

// Re-derives every claim of a decomposition from scratch.  The minor-GCD
// cross-check enumerates k-subsets, so it only runs when the number of
// combinations is at most `max_minor_combinations` (0 disables it).
inline VerificationReport verify_decomposition(const ExactMatrix& d,
                                               const SmithDecomposition& dec,
                                               std::size_t max_minor_combinations = 2000) {
    if (!dec.u || !dec.v)
        throw std::invalid_argument("verify_decomposition: decomposition lacks transforms");
    VerificationReport rep;
    rep.product_ok = matrix_product(matrix_product(*dec.v, d), *dec.u) == dec.s;
    const Int du = determinant(*dec.u), dv = determinant(*dec.v);
    rep.dets_ok = (du == 1 || du == -1) && (dv == 1 || dv == -1);

    rep.chain_ok = is_diagonal(dec.s);
    if (rep.chain_ok) {
        const std::vector<Int> diag = detail::diagonal_prefix(dec.s);
        std::size_t nonzero = 0;
        for (std::size_t i = 0; i < diag.size(); ++i) {
            if (diag[i] < 0 || (i > 0 && diag[i] != 0 && diag[i - 1] == 0) ||
                (i > 0 && diag[i - 1] != 0 && diag[i] % diag[i - 1] != 0))
                rep.chain_ok = false;
            if (diag[i] != 0) ++nonzero;
        }
        if (nonzero != dec.rank) rep.chain_ok = false;
    }

    const std::size_t k = dec.rank;
    double combos = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
        combos *= double(d.rows() - i) / double(i + 1);
        if (combos > 1e18) break;
    }
    for (std::size_t i = 0; i < k; ++i) {
        combos *= double(d.cols() - i) / double(i + 1);
        if (combos > 1e18) break;
    }
    if (max_minor_combinations > 0 && combos <= double(max_minor_combinations)) {
        rep.minor_gcd_checked = true;
        Int prod(1);
        for (std::size_t i = 1; i <= k; ++i) prod *= dec.s(i, i);
        rep.minor_gcd_ok = prod == minor_gcd_oracle(d, k);
    }
    return rep;
}

}  // namespace kbnf
