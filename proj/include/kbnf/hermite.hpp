#pragma once

// Hermite normal forms of integer matrices of arbitrary shape and rank.
//
// Style 1 reduces by column operations toward a lower-triangular form:
// positive diagonal through the rank, zeros above it, residues in
// [0, e(i,i)) left of it, an arbitrary rectangle below it, and only null
// columns after it.  Style 2 is the exact transpose mirror (row
// operations, upper triangular).
//
// Both run the same engine over an orientation view.  Entries above each
// pivot are cancelled column by column -- (1,2), (1,3), (2,3), (1,4), ...
// -- and after every use of a pivot the processed part of its row is
// re-reduced by Euclidean division, which is what keeps intermediate
// entries small.

#include "kbnf/bezout.hpp"
#include "kbnf/matrix.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace kbnf {

// Accumulated unimodular transforms: left * M_original * right == current
// matrix at every step.  The inverses are maintained op by op (each
// elementary factor is inverted in closed form), so no matrix inversion
// ever happens.
struct TransformSet {
    std::optional<ExactMatrix> left, right, left_inv, right_inv;

    static TransformSet make(std::size_t rows, std::size_t cols, bool transforms,
                             bool inverses) {
        TransformSet t;
        if (transforms) {
            t.left = ExactMatrix::identity(rows);
            t.right = ExactMatrix::identity(cols);
        }
        if (inverses) {
            t.left_inv = ExactMatrix::identity(rows);
            t.right_inv = ExactMatrix::identity(cols);
        }
        return t;
    }

    void on_col_bezout(std::size_t i, std::size_t j, const Int& p, const Int& q, const Int& bdr,
                       const Int& adr) {
        if (right) detail::col_mix_range(*right, i, j, p, q, -bdr, adr, 1, right->rows());
        if (right_inv) detail::row_mix_range(*right_inv, i, j, adr, bdr, -q, p, 1, right_inv->cols());
    }
    void on_row_bezout(std::size_t i, std::size_t j, const Int& p, const Int& q, const Int& bdr,
                       const Int& adr) {
        if (left) detail::row_mix_range(*left, i, j, p, q, -bdr, adr, 1, left->cols());
        if (left_inv) detail::col_mix_range(*left_inv, i, j, adr, bdr, -q, p, 1, left_inv->rows());
    }
    void on_col_shear(std::size_t i, std::size_t j, const Int& alpha) {
        if (right) detail::col_shear_range(*right, i, j, alpha, 1, right->rows());
        if (right_inv) detail::row_shear_range(*right_inv, j, i, -alpha, 1, right_inv->cols());
    }
    void on_row_shear(std::size_t i, std::size_t j, const Int& alpha) {
        if (left) detail::row_shear_range(*left, i, j, alpha, 1, left->cols());
        if (left_inv) detail::col_shear_range(*left_inv, j, i, -alpha, 1, left_inv->rows());
    }
    void on_swap_cols(std::size_t i, std::size_t j) {
        if (right) swap_cols(*right, i, j);
        if (right_inv) swap_rows(*right_inv, i, j);
    }
    void on_swap_rows(std::size_t i, std::size_t j) {
        if (left) swap_rows(*left, i, j);
        if (left_inv) swap_cols(*left_inv, i, j);
    }
    void on_negate_col(std::size_t i) {
        if (right) negate_col(*right, i);
        if (right_inv) negate_row(*right_inv, i);
    }
    void on_negate_row(std::size_t i) {
        if (left) negate_row(*left, i);
        if (left_inv) negate_col(*left_inv, i);
    }
};

namespace detail {

struct BudgetExceeded {};

// Elementary-operation budget shared across the passes of one reduction.
struct OpBudget {
    std::uint64_t used = 0;
    std::uint64_t max_ops = 0;  // 0 = unlimited
    std::optional<std::chrono::steady_clock::time_point> deadline;

    // The deadline is polled on every charge: one elementary operation can
    // take seconds once entries grow large, so any coarser polling can
    // overshoot a wall-clock budget by minutes.  A clock read costs tens of
    // nanoseconds against the O(rows) big-integer work of the cheapest op.
    void charge() {
        ++used;
        if (max_ops != 0 && used > max_ops) throw BudgetExceeded{};
        if (deadline && std::chrono::steady_clock::now() >= *deadline) throw BudgetExceeded{};
    }
};

struct ReduceContext {
    ExactMatrix& m;
    TransformSet* transforms = nullptr;
    OpLog* log = nullptr;
    OpBudget* budget = nullptr;
};

// Orientation adapter: style 1 works on the matrix as-is, style 2 sees the
// transpose, so its "column" operations are row operations on the real
// matrix (and vice versa).  Every mutation goes to the matrix, the
// transforms, and the log together.
template <bool Transposed>
struct HnfView {
    ReduceContext& ctx;

    std::size_t vrows() const { return Transposed ? ctx.m.cols() : ctx.m.rows(); }
    std::size_t vcols() const { return Transposed ? ctx.m.rows() : ctx.m.cols(); }
    const Int& entry(std::size_t r, std::size_t c) const {
        return Transposed ? ctx.m(c, r) : ctx.m(r, c);
    }

    void charge() {
        if (ctx.budget) ctx.budget->charge();
    }

    // Bezout mix of view-columns (i, j), pivot at view (i,i), target view
    // (i,j); rows above `from` are zero in both columns and are skipped.
    void col_bezout(std::size_t i, std::size_t j, const BezoutTriple& t, std::size_t from) {
        charge();
        assert(from == 1 || (entry(from - 1, i) == 0 && entry(from - 1, j) == 0));
        const Int adr = t.a / t.r, bdr = t.b / t.r;
        if constexpr (!Transposed) {
            col_mix_range(ctx.m, i, j, t.p, t.q, -bdr, adr, from, ctx.m.rows());
            if (ctx.transforms) ctx.transforms->on_col_bezout(i, j, t.p, t.q, bdr, adr);
            log_op(ctx.log, {OpKind::ColumnBezout, i, j, t.p, t.q, bdr, adr, Int(0)});
        } else {
            row_mix_range(ctx.m, i, j, t.p, t.q, -bdr, adr, from, ctx.m.cols());
            if (ctx.transforms) ctx.transforms->on_row_bezout(i, j, t.p, t.q, bdr, adr);
            log_op(ctx.log, {OpKind::RowBezout, i, j, t.p, t.q, bdr, adr, Int(0)});
        }
        assert(entry(i, i) == t.r && entry(i, j) == 0);
    }

    // view col_j -= alpha * view col_i, rows `from` down.  Skipping rows
    // above `from` is sound as long as the source column is zero there.
    void col_shear(std::size_t i, std::size_t j, const Int& alpha, std::size_t from) {
        if (alpha == 0) return;
        charge();
        assert(from == 1 || entry(from - 1, i) == 0);
        if constexpr (!Transposed) {
            col_shear_range(ctx.m, i, j, alpha, from, ctx.m.rows());
            if (ctx.transforms) ctx.transforms->on_col_shear(i, j, alpha);
            log_op(ctx.log, {OpKind::ColumnShear, i, j, Int(0), Int(0), Int(0), Int(0), alpha});
        } else {
            row_shear_range(ctx.m, i, j, alpha, from, ctx.m.cols());
            if (ctx.transforms) ctx.transforms->on_row_shear(i, j, alpha);
            log_op(ctx.log, {OpKind::RowShear, i, j, Int(0), Int(0), Int(0), Int(0), alpha});
        }
    }

    void swap_vrows(std::size_t i, std::size_t j) {
        charge();
        if constexpr (!Transposed) {
            swap_rows(ctx.m, i, j);
            if (ctx.transforms) ctx.transforms->on_swap_rows(i, j);
            log_op(ctx.log, {OpKind::SwapRows, i, j, Int(0), Int(0), Int(0), Int(0), Int(0)});
        } else {
            swap_cols(ctx.m, i, j);
            if (ctx.transforms) ctx.transforms->on_swap_cols(i, j);
            log_op(ctx.log, {OpKind::SwapCols, i, j, Int(0), Int(0), Int(0), Int(0), Int(0)});
        }
    }

    void swap_vcols(std::size_t i, std::size_t j) {
        charge();
        if constexpr (!Transposed) {
            swap_cols(ctx.m, i, j);
            if (ctx.transforms) ctx.transforms->on_swap_cols(i, j);
            log_op(ctx.log, {OpKind::SwapCols, i, j, Int(0), Int(0), Int(0), Int(0), Int(0)});
        } else {
            swap_rows(ctx.m, i, j);
            if (ctx.transforms) ctx.transforms->on_swap_rows(i, j);
            log_op(ctx.log, {OpKind::SwapRows, i, j, Int(0), Int(0), Int(0), Int(0), Int(0)});
        }
    }

    void negate_vcol(std::size_t i) {
        charge();
        if constexpr (!Transposed) {
            negate_col(ctx.m, i);
            if (ctx.transforms) ctx.transforms->on_negate_col(i);
            log_op(ctx.log, {OpKind::NegateCol, i, 0, Int(0), Int(0), Int(0), Int(0), Int(0)});
        } else {
            negate_row(ctx.m, i);
            if (ctx.transforms) ctx.transforms->on_negate_row(i);
            log_op(ctx.log, {OpKind::NegateRow, i, 0, Int(0), Int(0), Int(0), Int(0), Int(0)});
        }
    }
};

// One full Hermite pass in view orientation; returns the rank.
template <bool Transposed>
std::size_t hnf_pass(ReduceContext& ctx) {
    HnfView<Transposed> v{ctx};
    const std::size_t R = v.vrows(), C = v.vcols();

    // Cancel view entries (1..upto, col) against the established pivots.
    // After every use of pivot l, the processed left part of pivot row l
    // is reduced back into [0, pivot); skipping this re-reduction lets
    // below-diagonal entries compound multiplicatively across columns.
    auto cancel_top = [&](std::size_t col, std::size_t upto) {
        for (std::size_t l = 1; l <= upto; ++l) {
            const Int& b = v.entry(l, col);
            if (b == 0) continue;
            const Int& a = v.entry(l, l);
            assert(a > 0);
            if (b % a == 0) {
                v.col_shear(l, col, b / a, l);
            } else {
                const BezoutTriple t = extended_gcd_minimal(a, b);
                assert(t.r > 0 && t.r < a);  // pivot must strictly shrink
                v.col_bezout(l, col, t, l);
            }
            for (std::size_t c = 1; c < l; ++c) {
                const Int& piv = v.entry(l, l);
                const Int& x = v.entry(l, c);
                if (x < 0 || x >= piv) v.col_shear(l, c, floor_div(x, piv), l);
            }
        }
    };

    std::size_t k = 0;
    bool no_more_pivots = false;
    for (std::size_t i = 1; i <= R && i <= C && !no_more_pivots; ++i) {
        cancel_top(i, i - 1);
        for (;;) {
            if (v.entry(i, i) != 0) {
                if (v.entry(i, i) < 0) v.negate_vcol(i);
                k = i;
                break;
            }
            std::size_t jr = 0;
            for (std::size_t r = i + 1; r <= R && jr == 0; ++r)
                if (v.entry(r, i) != 0) jr = r;
            if (jr != 0) {
                v.swap_vrows(i, jr);
                cancel_top(i, i - 1);  // entries above the pivot stay cancelled
                continue;
            }
            // Column i is entirely null: pull in the first column that is
            // nonzero anywhere and treat it from the top.  A column whose
            // support dissolves under cancellation just repeats the scan.
            std::size_t jc = 0;
            for (std::size_t c = i + 1; c <= C && jc == 0; ++c)
                for (std::size_t r = 1; r <= R; ++r)
                    if (v.entry(r, c) != 0) { jc = c; break; }
            if (jc != 0) {
                v.swap_vcols(i, jc);
                cancel_top(i, i - 1);
                continue;
            }
            no_more_pivots = true;  // rank k = i-1; columns i..C are null
            break;
        }
    }

    // Full row rank with columns to spare: reduce the trailing columns
    // against the whole diagonal; each one ends up null.
    if (!no_more_pivots && k == R && C > R)
        for (std::size_t j = R + 1; j <= C; ++j) cancel_top(j, k);

    // Pivot rows whose pivot was never used again still carry unreduced
    // left parts; sweep top-down (the shears only touch rows at or below
    // the pivot row being cleaned).
    for (std::size_t i = 1; i <= k; ++i)
        for (std::size_t c = 1; c < i; ++c) {
            const Int& piv = v.entry(i, i);
            const Int& x = v.entry(i, c);
            if (x < 0 || x >= piv) v.col_shear(i, c, floor_div(x, piv), i);
        }
    return k;
}

}  // namespace detail

struct HnfOptions {
    bool with_transforms = false;
    bool with_inverses = false;
    bool with_log = false;
};

struct HermiteResult {
    ExactMatrix matrix;
    std::size_t rank = 0;
    int style = 1;
    std::optional<OpLog> op_log;
    std::optional<ExactMatrix> left_transform, right_transform;
    std::optional<ExactMatrix> left_inverse, right_inverse;
};

// The cancellation order shared by all reductions here: column by column,
// top down inside each column.
inline std::vector<std::pair<std::size_t, std::size_t>> kb_cancel_order(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> order;
    for (std::size_t j = 2; j <= n; ++j)
        for (std::size_t i = 1; i < j; ++i) order.emplace_back(i, j);
    return order;
}

namespace detail {

template <bool Transposed>
HermiteResult hnf_run(ExactMatrix m, const HnfOptions& opt) {
    TransformSet t = TransformSet::make(m.rows(), m.cols(), opt.with_transforms, opt.with_inverses);
    OpLog log;
    ReduceContext ctx{m, &t, opt.with_log ? &log : nullptr, nullptr};
    const std::size_t rank = hnf_pass<Transposed>(ctx);
    HermiteResult res{std::move(m), rank, Transposed ? 2 : 1, std::nullopt,
                      std::move(t.left), std::move(t.right),
                      std::move(t.left_inv), std::move(t.right_inv)};
    if (opt.with_log) res.op_log = std::move(log);
    return res;
}

}  // namespace detail

// Style-1 (column-operation, lower-triangular) Hermite normal form.
inline HermiteResult hnf1(ExactMatrix m, const HnfOptions& opt = {}) {
    return detail::hnf_run<false>(std::move(m), opt);
}

// Style-2 (row-operation, upper-triangular) Hermite normal form; the
// transpose mirror of hnf1.
inline HermiteResult hnf2(ExactMatrix m, const HnfOptions& opt = {}) {
    return detail::hnf_run<true>(std::move(m), opt);
}

}  // namespace kbnf
