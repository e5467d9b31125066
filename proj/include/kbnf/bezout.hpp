#pragma once

// Extended GCD with size-minimal coefficients and the elementary
// unimodular operations built on it: two-column/two-row Bezout mixes,
// shears, and the diagonal divisor-normalization step.
//
// Every operation can append an OperationRecord to a caller-supplied log;
// each record rebuilds the exact unimodular factor it applied, so a logged
// reduction can be replayed or audited.

#include "kbnf/matrix.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace kbnf {

// p*a + q*b == r == gcd(a,b), r > 0, with the source pair kept for audit.
// Coefficients are the size-minimal choice: |p| <= |b|/r, |q| < |a|/r
// whenever neither input divides the other; among the minimal pairs the
// one with p >= 0, then q >= 0, is preferred.
struct BezoutTriple {
    Int p, q, r;
    Int a, b;
};

inline BezoutTriple extended_gcd_minimal(const Int& a, const Int& b) {
    if (a == 0 && b == 0)
        throw std::invalid_argument("extended_gcd_minimal: gcd(0,0) undefined");
    if (b == 0) return {Int(sign(a)), Int(0), abs(a), a, b};
    if (a == 0) return {Int(0), Int(sign(b)), abs(b), a, b};
    if (b % a == 0) return {Int(sign(a)), Int(0), abs(a), a, b};

    Int r0 = a, r1 = b, p0 = 1, p1 = 0, q0 = 0, q1 = 1;
    while (r1 != 0) {
        Int qq = r0 / r1;
        r0 -= qq * r1;
        r0.swap(r1);
        p0 -= qq * p1;
        p0.swap(p1);
        q0 -= qq * q1;
        q0.swap(q1);
    }
    if (r0 < 0) { r0 = -r0; p0 = -p0; q0 = -q0; }
    const Int adr = a / r0, bdr = b / r0;
    const Int bound_p = abs(bdr), bound_q = abs(adr);

    // All solutions are (p0 + t*bdr, q0 - t*adr); the minimal one is near
    // t = q0/adr.  Scan a window and keep the best admissible pair.
    const Int t0 = q0 / adr;
    bool have = false;
    Int best_p, best_q, best_size;
    for (Int t = t0 - 2; t <= t0 + 2; ++t) {
        Int p = p0 + t * bdr, q = q0 - t * adr;
        if (abs(p) > bound_p || abs(q) >= bound_q) continue;
        Int size = abs(p) + abs(q);
        bool better = !have || size < best_size ||
                      (size == best_size && (p > best_p || (p == best_p && q > best_q)));
        if (better) { best_p = p; best_q = q; best_size = size; have = true; }
    }
    assert(have);
    assert(a * best_p + b * best_q == r0);
    return {best_p, best_q, r0, a, b};
}

enum class OpKind {
    ColumnBezout,  // right factor on columns (i, j)
    RowBezout,     // left factor on rows (i, j)
    ColumnShear,   // col_j -= alpha * col_i
    RowShear,      // row_j -= alpha * row_i
    SwapRows,
    SwapCols,
    NegateRow,
    NegateCol,
};

enum class OpSide { Left, Right };

struct OperationRecord {
    OpKind kind;
    std::size_t i = 0, j = 0;  // 1-based; j unused for negations
    Int p, q, bdr, adr;        // Bezout coefficients (bdr = b/r, adr = a/r)
    Int alpha;                 // shear multiplier

    OpSide side() const {
        switch (kind) {
            case OpKind::ColumnBezout:
            case OpKind::ColumnShear:
            case OpKind::SwapCols:
            case OpKind::NegateCol: return OpSide::Right;
            default: return OpSide::Left;
        }
    }

    // The unimodular matrix this record applied (dim x dim).
    ExactMatrix factor(std::size_t dim) const {
        ExactMatrix f = ExactMatrix::identity(dim);
        switch (kind) {
            case OpKind::ColumnBezout:
                f(i, i) = p; f(j, i) = q; f(i, j) = -bdr; f(j, j) = adr;
                break;
            case OpKind::RowBezout:
                f(i, i) = p; f(i, j) = q; f(j, i) = -bdr; f(j, j) = adr;
                break;
            case OpKind::ColumnShear: f(i, j) = -alpha; break;
            case OpKind::RowShear: f(j, i) = -alpha; break;
            case OpKind::SwapRows:
            case OpKind::SwapCols:
                f(i, i) = 0; f(j, j) = 0; f(i, j) = 1; f(j, i) = 1;
                break;
            case OpKind::NegateRow:
            case OpKind::NegateCol: f(i, i) = -1; break;
        }
        return f;
    }
};

using OpLog = std::vector<OperationRecord>;

namespace detail {

// col_i' = a11*col_i + a21*col_j ; col_j' = a12*col_i + a22*col_j,
// restricted to rows lo..hi (valid when rows above lo are zero in both).
inline void col_mix_range(ExactMatrix& m, std::size_t i, std::size_t j, const Int& a11,
                          const Int& a21, const Int& a12, const Int& a22, std::size_t lo,
                          std::size_t hi) {
    Int x, y;
    for (std::size_t l = lo; l <= hi; ++l) {
        Int* row = m.row_data(l);
        Int& xi = row[i - 1];
        Int& yj = row[j - 1];
        if (xi == 0 && yj == 0) continue;
        x = xi;
        y = yj;
        xi = a11 * x + a21 * y;
        yj = a12 * x + a22 * y;
    }
}

// row_i' = b11*row_i + b12*row_j ; row_j' = b21*row_i + b22*row_j,
// restricted to columns lo..hi.
inline void row_mix_range(ExactMatrix& m, std::size_t i, std::size_t j, const Int& b11,
                          const Int& b12, const Int& b21, const Int& b22, std::size_t lo,
                          std::size_t hi) {
    Int* ri = m.row_data(i);
    Int* rj = m.row_data(j);
    Int x, y;
    for (std::size_t c = lo - 1; c < hi; ++c) {
        if (ri[c] == 0 && rj[c] == 0) continue;
        x = ri[c];
        y = rj[c];
        ri[c] = b11 * x + b12 * y;
        rj[c] = b21 * x + b22 * y;
    }
}

// col_j -= alpha * col_i on rows lo..hi.
inline void col_shear_range(ExactMatrix& m, std::size_t i, std::size_t j, const Int& alpha,
                            std::size_t lo, std::size_t hi) {
    if (alpha == 0) return;
    for (std::size_t l = lo; l <= hi; ++l) {
        Int* row = m.row_data(l);
        const Int& xi = row[i - 1];
        if (xi != 0) row[j - 1] -= alpha * xi;
    }
}

// row_j -= alpha * row_i on columns lo..hi.
inline void row_shear_range(ExactMatrix& m, std::size_t i, std::size_t j, const Int& alpha,
                            std::size_t lo, std::size_t hi) {
    if (alpha == 0) return;
    const Int* ri = m.row_data(i);
    Int* rj = m.row_data(j);
    for (std::size_t c = lo - 1; c < hi; ++c)
        if (ri[c] != 0) rj[c] -= alpha * ri[c];
}

inline void log_op(OpLog* log, OperationRecord rec) {
    if (log) log->push_back(std::move(rec));
}

}  // namespace detail

// Right-multiplies by the Bezout factor for columns (i, j) with pivot row i:
// new col_i = p*col_i + q*col_j, new col_j = (a/r)*col_j - (b/r)*col_i.
// Expects t built from a = M(i,i), b = M(i,j); afterwards M(i,i) == r and
// M(i,j) == 0.
inline void apply_column_bezout(ExactMatrix& m, std::size_t i, std::size_t j,
                                const BezoutTriple& t, OpLog* log = nullptr) {
    check_col(m, i);
    check_col(m, j);
    if (i == j) throw std::invalid_argument("apply_column_bezout: columns must differ");
    assert(i <= m.rows() && t.a == m(i, i) && t.b == m(i, j));
    assert(t.r > 0 && t.a * t.p + t.b * t.q == t.r);
    const Int adr = t.a / t.r, bdr = t.b / t.r;
    detail::col_mix_range(m, i, j, t.p, t.q, -bdr, adr, 1, m.rows());
    assert(m(i, i) == t.r && m(i, j) == 0);
    detail::log_op(log, {OpKind::ColumnBezout, i, j, t.p, t.q, bdr, adr, Int(0)});
}

// Left-multiplies by the Bezout factor for rows (i, j) with pivot column i:
// new row_i = p*row_i + q*row_j, new row_j = (a/r)*row_j - (b/r)*row_i.
// Expects t built from a = M(i,i), b = M(j,i); afterwards M(i,i) == r and
// M(j,i) == 0.
inline void apply_row_bezout(ExactMatrix& m, std::size_t i, std::size_t j, const BezoutTriple& t,
                             OpLog* log = nullptr) {
    check_row(m, i);
    check_row(m, j);
    if (i == j) throw std::invalid_argument("apply_row_bezout: rows must differ");
    assert(i <= m.cols() && t.a == m(i, i) && t.b == m(j, i));
    assert(t.r > 0 && t.a * t.p + t.b * t.q == t.r);
    const Int adr = t.a / t.r, bdr = t.b / t.r;
    detail::row_mix_range(m, i, j, t.p, t.q, -bdr, adr, 1, m.cols());
    assert(m(i, i) == t.r && m(j, i) == 0);
    detail::log_op(log, {OpKind::RowBezout, i, j, t.p, t.q, bdr, adr, Int(0)});
}

// col_j -= alpha * col_i.
inline void column_shear(ExactMatrix& m, std::size_t i, std::size_t j, const Int& alpha,
                         OpLog* log = nullptr) {
    check_col(m, i);
    check_col(m, j);
    if (i == j) throw std::invalid_argument("column_shear: columns must differ");
    detail::col_shear_range(m, i, j, alpha, 1, m.rows());
    detail::log_op(log, {OpKind::ColumnShear, i, j, Int(0), Int(0), Int(0), Int(0), alpha});
}

// row_j -= alpha * row_i.
inline void row_shear(ExactMatrix& m, std::size_t i, std::size_t j, const Int& alpha,
                      OpLog* log = nullptr) {
    check_row(m, i);
    check_row(m, j);
    if (i == j) throw std::invalid_argument("row_shear: rows must differ");
    detail::row_shear_range(m, i, j, alpha, 1, m.cols());
    detail::log_op(log, {OpKind::RowShear, i, j, Int(0), Int(0), Int(0), Int(0), alpha});
}

// Replaces the isolated diagonal pair (M(i,i), M(j,j)) = (a, b) by
// (gcd(a,b), lcm(a,b)) via one row shear, one column Bezout, one row
// shear.  Both entries must be positive and rows/columns i, j otherwise
// zero.  A pair already satisfying a | b is left untouched.
inline void divisor_normalize_pair(ExactMatrix& m, std::size_t i, std::size_t j,
                                   OpLog* log = nullptr) {
    check_row(m, i);
    check_col(m, i);
    check_row(m, j);
    check_col(m, j);
    if (i >= j) throw std::invalid_argument("divisor_normalize_pair: need i < j");
    const Int a = m(i, i), b = m(j, j);
    if (a <= 0 || b <= 0)
        throw std::invalid_argument("divisor_normalize_pair: diagonal entries must be positive");
    for (std::size_t c = 1; c <= m.cols(); ++c)
        if ((c != i && m(i, c) != 0) || (c != j && m(j, c) != 0))
            throw std::invalid_argument("divisor_normalize_pair: rows not isolated");
    for (std::size_t r = 1; r <= m.rows(); ++r)
        if ((r != i && m(r, i) != 0) || (r != j && m(r, j) != 0))
            throw std::invalid_argument("divisor_normalize_pair: columns not isolated");
    if (b % a == 0) return;

    row_shear(m, j, i, Int(-1), log);  // row_i += row_j, putting b at (i,j)
    BezoutTriple t = extended_gcd_minimal(a, b);
    apply_column_bezout(m, i, j, t, log);
    row_shear(m, i, j, t.q * (b / t.r), log);  // clears the q*b left at (j,i)
    assert(m(i, i) == t.r && m(j, j) == (a / t.r) * b);
}

// Applies a logged operation to a matrix through its explicit factor.
inline void apply_record(ExactMatrix& m, const OperationRecord& rec) {
    if (rec.side() == OpSide::Right)
        m = matrix_product(m, rec.factor(m.cols()));
    else
        m = matrix_product(rec.factor(m.rows()), m);
}

inline ExactMatrix replay(ExactMatrix m, const OpLog& log) {
    for (const auto& rec : log) apply_record(m, rec);
    return m;
}

}  // namespace kbnf
