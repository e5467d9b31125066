#pragma once

// Dense matrix of arbitrary-precision integers with the elementary
// operations every reduction is built from.
//
// Indexing is 1-based everywhere in the public interface, matching the
// usual e(i,j) notation for normal-form algorithms.  Storage is row-major.

#include "kbnf/integer.hpp"

#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kbnf {

class ExactMatrix {
  public:
    // Placeholder value for members awaiting assignment; still a valid
    // (1 x 1 zero) matrix.
    ExactMatrix() : ExactMatrix(1, 1) {}

    ExactMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), e_(rows * cols) {
        if (rows == 0 || cols == 0)
            throw std::invalid_argument("ExactMatrix: dimensions must be positive");
    }

    ExactMatrix(std::size_t rows, std::size_t cols, std::vector<Int> entries)
        : rows_(rows), cols_(cols), e_(std::move(entries)) {
        if (rows == 0 || cols == 0)
            throw std::invalid_argument("ExactMatrix: dimensions must be positive");
        if (e_.size() != rows * cols)
            throw std::invalid_argument("ExactMatrix: entry list has wrong length");
    }

    // Row-major convenience constructor for literals in tests and tools.
    ExactMatrix(std::size_t rows, std::size_t cols, std::initializer_list<long long> entries)
        : ExactMatrix(rows, cols, std::vector<Int>(entries.begin(), entries.end())) {}

    static ExactMatrix identity(std::size_t n) {
        ExactMatrix m(n, n);
        for (std::size_t i = 1; i <= n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    // 1-based access: 1 <= i <= rows(), 1 <= j <= cols().
    const Int& operator()(std::size_t i, std::size_t j) const {
        assert(1 <= i && i <= rows_ && 1 <= j && j <= cols_);
        return e_[(i - 1) * cols_ + (j - 1)];
    }
    Int& operator()(std::size_t i, std::size_t j) {
        assert(1 <= i && i <= rows_ && 1 <= j && j <= cols_);
        return e_[(i - 1) * cols_ + (j - 1)];
    }

    // Raw pointer to row i (1-based); cols() consecutive entries.
    Int* row_data(std::size_t i) { return e_.data() + (i - 1) * cols_; }
    const Int* row_data(std::size_t i) const { return e_.data() + (i - 1) * cols_; }

    bool operator==(const ExactMatrix& o) const = default;

  private:
    std::size_t rows_, cols_;
    std::vector<Int> e_;
};

inline ExactMatrix new_matrix(std::size_t rows, std::size_t cols, std::vector<Int> entries) {
    return ExactMatrix(rows, cols, std::move(entries));
}

inline void check_row(const ExactMatrix& m, std::size_t i) {
    if (i < 1 || i > m.rows()) throw std::out_of_range("row index out of range");
}
inline void check_col(const ExactMatrix& m, std::size_t j) {
    if (j < 1 || j > m.cols()) throw std::out_of_range("column index out of range");
}

inline void swap_rows(ExactMatrix& m, std::size_t i, std::size_t j) {
    check_row(m, i);
    check_row(m, j);
    if (i == j) return;
    Int* a = m.row_data(i);
    Int* b = m.row_data(j);
    for (std::size_t c = 0; c < m.cols(); ++c) a[c].swap(b[c]);
}

inline void swap_cols(ExactMatrix& m, std::size_t i, std::size_t j) {
    check_col(m, i);
    check_col(m, j);
    if (i == j) return;
    for (std::size_t r = 1; r <= m.rows(); ++r) m(r, i).swap(m(r, j));
}

inline void negate_row(ExactMatrix& m, std::size_t i) {
    check_row(m, i);
    Int* a = m.row_data(i);
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (a[c] != 0) a[c] = -a[c];
}

inline void negate_col(ExactMatrix& m, std::size_t j) {
    check_col(m, j);
    for (std::size_t r = 1; r <= m.rows(); ++r) {
        Int& x = m(r, j);
        if (x != 0) x = -x;
    }
}

inline ExactMatrix transpose(const ExactMatrix& m) {
    ExactMatrix t(m.cols(), m.rows());
    for (std::size_t i = 1; i <= m.rows(); ++i)
        for (std::size_t j = 1; j <= m.cols(); ++j) t(j, i) = m(i, j);
    return t;
}

inline ExactMatrix matrix_product(const ExactMatrix& a, const ExactMatrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matrix_product: inner dimensions differ");
    ExactMatrix c(a.rows(), b.cols());
    for (std::size_t i = 1; i <= a.rows(); ++i)
        for (std::size_t k = 1; k <= a.cols(); ++k) {
            const Int& aik = a(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 1; j <= b.cols(); ++j) {
                const Int& bkj = b(k, j);
                if (bkj != 0) c(i, j) += aik * bkj;
            }
        }
    return c;
}

inline bool is_zero(const ExactMatrix& m) {
    for (std::size_t i = 1; i <= m.rows(); ++i)
        for (std::size_t j = 1; j <= m.cols(); ++j)
            if (m(i, j) != 0) return false;
    return true;
}

inline bool is_diagonal(const ExactMatrix& m) {
    for (std::size_t i = 1; i <= m.rows(); ++i)
        for (std::size_t j = 1; j <= m.cols(); ++j)
            if (i != j && m(i, j) != 0) return false;
    return true;
}

inline std::vector<Int> diagonal_of(const ExactMatrix& m) {
    std::vector<Int> d;
    const std::size_t k = m.rows() < m.cols() ? m.rows() : m.cols();
    d.reserve(k);
    for (std::size_t i = 1; i <= k; ++i) d.push_back(m(i, i));
    return d;
}

struct DensityStats {
    Rational null_fraction;     // zero entries / all entries
    Rational mean_abs_nonzero;  // 0 for the zero matrix
};

inline DensityStats density_stats(const ExactMatrix& m) {
    Int zeros = 0, sum_abs = 0, nonzeros = 0;
    for (std::size_t i = 1; i <= m.rows(); ++i)
        for (std::size_t j = 1; j <= m.cols(); ++j) {
            const Int& x = m(i, j);
            if (x == 0) {
                ++zeros;
            } else {
                ++nonzeros;
                sum_abs += abs(x);
            }
        }
    DensityStats s;
    s.null_fraction = Rational(zeros, Int(m.rows()) * Int(m.cols()));
    s.mean_abs_nonzero = nonzeros == 0 ? Rational(0) : Rational(sum_abs, nonzeros);
    return s;
}

}  // namespace kbnf
