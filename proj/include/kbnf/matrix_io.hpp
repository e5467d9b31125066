#pragma once

// Plain-text matrix files.
//
// Sparse form (the write format):
//     R C M
//     i j v        one nonzero entry per line, 1-based indices
//     ...
//     0 0 0        terminator
// Unlisted entries are zero.  Listing the same (i,j) twice is an error.
//
// Dense form (read only):
//     R C D
//     v ... v      R lines of C entries
//
// Tokens may be separated by any whitespace; errors report the 1-based
// line of the offending token.

#include "kbnf/matrix.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace kbnf {

class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

namespace detail {

// Whitespace-separated tokens with the line each one came from.
class TokenReader {
  public:
    explicit TokenReader(std::istream& in) : in_(in) {}

    // Returns false at end of stream.
    bool next(std::string& tok) {
        for (;;) {
            if (pos_ >= line_buf_.size()) {
                if (!std::getline(in_, line_buf_)) return false;
                ++line_no_;
                pos_ = 0;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(line_buf_[pos_]))) {
                ++pos_;
                continue;
            }
            std::size_t start = pos_;
            while (pos_ < line_buf_.size() &&
                   !std::isspace(static_cast<unsigned char>(line_buf_[pos_])))
                ++pos_;
            tok = line_buf_.substr(start, pos_ - start);
            return true;
        }
    }

    std::size_t line() const { return line_no_; }

  private:
    std::istream& in_;
    std::string line_buf_;
    std::size_t pos_ = 0;
    std::size_t line_no_ = 0;
};

inline bool looks_like_integer(const std::string& s) {
    std::size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

inline Int require_int(TokenReader& tr, const char* what) {
    std::string tok;
    if (!tr.next(tok)) throw ParseError(tr.line() + 1, std::string("unexpected end of file, expected ") + what);
    if (!looks_like_integer(tok))
        throw ParseError(tr.line(), std::string("expected ") + what + ", got \"" + tok + "\"");
    return Int(tok);
}

inline std::size_t require_count(TokenReader& tr, const char* what) {
    Int v = require_int(tr, what);
    if (v < 1 || v > 1000000000)
        throw ParseError(tr.line(), std::string(what) + " out of range");
    return static_cast<std::size_t>(v);
}

}  // namespace detail

inline ExactMatrix read_matrix(std::istream& in) {
    detail::TokenReader tr(in);
    const std::size_t rows = detail::require_count(tr, "row count");
    const std::size_t cols = detail::require_count(tr, "column count");

    std::string kind;
    if (!tr.next(kind)) throw ParseError(tr.line() + 1, "unexpected end of file, expected format tag");
    ExactMatrix m(rows, cols);

    if (kind == "D") {
        for (std::size_t i = 1; i <= rows; ++i)
            for (std::size_t j = 1; j <= cols; ++j) m(i, j) = detail::require_int(tr, "entry");
        return m;
    }
    if (kind != "M") throw ParseError(tr.line(), "format tag must be M or D, got \"" + kind + "\"");

    std::vector<char> seen(rows * cols, 0);
    for (;;) {
        const Int bi = detail::require_int(tr, "row index");
        const std::size_t line_i = tr.line();
        const Int bj = detail::require_int(tr, "column index");
        const Int v = detail::require_int(tr, "entry value");
        if (bi == 0 && bj == 0 && v == 0) return m;
        if (bi < 1 || bi > rows) throw ParseError(line_i, "row index out of declared bounds");
        if (bj < 1 || bj > cols) throw ParseError(line_i, "column index out of declared bounds");
        const std::size_t i = static_cast<std::size_t>(bi), j = static_cast<std::size_t>(bj);
        char& flag = seen[(i - 1) * cols + (j - 1)];
        if (flag) throw ParseError(line_i, "duplicate entry for the same position");
        flag = 1;
        m(i, j) = v;
    }
}

inline void write_matrix(std::ostream& out, const ExactMatrix& m) {
    out << m.rows() << ' ' << m.cols() << " M\n";
    for (std::size_t i = 1; i <= m.rows(); ++i)
        for (std::size_t j = 1; j <= m.cols(); ++j)
            if (m(i, j) != 0) out << i << ' ' << j << ' ' << m(i, j) << '\n';
    out << "0 0 0\n";
}

inline ExactMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_matrix(in);
}

inline void write_matrix_file(const std::string& path, const ExactMatrix& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_matrix(out, m);
    out.flush();
    if (!out) throw std::runtime_error("write to " + path + " failed");
}

inline std::string matrix_to_string(const ExactMatrix& m) {
    std::ostringstream os;
    write_matrix(os, m);
    return os.str();
}

}  // namespace kbnf
