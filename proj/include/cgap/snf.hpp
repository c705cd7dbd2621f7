#pragma once

#include <cstdint>
#include <vector>

namespace cgap {

// Dense integer matrix with overflow-checked arithmetic. Sizes here are tiny
// (tens of rows/columns), so no effort is spent on sparsity.
class IntMat {
public:
    IntMat() = default;
    IntMat(int rows, int cols);
    static IntMat identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::int64_t& at(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    std::int64_t at(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    void swap_rows(int i, int j);
    void swap_cols(int i, int j);
    void add_row_multiple(int dst, int src, std::int64_t factor);
    void add_col_multiple(int dst, int src, std::int64_t factor);
    void negate_row(int i);

    friend IntMat operator*(const IntMat& a, const IntMat& b);
    friend bool operator==(const IntMat& a, const IntMat& b);

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<std::int64_t> data_;
};

// L * A * R = D with L, R unimodular and D diagonal, each diagonal entry
// non-negative and dividing the next.
struct SmithResult {
    IntMat d;
    IntMat l;
    IntMat r;
    int rank = 0;
};

SmithResult smith_normal_form(const IntMat& a);

// Decides whether A*t = x has a solution t over the integers.
bool integer_solvable(const IntMat& a, const std::vector<std::int64_t>& x);

// Determinant by fraction-free expansion; used by tests to certify
// unimodularity of the SNF transforms.
std::int64_t determinant(const IntMat& a);

} // namespace cgap
