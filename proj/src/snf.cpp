#include "cgap/snf.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

#include "cgap/errors.hpp"

namespace cgap {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw InternalError("IntMat: multiplication overflow");
    return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw InternalError("IntMat: addition overflow");
    return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r))
        throw InternalError("IntMat: subtraction overflow");
    return r;
}

} // namespace

IntMat::IntMat(int rows, int cols)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0) {}

IntMat IntMat::identity(int n) {
    IntMat m(n, n);
    for (int i = 0; i < n; ++i)
        m.at(i, i) = 1;
    return m;
}

void IntMat::swap_rows(int i, int j) {
    if (i == j)
        return;
    for (int k = 0; k < cols_; ++k)
        std::swap(at(i, k), at(j, k));
}

void IntMat::swap_cols(int i, int j) {
    if (i == j)
        return;
    for (int k = 0; k < rows_; ++k)
        std::swap(at(k, i), at(k, j));
}

void IntMat::add_row_multiple(int dst, int src, std::int64_t factor) {
    for (int k = 0; k < cols_; ++k)
        at(dst, k) = checked_add(at(dst, k), checked_mul(factor, at(src, k)));
}

void IntMat::add_col_multiple(int dst, int src, std::int64_t factor) {
    for (int k = 0; k < rows_; ++k)
        at(k, dst) = checked_add(at(k, dst), checked_mul(factor, at(k, src)));
}

void IntMat::negate_row(int i) {
    for (int k = 0; k < cols_; ++k)
        at(i, k) = -at(i, k);
}

IntMat operator*(const IntMat& a, const IntMat& b) {
    if (a.cols_ != b.rows_)
        throw ContractError("IntMat: dimension mismatch in product");
    IntMat c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
        for (int k = 0; k < a.cols_; ++k) {
            const std::int64_t aik = a.at(i, k);
            if (aik == 0)
                continue;
            for (int j = 0; j < b.cols_; ++j)
                c.at(i, j) = checked_add(c.at(i, j), checked_mul(aik, b.at(k, j)));
        }
    return c;
}

bool operator==(const IntMat& a, const IntMat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

namespace {

bool pivot_isolated(const IntMat& m, int s) {
    for (int i = s + 1; i < m.rows(); ++i)
        if (m.at(i, s) != 0)
            return false;
    for (int j = s + 1; j < m.cols(); ++j)
        if (m.at(s, j) != 0)
            return false;
    return true;
}

bool find_min_nonzero(const IntMat& m, int s, int& irow, int& icol) {
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    bool found = false;
    for (int i = s; i < m.rows(); ++i)
        for (int j = s; j < m.cols(); ++j) {
            const std::int64_t v = std::llabs(m.at(i, j));
            if (v != 0 && v < best) {
                best = v;
                irow = i;
                icol = j;
                found = true;
            }
        }
    return found;
}

} // namespace

SmithResult smith_normal_form(const IntMat& a) {
    SmithResult res;
    res.d = a;
    res.l = IntMat::identity(a.rows());
    res.r = IntMat::identity(a.cols());
    IntMat& d = res.d;
    const int nmin = std::min(a.rows(), a.cols());

    for (int s = 0; s < nmin; ++s) {
        bool zero_rest = false;
        for (;;) {
            int irow = s, icol = s;
            if (!find_min_nonzero(d, s, irow, icol)) {
                zero_rest = true;
                break;
            }
            d.swap_rows(s, irow);
            res.l.swap_rows(s, irow);
            d.swap_cols(s, icol);
            res.r.swap_cols(s, icol);

            for (int i = s + 1; i < d.rows(); ++i) {
                if (d.at(i, s) == 0)
                    continue;
                const std::int64_t q = d.at(i, s) / d.at(s, s);
                d.add_row_multiple(i, s, -q);
                res.l.add_row_multiple(i, s, -q);
            }
            for (int j = s + 1; j < d.cols(); ++j) {
                if (d.at(s, j) == 0)
                    continue;
                const std::int64_t q = d.at(s, j) / d.at(s, s);
                d.add_col_multiple(j, s, -q);
                res.r.add_col_multiple(j, s, -q);
            }
            // Any surviving entry in the pivot row/column is a remainder,
            // strictly smaller than the pivot: loop and re-pick.
            if (!pivot_isolated(d, s))
                continue;

            int bi = -1, bj = -1;
            for (int i = s + 1; i < d.rows() && bi < 0; ++i)
                for (int j = s + 1; j < d.cols(); ++j)
                    if (d.at(i, j) % d.at(s, s) != 0) {
                        bi = i;
                        bj = j;
                        break;
                    }
            (void)bj;
            if (bi < 0)
                break;
            // Fold a non-divisible row into the pivot row; after the next
            // reduction pass the pivot strictly shrinks, so this terminates.
            d.add_row_multiple(s, bi, 1);
            res.l.add_row_multiple(s, bi, 1);
        }
        if (!zero_rest && d.at(s, s) < 0) {
            d.negate_row(s);
            res.l.negate_row(s);
        }
        if (zero_rest)
            break;
    }

    for (int s = 0; s < nmin; ++s)
        if (res.d.at(s, s) != 0)
            res.rank = s + 1;
    return res;
}

bool integer_solvable(const IntMat& a, const std::vector<std::int64_t>& x) {
    if (static_cast<int>(x.size()) != a.rows())
        throw ContractError("integer_solvable: rhs size mismatch");
    const SmithResult snf = smith_normal_form(a);
    // y = L * x; solvable iff d_i | y_i on the diagonal and y_i = 0 beyond it.
    for (int i = 0; i < a.rows(); ++i) {
        std::int64_t y = 0;
        for (int j = 0; j < a.rows(); ++j)
            y = checked_add(y, checked_mul(snf.l.at(i, j), x[j]));
        const std::int64_t di =
            (i < std::min(a.rows(), a.cols())) ? snf.d.at(i, i) : 0;
        if (di == 0) {
            if (y != 0)
                return false;
        } else if (y % di != 0) {
            return false;
        }
    }
    return true;
}

std::int64_t determinant(const IntMat& a) {
    if (a.rows() != a.cols())
        throw ContractError("determinant: matrix not square");
    const int n = a.rows();
    if (n == 0)
        return 1;
    // Bareiss fraction-free elimination.
    IntMat m = a;
    std::int64_t sign = 1;
    std::int64_t prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m.at(k, k) == 0) {
            int swap = -1;
            for (int i = k + 1; i < n; ++i)
                if (m.at(i, k) != 0) {
                    swap = i;
                    break;
                }
            if (swap < 0)
                return 0;
            m.swap_rows(k, swap);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                const std::int64_t num = checked_sub(
                    checked_mul(m.at(i, j), m.at(k, k)),
                    checked_mul(m.at(i, k), m.at(k, j)));
                m.at(i, j) = num / prev;
            }
        prev = m.at(k, k);
    }
    return sign * m.at(n - 1, n - 1);
}

} // namespace cgap
