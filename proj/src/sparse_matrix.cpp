#include "pcgbench/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pcgbench/errors.hpp"

namespace pcgbench {

namespace {

void require_square_index(Index n, Index i, Index j)
{
    if (i < 0 || i >= n || j < 0 || j >= n) {
        throw std::out_of_range("entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                ") outside " + std::to_string(n) + "x" + std::to_string(n));
    }
}

void require_length(Index expected, std::size_t got, const char* what)
{
    if (static_cast<std::size_t>(expected) != got) {
        throw DimensionMismatch(std::string(what) + ": expected length " +
                                std::to_string(expected) + ", got " + std::to_string(got));
    }
}

}  // namespace

SparseMatrix SparseMatrix::from_triplets(Index n, std::vector<Triplet> entries)
{
    if (n < 0) {
        throw std::invalid_argument("negative dimension");
    }
    for (const auto& t : entries) {
        require_square_index(n, t.row, t.col);
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseMatrix m;
    m.n_ = n;
    m.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
    m.col_idx_.reserve(entries.size());
    m.values_.reserve(entries.size());

    std::size_t k = 0;
    while (k < entries.size()) {
        const Index r = entries[k].row;
        const Index c = entries[k].col;
        double sum = 0.0;
        // Duplicates are summed in input order (stable sort), so the result is deterministic.
        while (k < entries.size() && entries[k].row == r && entries[k].col == c) {
            sum += entries[k].value;
            ++k;
        }
        if (sum != 0.0) {
            m.col_idx_.push_back(c);
            m.values_.push_back(sum);
            ++m.row_ptr_[static_cast<std::size_t>(r) + 1];
        }
    }
    for (Index i = 0; i < n; ++i) {
        m.row_ptr_[i + 1] += m.row_ptr_[i];
    }
    m.finalize();
    return m;
}

SparseMatrix SparseMatrix::from_csr(Index n, std::vector<Index> row_ptr, std::vector<Index> col_idx,
                                    std::vector<double> values)
{
    require_length(n + 1, row_ptr.size(), "row_ptr");
    if (row_ptr.front() != 0 || col_idx.size() != values.size() ||
        static_cast<std::size_t>(row_ptr.back()) != values.size()) {
        throw std::invalid_argument("inconsistent CSR arrays");
    }
    SparseMatrix m;
    m.n_ = n;
    m.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
    m.col_idx_.reserve(col_idx.size());
    m.values_.reserve(values.size());
    for (Index i = 0; i < n; ++i) {
        if (row_ptr[i + 1] < row_ptr[i]) {
            throw std::invalid_argument("row_ptr is not nondecreasing");
        }
        Index prev = -1;
        for (Index k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
            const Index j = col_idx[k];
            require_square_index(n, i, j);
            if (j <= prev) {
                throw std::invalid_argument("column indices not strictly increasing in row " +
                                            std::to_string(i));
            }
            prev = j;
            if (values[k] != 0.0) {
                m.col_idx_.push_back(j);
                m.values_.push_back(values[k]);
            }
        }
        m.row_ptr_[i + 1] = static_cast<Index>(m.values_.size());
    }
    m.finalize();
    return m;
}

SparseMatrix SparseMatrix::identity(Index n)
{
    const Vector ones(static_cast<std::size_t>(n), 1.0);
    return diagonal(ones);
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> d)
{
    const auto n = static_cast<Index>(d.size());
    std::vector<Triplet> t;
    t.reserve(d.size());
    for (Index i = 0; i < n; ++i) {
        t.push_back({i, i, d[i]});
    }
    return from_triplets(n, std::move(t));
}

void SparseMatrix::finalize()
{
    symmetric_ = true;
    for (Index i = 0; i < n_ && symmetric_; ++i) {
        for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            const Index j = col_idx_[k];
            if (j == i) {
                continue;
            }
            const auto cols = row_cols(j);
            const auto it = std::lower_bound(cols.begin(), cols.end(), i);
            if (it == cols.end() || *it != i ||
                values_[row_ptr_[j] + (it - cols.begin())] != values_[k]) {
                symmetric_ = false;
                break;
            }
        }
    }
}

double SparseMatrix::at(Index i, Index j) const
{
    require_square_index(n_, i, j);
    const auto cols = row_cols(i);
    const auto it = std::lower_bound(cols.begin(), cols.end(), j);
    if (it == cols.end() || *it != j) {
        return 0.0;
    }
    return values_[row_ptr_[i] + (it - cols.begin())];
}

bool SparseMatrix::contains(Index i, Index j) const
{
    const auto cols = row_cols(i);
    return std::binary_search(cols.begin(), cols.end(), j);
}

Vector SparseMatrix::diagonal_values() const
{
    Vector d(static_cast<std::size_t>(n_), 0.0);
    for (Index i = 0; i < n_; ++i) {
        d[i] = at(i, i);
    }
    return d;
}

SparseMatrix SparseMatrix::transpose() const
{
    std::vector<Index> rp(static_cast<std::size_t>(n_) + 1, 0);
    for (const Index j : col_idx_) {
        ++rp[j + 1];
    }
    for (Index i = 0; i < n_; ++i) {
        rp[i + 1] += rp[i];
    }
    std::vector<Index> ci(col_idx_.size());
    std::vector<double> v(values_.size());
    std::vector<Index> next(rp.begin(), rp.end() - 1);
    for (Index i = 0; i < n_; ++i) {
        for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            const Index dst = next[col_idx_[k]]++;
            ci[dst] = i;
            v[dst] = values_[k];
        }
    }
    return from_csr(n_, std::move(rp), std::move(ci), std::move(v));
}

SparseMatrix SparseMatrix::lower() const
{
    std::vector<Index> rp{0};
    std::vector<Index> ci;
    std::vector<double> v;
    for (Index i = 0; i < n_; ++i) {
        for (Index k = row_ptr_[i]; k < row_ptr_[i + 1] && col_idx_[k] <= i; ++k) {
            ci.push_back(col_idx_[k]);
            v.push_back(values_[k]);
        }
        rp.push_back(static_cast<Index>(ci.size()));
    }
    return from_csr(n_, std::move(rp), std::move(ci), std::move(v));
}

SparseMatrix SparseMatrix::upper() const
{
    std::vector<Index> rp{0};
    std::vector<Index> ci;
    std::vector<double> v;
    for (Index i = 0; i < n_; ++i) {
        for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            if (col_idx_[k] >= i) {
                ci.push_back(col_idx_[k]);
                v.push_back(values_[k]);
            }
        }
        rp.push_back(static_cast<Index>(ci.size()));
    }
    return from_csr(n_, std::move(rp), std::move(ci), std::move(v));
}

std::vector<Triplet> SparseMatrix::triplets() const
{
    std::vector<Triplet> t;
    t.reserve(values_.size());
    for (Index i = 0; i < n_; ++i) {
        for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            t.push_back({i, col_idx_[k], values_[k]});
        }
    }
    return t;
}

bool operator==(const SparseMatrix& a, const SparseMatrix& b)
{
    return a.n_ == b.n_ && a.row_ptr_ == b.row_ptr_ && a.col_idx_ == b.col_idx_ &&
           a.values_ == b.values_;
}

Vector matvec(const SparseMatrix& a, std::span<const double> x)
{
    Vector y(static_cast<std::size_t>(a.n()));
    matvec(a, x, y);
    return y;
}

void matvec(const SparseMatrix& a, std::span<const double> x, std::span<double> y)
{
    require_length(a.n(), x.size(), "matvec input");
    require_length(a.n(), y.size(), "matvec output");
    const auto rp = a.row_ptr();
    const auto ci = a.col_idx();
    const auto v = a.values();
    for (Index i = 0; i < a.n(); ++i) {
        double sum = 0.0;
        for (Index k = rp[i]; k < rp[i + 1]; ++k) {
            sum += v[k] * x[ci[k]];
        }
        y[i] = sum;
    }
}

Vector lower_tri_solve(const SparseMatrix& l, std::span<const double> b)
{
    Vector y(static_cast<std::size_t>(l.n()));
    lower_tri_solve(l, b, y);
    return y;
}

void lower_tri_solve(const SparseMatrix& l, std::span<const double> b, std::span<double> y)
{
    require_length(l.n(), b.size(), "lower solve rhs");
    require_length(l.n(), y.size(), "lower solve output");
    const auto rp = l.row_ptr();
    const auto ci = l.col_idx();
    const auto v = l.values();
    for (Index i = 0; i < l.n(); ++i) {
        double sum = b[i];
        Index k = rp[i];
        const Index end = rp[i + 1];
        for (; k < end && ci[k] < i; ++k) {
            sum -= v[k] * y[ci[k]];
        }
        if (k == end || ci[k] != i) {
            throw SingularFactor("zero diagonal in lower factor at row " + std::to_string(i));
        }
        if (k + 1 != end) {
            throw std::invalid_argument("lower_tri_solve: entry above the diagonal in row " +
                                        std::to_string(i));
        }
        y[i] = sum / v[k];
    }
}

Vector upper_tri_solve(const SparseMatrix& u, std::span<const double> b)
{
    Vector y(static_cast<std::size_t>(u.n()));
    upper_tri_solve(u, b, y);
    return y;
}

void upper_tri_solve(const SparseMatrix& u, std::span<const double> b, std::span<double> y)
{
    require_length(u.n(), b.size(), "upper solve rhs");
    require_length(u.n(), y.size(), "upper solve output");
    const auto rp = u.row_ptr();
    const auto ci = u.col_idx();
    const auto v = u.values();
    for (Index i = u.n() - 1; i >= 0; --i) {
        const Index start = rp[i];
        if (start == rp[i + 1] || ci[start] != i) {
            if (start != rp[i + 1] && ci[start] < i) {
                throw std::invalid_argument("upper_tri_solve: entry below the diagonal in row " +
                                            std::to_string(i));
            }
            throw SingularFactor("zero diagonal in upper factor at row " + std::to_string(i));
        }
        double sum = b[i];
        for (Index k = start + 1; k < rp[i + 1]; ++k) {
            sum -= v[k] * y[ci[k]];
        }
        y[i] = sum / v[start];
    }
}

Index bandwidth(const SparseMatrix& a)
{
    Index bw = 0;
    for (Index i = 0; i < a.n(); ++i) {
        for (const Index j : a.row_cols(i)) {
            bw = std::max(bw, i > j ? i - j : j - i);
        }
    }
    return bw;
}

double dot(std::span<const double> x, std::span<const double> y)
{
    require_length(static_cast<Index>(x.size()), y.size(), "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += x[i] * y[i];
    }
    return s;
}

double norm2(std::span<const double> x)
{
    return std::sqrt(dot(x, x));
}

double norm_inf(std::span<const double> x)
{
    double m = 0.0;
    for (const double v : x) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y)
{
    require_length(static_cast<Index>(x.size()), y.size(), "axpy");
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] += alpha * x[i];
    }
}

}  // namespace pcgbench
