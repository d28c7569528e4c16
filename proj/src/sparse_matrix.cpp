#include "mds/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mds {

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("SparseMatrix: negative size");
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SparseMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.row_ptr_.assign(rows + 1, 0);
    m.entries_.reserve(triplets.size());
    for (size_t k = 0; k < triplets.size(); ++k) {
        const Triplet& t = triplets[k];
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
            throw std::invalid_argument("SparseMatrix: triplet index out of range");
        if (!std::isfinite(t.value))
            throw std::invalid_argument("SparseMatrix: non-finite value");
        if (k > 0 && triplets[k - 1].row == t.row && triplets[k - 1].col == t.col)
            throw std::invalid_argument("SparseMatrix: duplicate (row, col) triplet");
        if (t.value == 0.0) continue;
        m.entries_.push_back({t.col, t.value});
        ++m.row_ptr_[t.row + 1];
    }
    for (int i = 0; i < rows; ++i) m.row_ptr_[i + 1] += m.row_ptr_[i];
    m.finalize();
    return m;
}

SparseMatrix SparseMatrix::identity(int n) {
    std::vector<Triplet> t;
    t.reserve(n);
    for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0});
    return from_triplets(n, n, std::move(t));
}

void SparseMatrix::finalize() {
    values_.resize(entries_.size());
    for (size_t i = 0; i < entries_.size(); ++i) values_[i] = entries_[i].value;
}

double SparseMatrix::operator()(int row, int col) const {
    auto r = this->row(row);
    auto it = std::lower_bound(r.begin(), r.end(), col,
                               [](const Entry& e, int c) { return e.col < c; });
    if (it != r.end() && it->col == col) return it->value;
    return 0.0;
}

std::span<const SparseMatrix::Entry> SparseMatrix::row(int i) const {
    return {entries_.data() + row_ptr_[i], static_cast<size_t>(row_ptr_[i + 1] - row_ptr_[i])};
}

std::vector<double> SparseMatrix::apply(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != cols_)
        throw std::invalid_argument("SparseMatrix::apply: size mismatch");
    std::vector<double> y(rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
        double acc = 0.0;
        for (const Entry& e : row(i)) acc += e.value * x[e.col];
        y[i] = acc;
    }
    return y;
}

std::vector<double> SparseMatrix::apply_transpose(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != rows_)
        throw std::invalid_argument("SparseMatrix::apply_transpose: size mismatch");
    std::vector<double> y(cols_, 0.0);
    for (int i = 0; i < rows_; ++i)
        for (const Entry& e : row(i)) y[e.col] += e.value * x[i];
    return y;
}

SparseMatrix SparseMatrix::multiply(const SparseMatrix& other) const {
    if (cols_ != other.rows_)
        throw std::invalid_argument("SparseMatrix::multiply: size mismatch");
    std::vector<Triplet> out;
    std::vector<double> scratch(other.cols_, 0.0);
    std::vector<int> touched;
    for (int i = 0; i < rows_; ++i) {
        touched.clear();
        for (const Entry& e : row(i)) {
            for (const Entry& f : other.row(e.col)) {
                if (scratch[f.col] == 0.0) touched.push_back(f.col);
                scratch[f.col] += e.value * f.value;
            }
        }
        std::sort(touched.begin(), touched.end());
        for (int c : touched) {
            if (scratch[c] != 0.0) out.push_back({i, c, scratch[c]});
            scratch[c] = 0.0;
        }
    }
    return from_triplets(rows_, other.cols_, std::move(out));
}

SparseMatrix SparseMatrix::transpose() const {
    std::vector<Triplet> out;
    out.reserve(entries_.size());
    for (int i = 0; i < rows_; ++i)
        for (const Entry& e : row(i)) out.push_back({e.col, i, e.value});
    return from_triplets(cols_, rows_, std::move(out));
}

std::vector<double> SparseMatrix::column_sums() const {
    std::vector<double> s(cols_, 0.0);
    for (int i = 0; i < rows_; ++i)
        for (const Entry& e : row(i)) s[e.col] += e.value;
    return s;
}

std::vector<double> SparseMatrix::row_sums() const {
    std::vector<double> s(rows_, 0.0);
    for (int i = 0; i < rows_; ++i)
        for (const Entry& e : row(i)) s[i] += e.value;
    return s;
}

double SparseMatrix::max_abs_diff(const SparseMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("SparseMatrix::max_abs_diff: size mismatch");
    double worst = 0.0;
    for (int i = 0; i < rows_; ++i) {
        auto ra = row(i);
        auto rb = other.row(i);
        size_t a = 0, b = 0;
        while (a < ra.size() || b < rb.size()) {
            int ca = a < ra.size() ? ra[a].col : cols_;
            int cb = b < rb.size() ? rb[b].col : cols_;
            double d;
            if (ca == cb) {
                d = ra[a].value - rb[b].value;
                ++a, ++b;
            } else if (ca < cb) {
                d = ra[a].value;
                ++a;
            } else {
                d = -rb[b].value;
                ++b;
            }
            worst = std::max(worst, std::abs(d));
        }
    }
    return worst;
}

double SparseMatrix::min_entry() const {
    double m = 0.0;
    bool first = true;
    for (const Entry& e : entries_) {
        if (first || e.value < m) m = e.value;
        first = false;
    }
    return first ? 0.0 : m;
}

std::vector<std::vector<double>> SparseMatrix::dense() const {
    std::vector<std::vector<double>> d(rows_, std::vector<double>(cols_, 0.0));
    for (int i = 0; i < rows_; ++i)
        for (const Entry& e : row(i)) d[i][e.col] = e.value;
    return d;
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
    std::vector<SparseMatrix::Triplet> out;
    out.reserve(static_cast<size_t>(a.nnz()) * b.nnz());
    for (int ia = 0; ia < a.rows(); ++ia) {
        for (const auto& ea : a.row(ia)) {
            for (int ib = 0; ib < b.rows(); ++ib) {
                for (const auto& eb : b.row(ib)) {
                    out.push_back({ia * b.rows() + ib, ea.col * b.cols() + eb.col,
                                   ea.value * eb.value});
                }
            }
        }
    }
    return SparseMatrix::from_triplets(a.rows() * b.rows(), a.cols() * b.cols(), std::move(out));
}

}  // namespace mds
