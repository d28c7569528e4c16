#pragma once

#include <span>
#include <vector>

namespace mds {

// Immutable sparse matrix in CSR form. All the extraction, right-inverse and
// refinement operators (H, G, S, R, E, D) are instances of this class.
class SparseMatrix {
public:
    struct Triplet {
        int row;
        int col;
        double value;
    };

    struct Entry {
        int col;
        double value;
    };

    SparseMatrix() = default;

    // Sorts the triplets, rejects duplicate (row, col) pairs and non-finite
    // values, drops exact zeros.
    static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);
    static SparseMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int nnz() const { return static_cast<int>(values_.size()); }

    // Entry lookup; absent entries read as zero.
    double operator()(int row, int col) const;

    std::span<const Entry> row(int i) const;
    int row_nnz(int i) const { return row_ptr_[i + 1] - row_ptr_[i]; }

    // y = M x
    std::vector<double> apply(std::span<const double> x) const;
    // y = M^T x
    std::vector<double> apply_transpose(std::span<const double> x) const;

    SparseMatrix multiply(const SparseMatrix& other) const;
    SparseMatrix transpose() const;

    std::vector<double> column_sums() const;
    std::vector<double> row_sums() const;

    double max_abs_diff(const SparseMatrix& other) const;
    double min_entry() const;

    std::vector<std::vector<double>> dense() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<int> row_ptr_ = {0};
    std::vector<Entry> entries_;
    std::vector<double> values_;  // mirrors entries_[i].value, kept for apply()

    void finalize();
};

// Kronecker product: (A ⊗ B)[ia*B.rows+ib, ja*B.cols+jb] = A[ia,ja]·B[ib,jb].
SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b);

}  // namespace mds
