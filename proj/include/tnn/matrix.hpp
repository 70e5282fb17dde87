#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "tnn/core_model.hpp"
#include "tnn/rational.hpp"

namespace tnn {

// Dense row-major matrix over the rationals.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols) {}
    Matrix(std::initializer_list<std::initializer_list<Rational>> init) {
        rows_ = static_cast<int>(init.size());
        cols_ = rows_ ? static_cast<int>(init.begin()->size()) : 0;
        for (const auto& r : init) {
            if (static_cast<int>(r.size()) != cols_) throw DimensionError("ragged initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    // 0-based access.
    Rational& operator()(int i, int j) { return data_[std::size_t(i) * cols_ + j]; }
    const Rational& operator()(int i, int j) const { return data_[std::size_t(i) * cols_ + j]; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Rational> data_;
};

// Exact determinant by Gaussian elimination over Q.
inline Rational determinant(Matrix a) {
    const int k = a.rows();
    if (k != a.cols()) throw SizeMismatchError("determinant of a non-square matrix");
    Rational det = 1;
    for (int c = 0; c < k; ++c) {
        int pivot = c;
        while (pivot < k && a(pivot, c) == 0) ++pivot;
        if (pivot == k) return 0;
        if (pivot != c) {
            for (int j = c; j < k; ++j) std::swap(a(pivot, j), a(c, j));
            det = -det;
        }
        det *= a(c, c);
        for (int r = c + 1; r < k; ++r) {
            if (a(r, c) == 0) continue;
            const Rational f = a(r, c) / a(c, c);
            for (int j = c; j < k; ++j) a(r, j) -= f * a(c, j);
        }
    }
    return det;
}

// Δ_Q(I|J) for 1-based index sets; Δ(∅|∅) = 1.
inline Rational minor(const Matrix& q, const IndexSet& rows, const IndexSet& cols) {
    if (rows.size() != cols.size())
        throw SizeMismatchError("|I| = " + std::to_string(rows.size()) +
                                " but |J| = " + std::to_string(cols.size()));
    for (int i : rows)
        if (i < 1 || i > q.rows()) throw RangeError("row index " + std::to_string(i));
    for (int j : cols)
        if (j < 1 || j > q.cols()) throw RangeError("column index " + std::to_string(j));
    const int k = static_cast<int>(rows.size());
    Matrix sub(k, k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) sub(r, c) = q(rows[r] - 1, cols[c] - 1);
    return determinant(std::move(sub));
}

// Exhaustive check of every minor; exponential, meant for small matrices.
inline bool is_tnn(const Matrix& q) {
    IndexSet all_rows, all_cols;
    for (int i = 1; i <= q.rows(); ++i) all_rows.push_back(i);
    for (int j = 1; j <= q.cols(); ++j) all_cols.push_back(j);
    const int kmax = std::min(q.rows(), q.cols());
    for (int k = 1; k <= kmax; ++k) {
        const auto rs = detail::k_subsets(all_rows, k);
        const auto cs = detail::k_subsets(all_cols, k);
        for (const auto& r : rs)
            for (const auto& c : cs)
                if (minor(q, r, c) < 0) return false;
    }
    return true;
}

} // namespace tnn
