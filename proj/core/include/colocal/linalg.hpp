#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace colocal {

/// Dense row-major matrix over a scalar field.
template <class T>
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<T> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, T(0)) {}

    T& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// Reduced row echelon form by Gauss-Jordan elimination. Pivots are taken
/// left to right; in float mode the largest entry of a column is used and
/// entries within tolerance count as zero.
template <class T>
struct Echelon {
    Matrix<T> reduced;
    std::vector<std::size_t> pivot_columns;

    std::size_t rank() const noexcept { return pivot_columns.size(); }
};

template <class T>
Echelon<T> row_reduce(Matrix<T> m);

/// Nullspace basis with one vector per free column (that column set to 1,
/// the other free columns 0), in increasing column order.
template <class T>
std::vector<std::vector<T>> nullspace(const Matrix<T>& m);

/// Some x with A x = b, or nullopt if the system is inconsistent. Free
/// variables are set to 0.
template <class T>
std::optional<std::vector<T>> solve_linear(const Matrix<T>& a, const std::vector<T>& b);

}  // namespace colocal
