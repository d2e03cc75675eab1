#include <colocal/linalg.hpp>
#include <colocal/scalar.hpp>

#include <cmath>
#include <utility>

namespace colocal {
namespace {

template <class T>
std::size_t choose_pivot(const Matrix<T>& m, std::size_t from_row, std::size_t col) {
    if constexpr (scalar_traits<T>::exact) {
        for (std::size_t r = from_row; r < m.rows; ++r)
            if (!is_zero(m(r, col))) return r;
        return m.rows;
    } else {
        std::size_t best = m.rows;
        double best_abs = 0.0;
        for (std::size_t r = from_row; r < m.rows; ++r) {
            const double a = std::abs(m(r, col));
            if (!is_zero(m(r, col)) && a > best_abs) {
                best = r;
                best_abs = a;
            }
        }
        return best;
    }
}

}  // namespace

template <class T>
Echelon<T> row_reduce(Matrix<T> m) {
    Echelon<T> out;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
        const std::size_t p = choose_pivot(m, row, col);
        if (p == m.rows) continue;
        if (p != row)
            for (std::size_t c = 0; c < m.cols; ++c) std::swap(m(p, c), m(row, c));
        const T pivot = m(row, col);
        for (std::size_t c = col; c < m.cols; ++c) m(row, c) /= pivot;
        for (std::size_t r = 0; r < m.rows; ++r) {
            if (r == row || is_zero(m(r, col))) continue;
            const T factor = m(r, col);
            for (std::size_t c = col; c < m.cols; ++c) m(r, c) -= factor * m(row, c);
        }
        if constexpr (!scalar_traits<T>::exact)
            for (std::size_t r = 0; r < m.rows; ++r)
                if (r != row) m(r, col) = T(0);
        out.pivot_columns.push_back(col);
        ++row;
    }
    out.reduced = std::move(m);
    return out;
}

template <class T>
std::vector<std::vector<T>> nullspace(const Matrix<T>& m) {
    const auto ech = row_reduce(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (const auto c : ech.pivot_columns) is_pivot[c] = true;
    std::vector<std::vector<T>> basis;
    for (std::size_t free = 0; free < m.cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<T> v(m.cols, T(0));
        v[free] = T(1);
        for (std::size_t r = 0; r < ech.pivot_columns.size(); ++r)
            v[ech.pivot_columns[r]] = -ech.reduced(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

template <class T>
std::optional<std::vector<T>> solve_linear(const Matrix<T>& a, const std::vector<T>& b) {
    Matrix<T> aug(a.rows, a.cols + 1);
    for (std::size_t r = 0; r < a.rows; ++r) {
        for (std::size_t c = 0; c < a.cols; ++c) aug(r, c) = a(r, c);
        aug(r, a.cols) = b[r];
    }
    const auto ech = row_reduce(std::move(aug));
    if (!ech.pivot_columns.empty() && ech.pivot_columns.back() == a.cols) return std::nullopt;
    std::vector<T> x(a.cols, T(0));
    for (std::size_t r = 0; r < ech.pivot_columns.size(); ++r) x[ech.pivot_columns[r]] = ech.reduced(r, a.cols);
    return x;
}

template struct Echelon<Rational>;
template struct Echelon<double>;
template Echelon<Rational> row_reduce(Matrix<Rational>);
template Echelon<double> row_reduce(Matrix<double>);
template std::vector<std::vector<Rational>> nullspace(const Matrix<Rational>&);
template std::vector<std::vector<double>> nullspace(const Matrix<double>&);
template std::optional<std::vector<Rational>> solve_linear(const Matrix<Rational>&, const std::vector<Rational>&);
template std::optional<std::vector<double>> solve_linear(const Matrix<double>&, const std::vector<double>&);

}  // namespace colocal
