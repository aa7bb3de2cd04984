#include <grasp/linalg.hpp>
#include <grasp/error.hpp>
#include <grasp/kernels.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace grasp {

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::transposed() const
{
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

namespace linalg {

void cholesky_in_place(Matrix& a)
{
    const std::size_t n = a.rows();
    if (a.cols() != n) {
        throw DomainError("cholesky: matrix is not square");
    }
    for (std::size_t j = 0; j < n; ++j) {
        std::span<const double> row_j = a.row(j).first(j);
        const double pivot = a(j, j) - kernels::sum_squares(row_j);
        if (!(pivot > 0.0) || !std::isfinite(pivot)) {
            throw FactorizationError("cholesky: matrix is not positive definite (pivot "
                                     + std::to_string(j) + " = " + std::to_string(pivot) + ")");
        }
        const double diag = std::sqrt(pivot);
        a(j, j) = diag;
        for (std::size_t i = j + 1; i < n; ++i) {
            a(i, j) = (a(i, j) - kernels::dot(a.row(i).first(j), row_j)) / diag;
        }
        for (std::size_t k = j + 1; k < n; ++k) {
            a(j, k) = 0.0;
        }
    }
}

Matrix cholesky(Matrix a)
{
    cholesky_in_place(a);
    return a;
}

void solve_lower(const Matrix& lower, std::span<double> b)
{
    const std::size_t n = lower.rows();
    for (std::size_t i = 0; i < n; ++i) {
        b[i] = (b[i] - kernels::dot(lower.row(i).first(i), b.first(i))) / lower(i, i);
    }
}

void solve_lower_transpose(const Matrix& lower, std::span<double> b)
{
    // Column sweep over Lᵀ uses contiguous rows of L.
    for (std::size_t i = lower.rows(); i-- > 0;) {
        b[i] /= lower(i, i);
        kernels::axpy(-b[i], lower.row(i).first(i), b.first(i));
    }
}

std::vector<double> cholesky_solve(const Matrix& lower, std::span<const double> b)
{
    std::vector<double> x(b.begin(), b.end());
    solve_lower(lower, x);
    solve_lower_transpose(lower, x);
    return x;
}

Matrix spd_inverse(const Matrix& a)
{
    const Matrix lower = cholesky(a);
    const std::size_t n = a.rows();
    Matrix inv(n, n);
    std::vector<double> e(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(e.begin(), e.end(), 0.0);
        e[j] = 1.0;
        solve_lower(lower, e);
        solve_lower_transpose(lower, e);
        for (std::size_t i = 0; i < n; ++i) {
            inv(i, j) = e[i];
        }
    }
    return inv;
}

void multiply(const Matrix& x, std::span<const double> v, std::span<double> out)
{
    for (std::size_t i = 0; i < x.rows(); ++i) {
        out[i] = kernels::dot(x.row(i), v);
    }
}

std::vector<double> multiply(const Matrix& x, std::span<const double> v)
{
    std::vector<double> out(x.rows());
    multiply(x, v, out);
    return out;
}

Matrix gram(const Matrix& x)
{
    const Matrix t = x.transposed();
    const std::size_t p = x.cols();
    Matrix g(p, p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const double v = kernels::dot(t.row(i), t.row(j));
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    return g;
}

std::vector<double> transpose_multiply(const Matrix& x, std::span<const double> y)
{
    std::vector<double> out(x.cols(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        kernels::axpy(y[i], x.row(i), out);
    }
    return out;
}

double quadratic_form(const Matrix& a, std::span<const double> v)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        s += v[i] * kernels::dot(a.row(i), v);
    }
    return s;
}

std::vector<double> least_squares(const Matrix& x, std::span<const double> y)
{
    const Matrix lower = cholesky(gram(x));
    return cholesky_solve(lower, transpose_multiply(x, y));
}

} // namespace linalg
} // namespace grasp
