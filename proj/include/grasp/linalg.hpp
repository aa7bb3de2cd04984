#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace grasp {

/// Dense row-major matrix of doubles.
class Matrix
{
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    Matrix transposed() const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

namespace linalg {

/// Overwrites the lower triangle of `a` with its Cholesky factor L (A = L Lᵀ)
/// and zeroes the strict upper triangle. Throws FactorizationError when a
/// pivot is not positive.
void cholesky_in_place(Matrix& a);

/// Returns the Cholesky factor of `a`.
Matrix cholesky(Matrix a);

/// Solves L z = b in place, L lower triangular.
void solve_lower(const Matrix& lower, std::span<double> b);

/// Solves Lᵀ x = b in place, L lower triangular.
void solve_lower_transpose(const Matrix& lower, std::span<double> b);

/// A⁻¹ b through an existing Cholesky factor.
std::vector<double> cholesky_solve(const Matrix& lower, std::span<const double> b);

/// Dense inverse of an SPD matrix via its Cholesky factor.
Matrix spd_inverse(const Matrix& a);

/// out = X v
void multiply(const Matrix& x, std::span<const double> v, std::span<double> out);
std::vector<double> multiply(const Matrix& x, std::span<const double> v);

/// Xᵀ X
Matrix gram(const Matrix& x);

/// Xᵀ y
std::vector<double> transpose_multiply(const Matrix& x, std::span<const double> y);

/// vᵀ A v
double quadratic_form(const Matrix& a, std::span<const double> v);

/// Solves the least-squares problem min ‖X b − y‖ through the normal equations.
std::vector<double> least_squares(const Matrix& x, std::span<const double> y);

} // namespace linalg
} // namespace grasp
