#pragma once

// BLAS-1 style inner loops used by the sampler's linear algebra. Every
// kernel has a scalar reference implementation; an AVX2/FMA table is built
// on x86-64 and chosen at runtime when the CPU supports it. The two tables
// agree to within floating-point reassociation error, not bitwise.
//
// GRASP_SIMD=scalar|avx2 in the environment overrides the automatic choice.

#include <cstddef>
#include <span>
#include <string_view>

namespace grasp::kernels {

struct KernelTable
{
    std::string_view name;
    double (*dot)(const double* x, const double* y, std::size_t n);
    double (*sum_squares)(const double* x, std::size_t n);
    double (*weighted_sum_squares)(const double* x, const double* w, std::size_t n);
    double (*squared_distance)(const double* x, const double* y, std::size_t n);
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

enum class Isa { scalar, avx2 };

const KernelTable& scalar_table() noexcept;

/// nullptr when the AVX2 table was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table() noexcept;

const KernelTable& active() noexcept;

/// Forces a table. Returns false (and changes nothing) if the ISA is unavailable.
bool select(Isa isa) noexcept;

inline double dot(std::span<const double> x, std::span<const double> y) noexcept
{
    return active().dot(x.data(), y.data(), x.size());
}

inline double sum_squares(std::span<const double> x) noexcept
{
    return active().sum_squares(x.data(), x.size());
}

/// Σ x_i² w_i
inline double weighted_sum_squares(std::span<const double> x, std::span<const double> w) noexcept
{
    return active().weighted_sum_squares(x.data(), w.data(), x.size());
}

/// Σ (x_i − y_i)²
inline double squared_distance(std::span<const double> x, std::span<const double> y) noexcept
{
    return active().squared_distance(x.data(), y.data(), x.size());
}

/// y ← y + alpha·x
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept
{
    active().axpy(alpha, x.data(), y.data(), x.size());
}

namespace detail {
const KernelTable* avx2_table_unchecked() noexcept;
}

} // namespace grasp::kernels
