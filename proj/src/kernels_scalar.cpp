#include <grasp/kernels.hpp>

namespace grasp::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n)
{
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += x[i] * y[i];
    }
    return s;
}

double sum_squares_scalar(const double* x, std::size_t n)
{
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += x[i] * x[i];
    }
    return s;
}

double weighted_sum_squares_scalar(const double* x, const double* w, std::size_t n)
{
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += x[i] * x[i] * w[i];
    }
    return s;
}

double squared_distance_scalar(const double* x, const double* y, std::size_t n)
{
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += alpha * x[i];
    }
}

constexpr KernelTable table{
    "scalar",
    dot_scalar,
    sum_squares_scalar,
    weighted_sum_squares_scalar,
    squared_distance_scalar,
    axpy_scalar,
};

} // namespace

const KernelTable& scalar_table() noexcept
{
    return table;
}

} // namespace grasp::kernels
