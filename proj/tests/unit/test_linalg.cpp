#include <doctest.h>

#include <grasp/error.hpp>
#include <grasp/linalg.hpp>

#include <cmath>
#include <random>

using grasp::Matrix;
namespace linalg = grasp::linalg;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    Matrix m(r, c);
    for (double& v : m.data()) {
        v = normal(gen);
    }
    return m;
}

// Naive triple loop oracle.
Matrix naive_product(const Matrix& a, const Matrix& b)
{
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            long double s = 0.0L;
            for (std::size_t k = 0; k < a.cols(); ++k) {
                s += static_cast<long double>(a(i, k)) * b(k, j);
            }
            c(i, j) = static_cast<double>(s);
        }
    }
    return c;
}

Matrix random_spd(std::size_t n, std::uint64_t seed)
{
    const Matrix x = random_matrix(n + 5, n, seed);
    Matrix a = naive_product(x.transposed(), x);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) += 0.1;
    }
    return a;
}

double max_abs_diff(const Matrix& a, const Matrix& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    }
    return m;
}

} // namespace

TEST_CASE("gram matches the naive product")
{
    for (std::size_t p : {1u, 3u, 8u, 17u}) {
        const Matrix x = random_matrix(23, p, p);
        CHECK(max_abs_diff(linalg::gram(x), naive_product(x.transposed(), x)) < 1e-12);
    }
}

TEST_CASE("cholesky reconstructs the matrix")
{
    for (std::size_t n : {1u, 2u, 5u, 16u, 41u}) {
        const Matrix a = random_spd(n, 10 + n);
        const Matrix l = linalg::cholesky(a);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                CHECK(l(i, j) == 0.0);
            }
        }
        INFO("n = " << n);
        CHECK(max_abs_diff(naive_product(l, l.transposed()), a) < 1e-10 * (1.0 + n));
    }
}

TEST_CASE("triangular solves and spd_inverse")
{
    const std::size_t n = 12;
    const Matrix a = random_spd(n, 4);
    const Matrix l = linalg::cholesky(a);
    const Matrix x_true = random_matrix(n, 1, 5);
    std::vector<double> b = linalg::multiply(a, x_true.data());
    const std::vector<double> x = linalg::cholesky_solve(l, b);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(x[i] == doctest::Approx(x_true(i, 0)).epsilon(1e-9));
    }
    const Matrix inv = linalg::spd_inverse(a);
    CHECK(max_abs_diff(naive_product(a, inv), Matrix::identity(n)) < 1e-9);
}

TEST_CASE("cholesky rejects indefinite matrices")
{
    Matrix a(2, 2);
    a(0, 0) = 1.0;
    a(0, 1) = a(1, 0) = 2.0;
    a(1, 1) = 1.0;
    CHECK_THROWS_AS(linalg::cholesky(a), grasp::FactorizationError);
    Matrix nan_matrix = Matrix::identity(3);
    nan_matrix(1, 1) = NAN;
    CHECK_THROWS_AS(linalg::cholesky(nan_matrix), grasp::FactorizationError);
}

TEST_CASE("least squares recovers exact coefficients")
{
    const Matrix x = random_matrix(40, 6, 8);
    const std::vector<double> beta{1.0, -2.0, 0.5, 0.0, 3.0, -0.25};
    const std::vector<double> y = linalg::multiply(x, beta);
    const std::vector<double> est = linalg::least_squares(x, y);
    for (std::size_t j = 0; j < beta.size(); ++j) {
        CHECK(est[j] == doctest::Approx(beta[j]).epsilon(1e-10));
    }
}

TEST_CASE("quadratic form and transpose multiply")
{
    const Matrix a = random_spd(5, 21);
    const Matrix v = random_matrix(5, 1, 22);
    const Matrix av = naive_product(a, v);
    double expected = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
        expected += v(i, 0) * av(i, 0);
    }
    CHECK(linalg::quadratic_form(a, v.data()) == doctest::Approx(expected).epsilon(1e-12));

    const Matrix x = random_matrix(9, 4, 23);
    const Matrix y = random_matrix(9, 1, 24);
    const Matrix xty = naive_product(x.transposed(), y);
    const std::vector<double> got = linalg::transpose_multiply(x, y.data());
    for (std::size_t j = 0; j < 4; ++j) {
        CHECK(got[j] == doctest::Approx(xty(j, 0)).epsilon(1e-12));
    }
}
