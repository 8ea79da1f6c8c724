#pragma once

#include "landauer_lab/linalg.hpp"

#include <cmath>
#include <complex>
#include <random>

namespace test_support {

using landauer_lab::linalg::Complex;
using landauer_lab::linalg::ComplexMatrix;

inline double max_diff(const ComplexMatrix& a, const ComplexMatrix& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            d = std::max(d, std::abs(a(i, j) - b(i, j)));
    return d;
}

inline ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t n)
{
    std::normal_distribution<double> g;
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = {g(rng), g(rng)};
    return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t n)
{
    const auto a = random_matrix(rng, n);
    auto h = a + a.adjoint();
    h *= 0.5;
    return h;
}

/// G G^dagger / Tr, a generic full-rank density matrix.
inline ComplexMatrix random_density(std::mt19937_64& rng, std::size_t n)
{
    const auto g = random_matrix(rng, n);
    auto rho = g * g.adjoint();
    rho *= 1.0 / rho.trace().real();
    return rho;
}

/// Plain nested-loop matrix product, independent of the library kernel.
inline ComplexMatrix naive_product(const ComplexMatrix& a, const ComplexMatrix& b)
{
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            Complex s{};
            for (std::size_t k = 0; k < a.cols(); ++k)
                s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

inline double entropy2(double a, double b)
{
    auto h = [](double v) { return v > 0.0 ? -v * std::log(v) : 0.0; };
    return h(a) + h(b);
}

} // namespace test_support
