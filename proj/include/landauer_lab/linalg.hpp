#pragma once

#include "landauer_lab/numeric_policy.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace landauer_lab::linalg {

using Complex = std::complex<double>;

/// Dense row-major complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const double> values);
    /// |v><v|
    static ComplexMatrix outer(std::span<const Complex> v);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    Complex& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const noexcept
    {
        return data_[r * cols_ + c];
    }

    std::span<const Complex> entries() const noexcept { return data_; }

    ComplexMatrix adjoint() const;
    Complex trace() const;
    /// max_ij |m_ij - conj(m_ji)|
    double hermiticity_defect() const;
    double max_abs() const;
    double one_norm() const;
    bool all_finite() const;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(Complex s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

struct HermitianEigenDecomposition {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // columns
};

enum class Subsystem { A, B };

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   const NumericPolicy& tol = NumericPolicy::standard());

/// Reduced matrix of a (d_a * d_b) square operator, keeping subsystem `keep`.
ComplexMatrix partial_trace(const ComplexMatrix& joint, std::size_t d_a, std::size_t d_b,
                            Subsystem keep);

/// Cyclic Jacobi diagonalisation; throws ShapeError if `m` is not Hermitian.
HermitianEigenDecomposition herm_eig(const ComplexMatrix& m,
                                     const NumericPolicy& tol = NumericPolicy::standard());

/// exp(-i h t) for Hermitian h, through its eigendecomposition.
ComplexMatrix expm_hermitian_generator(const ComplexMatrix& h, double t,
                                       const NumericPolicy& tol = NumericPolicy::standard());

/// Truncated bosonic lowering operator on levels 0..n_max-1.
/// [a, a^dagger] equals the identity except at the top level, where it is -(n_max-1).
ComplexMatrix annihilation_op(std::size_t n_max);

/// Tr(a b) without forming the product.
Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b);

} // namespace landauer_lab::linalg
