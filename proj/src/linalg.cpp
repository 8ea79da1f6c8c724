#include "landauer_lab/linalg.hpp"

#include "landauer_lab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace landauer_lab::linalg {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0})
{
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries))
{
    if (data_.size() != rows_ * cols_)
        throw DimensionError("entries length " + std::to_string(data_.size()) +
                             " does not match " + std::to_string(rows_) + "x" +
                             std::to_string(cols_));
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0)
{
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_)
            throw DimensionError("ragged initializer list");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n)
{
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values)
{
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        m(i, i) = values[i];
    return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> v)
{
    ComplexMatrix m(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            m(i, j) = v[i] * std::conj(v[j]);
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const
{
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            out(c, r) = std::conj((*this)(r, c));
    return out;
}

Complex ComplexMatrix::trace() const
{
    if (!is_square())
        throw ShapeError("trace of a non-square matrix");
    Complex t{0.0, 0.0};
    for (std::size_t i = 0; i < rows_; ++i)
        t += (*this)(i, i);
    return t;
}

double ComplexMatrix::hermiticity_defect() const
{
    if (!is_square())
        return INFINITY;
    double d = 0.0;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = r; c < cols_; ++c)
            d = std::max(d, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    return d;
}

double ComplexMatrix::max_abs() const
{
    double m = 0.0;
    for (const auto& z : data_)
        m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::one_norm() const
{
    double best = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < rows_; ++r)
            s += std::abs((*this)(r, c));
        best = std::max(best, s);
    }
    return best;
}

bool ComplexMatrix::all_finite() const
{
    return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o)
{
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw DimensionError("matrix sum with mismatched shapes");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o)
{
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw DimensionError("matrix difference with mismatched shapes");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] -= o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s)
{
    for (auto& z : data_)
        z *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.cols_ != b.rows_)
        throw DimensionError("matrix product with inner dimensions " + std::to_string(a.cols_) +
                             " and " + std::to_string(b.rows_));
    ComplexMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        Complex* out_row = &out.data_[i * b.cols_];
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Complex aik = a.data_[i * a.cols_ + k];
            if (aik == Complex{})
                continue;
            const Complex* b_row = &b.data_[k * b.cols_];
            for (std::size_t j = 0; j < b.cols_; ++j)
                out_row[j] += aik * b_row[j];
        }
    }
    return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, const NumericPolicy& tol)
{
    const std::size_t rows = a.rows() * b.rows();
    const std::size_t cols = a.cols() * b.cols();
    if (std::max(rows, cols) > tol.max_joint_dimension)
        throw DimensionError("kron result " + std::to_string(rows) + "x" + std::to_string(cols) +
                             " exceeds max joint dimension " +
                             std::to_string(tol.max_joint_dimension));
    ComplexMatrix out(rows, cols);
    for (std::size_t ar = 0; ar < a.rows(); ++ar)
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const Complex s = a(ar, ac);
            if (s == Complex{})
                continue;
            for (std::size_t br = 0; br < b.rows(); ++br)
                for (std::size_t bc = 0; bc < b.cols(); ++bc)
                    out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
        }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& joint, std::size_t d_a, std::size_t d_b,
                            Subsystem keep)
{
    if (!joint.is_square() || joint.rows() != d_a * d_b)
        throw DimensionError("partial_trace: matrix is " + std::to_string(joint.rows()) + "x" +
                             std::to_string(joint.cols()) + ", dims give " +
                             std::to_string(d_a * d_b));
    if (keep == Subsystem::A) {
        ComplexMatrix out(d_a, d_a);
        for (std::size_t i = 0; i < d_a; ++i)
            for (std::size_t j = 0; j < d_a; ++j) {
                Complex s{};
                for (std::size_t k = 0; k < d_b; ++k)
                    s += joint(i * d_b + k, j * d_b + k);
                out(i, j) = s;
            }
        return out;
    }
    ComplexMatrix out(d_b, d_b);
    for (std::size_t i = 0; i < d_b; ++i)
        for (std::size_t j = 0; j < d_b; ++j) {
            Complex s{};
            for (std::size_t k = 0; k < d_a; ++k)
                s += joint(k * d_b + i, k * d_b + j);
            out(i, j) = s;
        }
    return out;
}

namespace {

double off_diagonal_norm(const ComplexMatrix& a)
{
    double s = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = r + 1; c < a.cols(); ++c)
            s += std::norm(a(r, c));
    return std::sqrt(2.0 * s);
}

double frobenius(const ComplexMatrix& a)
{
    double s = 0.0;
    for (const auto& z : a.entries())
        s += std::norm(z);
    return std::sqrt(s);
}

} // namespace

HermitianEigenDecomposition herm_eig(const ComplexMatrix& m, const NumericPolicy& tol)
{
    if (!m.is_square())
        throw ShapeError("herm_eig: matrix is not square");
    const double scale = std::max(1.0, m.max_abs());
    if (m.hermiticity_defect() > tol.hermiticity * scale)
        throw ShapeError("herm_eig: matrix is not Hermitian (defect " +
                         std::to_string(m.hermiticity_defect()) + ")");

    const std::size_t n = m.rows();
    // Work on the exactly Hermitian part.
    ComplexMatrix a(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        a(r, r) = m(r, r).real();
        for (std::size_t c = r + 1; c < n; ++c) {
            const Complex v = 0.5 * (m(r, c) + std::conj(m(c, r)));
            a(r, c) = v;
            a(c, r) = std::conj(v);
        }
    }
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double target = std::numeric_limits<double>::epsilon() * static_cast<double>(n) *
                          std::max(frobenius(a), 1e-300);
    for (std::size_t sweep = 0; sweep < tol.jacobi_max_sweeps; ++sweep) {
        if (off_diagonal_norm(a) <= target)
            break;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double r = std::abs(apq);
                if (r == 0.0)
                    continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const Complex phase = apq / r;  // e^{i phi}
                const double theta = (aqq - app) / (2.0 * r);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // J = [[c, s e^{i phi}], [-s e^{-i phi}, c]] on (p, q); A <- J^dagger A J.
                const Complex s_phase = s * phase;
                const Complex s_phase_conj = s * std::conj(phase);
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = c * akp - s_phase_conj * akq;
                    a(k, q) = s_phase * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = c * apk - s_phase * aqk;
                    a(q, k) = s_phase_conj * apk + c * aqk;
                }
                a(p, q) = a(q, p) = Complex{};
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = c * vkp - s_phase_conj * vkq;
                    v(k, q) = s_phase * vkp + c * vkq;
                }
            }
    }
    if (off_diagonal_norm(a) > 1e3 * target)
        throw NumericalError("herm_eig: Jacobi iteration did not converge");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a(i, i).real() < a(j, j).real();
    });

    HermitianEigenDecomposition out;
    out.eigenvalues.reserve(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        out.eigenvalues.push_back(a(order[col], order[col]).real());
        for (std::size_t k = 0; k < n; ++k)
            out.eigenvectors(k, col) = v(k, order[col]);
    }
    return out;
}

ComplexMatrix expm_hermitian_generator(const ComplexMatrix& h, double t, const NumericPolicy& tol)
{
    const auto eig = herm_eig(h, tol);
    const std::size_t n = h.rows();
    const auto& vec = eig.eigenvectors;
    // V diag(e^{-i lambda t}) V^dagger
    ComplexMatrix scaled(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const Complex phase = std::polar(1.0, -eig.eigenvalues[k] * t);
        for (std::size_t r = 0; r < n; ++r)
            scaled(r, k) = vec(r, k) * phase;
    }
    ComplexMatrix out(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k < n; ++k) {
            const Complex s = scaled(r, k);
            if (s == Complex{})
                continue;
            for (std::size_t c = 0; c < n; ++c)
                out(r, c) += s * std::conj(vec(c, k));
        }
    return out;
}

ComplexMatrix annihilation_op(std::size_t n_max)
{
    if (n_max < 2)
        throw ConfigError("annihilation_op: n_max must be >= 2, got " + std::to_string(n_max));
    ComplexMatrix a(n_max, n_max);
    for (std::size_t n = 1; n < n_max; ++n)
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.cols() != b.rows() || a.rows() != b.cols())
        throw DimensionError("trace_of_product: incompatible shapes");
    Complex s{};
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
            s += a(i, k) * b(k, i);
    return s;
}

} // namespace landauer_lab::linalg
