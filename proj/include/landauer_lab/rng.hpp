#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace landauer_lab {

/// Portable Gaussian stream.
///
/// Frozen algorithm: std::mt19937_64 (bit-exact by the standard) seeded with
/// the 64-bit seed; each uniform is (word >> 11) * 2^-53; pairs of uniforms
/// (u1, u2) feed Box-Muller as r = sqrt(-2 ln(1 - u1)), (r cos 2 pi u2, r sin 2 pi u2).
/// std::normal_distribution is avoided because its algorithm is
/// implementation-defined.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// One Box-Muller pair packed as (real, imag); both parts are unit normal.
    std::complex<double> complex_normal()
    {
        constexpr double two_pi = 6.283185307179586476925286766559;
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        return {r * std::cos(two_pi * u2), r * std::sin(two_pi * u2)};
    }

private:
    std::mt19937_64 engine_;
};

} // namespace landauer_lab
