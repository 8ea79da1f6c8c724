#pragma once

#include <cstddef>
#include <string_view>

namespace landauer_lab {

/// Every tolerance used by the library lives here so tests and the CLI tune
/// one record instead of scattered literals.
struct NumericPolicy {
    double hermiticity = 1e-10;       // |m - m^dagger|_max accepted as Hermitian
    double trace = 1e-12;             // unit-trace slack on constructed states
    double psd_floor = 1e-12;         // most negative eigenvalue still called PSD
    double tail_mass = 1e-12;         // Fock-space mass allowed above the cut
    std::size_t headroom_levels = 3;  // empty top levels required before evolution
    double top_level_leak = 1e-9;     // final top-level occupation that aborts a run
    double unitarity = 1e-8;          // |U^dagger U - I|_max
    double reconstruction = 1e-10;    // V diag V^dagger vs input, relative to 1-norm
    double discriminant_floor = 1e-14;
    double production = 1e-12;        // violation threshold, scaled by lambda^2 |I|^2
    double zero_moment = 1e-12;       // |<a>| treated as vanishing
    std::size_t jacobi_max_sweeps = 100;
    std::size_t max_joint_dimension = 1024;

    static NumericPolicy standard() { return {}; }

    /// Tighter variant used by `--tolerance-profile strict`.
    static NumericPolicy strict()
    {
        NumericPolicy p;
        p.hermiticity = 1e-12;
        p.tail_mass = 1e-14;
        p.top_level_leak = 1e-11;
        p.unitarity = 1e-10;
        p.production = 0.0;
        return p;
    }

    static NumericPolicy from_profile(std::string_view name);
};

} // namespace landauer_lab
