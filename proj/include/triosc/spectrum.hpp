#pragma once

// Closed-form trigonometric eigenvalues of the symmetric 3x3 system matrix.
// Two routes are kept side by side on purpose:
//   * AsPrinted  - a literal, term-by-term transcription of the hand-derived
//     closed form under audit, typos and all. Its output is a finding, not a
//     result to trust.
//   * Robust     - the standard trigonometric solution of the characteristic
//     cubic (shifted determinant route), which must agree with the Jacobi
//     oracle and is the shipping default.

#include <array>

#include "triosc/linalg3.hpp"

namespace triosc {

enum class SpectrumMode { AsPrinted, Robust };

struct Spectrum {
    std::array<double, 3> omega_sq{};  // eigenvalue candidates, ascending
    double big_omega = 0.0;  // spread measure: half the squared diagonal gaps + 3*sum K^2
    double delta = 0.0;      // cubic discriminant combination (route-dependent)
    double phi_angle = 0.0;  // arccos branch angle
    SpectrumMode mode = SpectrumMode::Robust;
    bool degenerate_isotropic = false;  // spread below threshold; all eigenvalues = trace/3
    bool clamped = false;               // arccos argument fell outside [-1,1]
    double clamp_excess = 0.0;          // |argument| - 1 when clamped
    bool delta_nan = false;             // transcription produced a non-real discriminant
};

// Literal transcription: the discriminant includes half-power diagonal terms
// (w_i^(3/2)), which are not real for negative diagonals; such samples are
// flagged via delta_nan and the branch angle falls back to 0.
Spectrum eigenvalues_printed(const SymMat3& g);

// Shifted-determinant discriminant and square-rooted spread; matches the
// Jacobi oracle to 1e-10 relative.
Spectrum eigenvalues_robust(const SymMat3& g);

struct SpectrumComparison {
    Spectrum printed;
    Spectrum robust;
    std::array<double, 3> jacobi{};
    std::array<double, 3> printed_vs_robust{};  // |sorted difference| per index
    std::array<double, 3> printed_vs_jacobi{};
    std::array<double, 3> robust_vs_jacobi{};
    double delta_printed = 0.0;
    double delta_robust = 0.0;
};

// Three-way adjudication record; emits numbers, never a pass/fail verdict.
SpectrumComparison compare_modes(const SymMat3& g);

}  // namespace triosc
