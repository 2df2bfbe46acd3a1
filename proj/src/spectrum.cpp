#include "triosc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace triosc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct ClampedArg {
    double value = 0.0;
    bool clamped = false;
    double excess = 0.0;
    bool was_nan = false;
};

// arccos argument policy: roundoff pushes exact-degenerate inputs marginally
// outside [-1,1], so we clamp and flag instead of erroring. A NaN argument
// (possible only on the literal transcription route) pins the branch angle
// to 0 and raises both flags.
ClampedArg clamp_unit(double x) {
    ClampedArg out;
    if (std::isnan(x)) {
        out.value = 1.0;
        out.clamped = true;
        out.was_nan = true;
        return out;
    }
    if (x > 1.0) {
        out.value = 1.0;
        out.clamped = true;
        out.excess = x - 1.0;
    } else if (x < -1.0) {
        out.value = -1.0;
        out.clamped = true;
        out.excess = -x - 1.0;
    } else {
        out.value = x;
    }
    return out;
}

double spread_measure(const SymMat3& g) {
    const double w1 = g.d1, w2 = g.d2, w3 = g.d3;
    const double diff = (w1 - w2) * (w1 - w2) + (w1 - w3) * (w1 - w3) + (w2 - w3) * (w2 - w3);
    return 0.5 * diff + 3.0 * (g.o23 * g.o23 + g.o13 * g.o13 + g.o12 * g.o12);
}

bool isotropic(const SymMat3& g, double big_omega) {
    const double f = g.frobenius();
    return big_omega < 1e-13 * (1.0 + f * f);
}

// The three cosine shifts sum to zero for any branch angle, which is what
// makes the trace identity hold even for a nonsense discriminant.
std::array<double, 3> cosine_eigenvalues(double trace, double amplitude, double phi) {
    std::array<double, 3> vals{
        (trace + 2.0 * amplitude * std::cos(phi / 3.0)) / 3.0,
        (trace + 2.0 * amplitude * std::cos((phi + kTwoPi) / 3.0)) / 3.0,
        (trace + 2.0 * amplitude * std::cos((phi - kTwoPi) / 3.0)) / 3.0,
    };
    std::sort(vals.begin(), vals.end());
    return vals;
}

}  // namespace

Spectrum eigenvalues_printed(const SymMat3& g) {
    Spectrum s;
    s.mode = SpectrumMode::AsPrinted;
    s.big_omega = spread_measure(g);

    const double w1 = g.d1, w2 = g.d2, w3 = g.d3;
    const double k12 = g.o12, k13 = g.o13, k23 = g.o23;
    const double sum_w = w1 + w2 + w3;
    const double sum_k2 = k23 * k23 + k13 * k13 + k12 * k12;

    // Term-by-term transcription. The w_i^(3/2) group is kept exactly as
    // derived even though it is dimensionally inconsistent with every other
    // term; adjudicating that inconsistency is this route's entire job.
    s.delta = 18.0 * (w1 * w2 * w3 + 3.0 * k12 * k13 * k23) +
              2.0 * (std::pow(w1, 1.5) + std::pow(w3, 1.5) + std::pow(w2, 1.5)) +
              9.0 * sum_w * sum_k2 -
              3.0 * (w1 + w2) * (w1 + w3) * (w2 + w3) -
              27.0 * (w1 * k23 * k23 + w2 * k13 * k13 + w3 * k12 * k12);

    if (isotropic(g, s.big_omega)) {
        s.degenerate_isotropic = true;
        const double third = g.trace() / 3.0;
        s.omega_sq = {third, third, third};
        return s;
    }

    const ClampedArg arg = clamp_unit(s.delta / (2.0 * std::sqrt(s.big_omega * s.big_omega * s.big_omega)));
    s.clamped = arg.clamped;
    s.clamp_excess = arg.excess;
    s.delta_nan = arg.was_nan;
    s.phi_angle = std::acos(arg.value);
    // Cosine amplitude as transcribed: the spread measure itself, un-rooted.
    s.omega_sq = cosine_eigenvalues(g.trace(), s.big_omega, s.phi_angle);
    return s;
}

Spectrum eigenvalues_robust(const SymMat3& g) {
    Spectrum s;
    s.mode = SpectrumMode::Robust;
    s.big_omega = spread_measure(g);

    const double q = g.trace() / 3.0;
    SymMat3 shifted = g;
    shifted.d1 -= q;
    shifted.d2 -= q;
    shifted.d3 -= q;
    s.delta = 27.0 * det(shifted.to_mat3());

    if (isotropic(g, s.big_omega)) {
        s.degenerate_isotropic = true;
        s.omega_sq = {q, q, q};
        return s;
    }

    const ClampedArg arg = clamp_unit(s.delta / (2.0 * std::sqrt(s.big_omega * s.big_omega * s.big_omega)));
    s.clamped = arg.clamped;
    s.clamp_excess = arg.excess;
    s.phi_angle = std::acos(arg.value);
    // Amplitude sqrt(spread): with it, trace + 2*sqrt(spread)*cos reproduces
    // the standard trigonometric root formula for the characteristic cubic.
    s.omega_sq = cosine_eigenvalues(g.trace(), std::sqrt(s.big_omega), s.phi_angle);
    return s;
}

SpectrumComparison compare_modes(const SymMat3& g) {
    SpectrumComparison cmp;
    cmp.printed = eigenvalues_printed(g);
    cmp.robust = eigenvalues_robust(g);
    cmp.jacobi = jacobi_eigen(g).eigenvalues;
    cmp.delta_printed = cmp.printed.delta;
    cmp.delta_robust = cmp.robust.delta;
    for (std::size_t i = 0; i < 3; ++i) {
        cmp.printed_vs_robust[i] = std::abs(cmp.printed.omega_sq[i] - cmp.robust.omega_sq[i]);
        cmp.printed_vs_jacobi[i] = std::abs(cmp.printed.omega_sq[i] - cmp.jacobi[i]);
        cmp.robust_vs_jacobi[i] = std::abs(cmp.robust.omega_sq[i] - cmp.jacobi[i]);
    }
    return cmp;
}

}  // namespace triosc
