#pragma once

// The nine hand-expanded conjugation coefficients M_ij(phi,theta,psi) kept
// verbatim, plus the entry-wise audit against the true products R^T G R and
// R G R^T. The transcription is intentionally never corrected here; the
// audit report is what identifies which entries carry slips.

#include <array>

#include "triosc/euler.hpp"
#include "triosc/linalg3.hpp"

namespace triosc {

// All nine coefficient formulas evaluated exactly as transcribed, with the
// diagonal of g standing in for the squared frequencies and the off-diagonal
// entries for the couplings. At zero angles this reduces to g itself.
Mat3 mij_printed(const SymMat3& g, const EulerAngles& a);

struct MijReport {
    Mat3 printed;
    Mat3 product_rt_g_r;  // R^T g R with R = compose_standard(a)
    Mat3 product_r_g_rt;  // R g R^T, the opposite ordering convention
    Mat3 per_entry_dev;   // min |printed - product| over the two orderings
    double symmetry_dev = 0.0;  // max |printed[i][j] - printed[j][i]|
    double tol = 0.0;           // 1e-12 * (1 + ||g||_F)
    std::array<std::array<bool, 3>, 3> confirmed{};  // per_entry_dev <= tol
};

// Entry-wise comparison of the transcribed coefficients against both product
// orderings. An entry is confirmed when it matches at least one ordering
// within 1e-12 * (1 + ||g||_F).
MijReport mij_compare(const SymMat3& g, const EulerAngles& a);

struct MijZeroProbe {
    EulerAngles angles;            // minimizer found for the transcribed system
    double achieved_min = 0.0;     // min over angles of sum_{i != j} printed_ij^2
    double printed_off_norm = 0.0; // sqrt(achieved_min)
    double fit_off_norm = 0.0;     // euler_fit residual on the true product, for contrast
    int iterations = 0;
    int starts_used = 0;
};

// Minimizes the sum of squared off-diagonal transcribed coefficients over
// the three angles (same simplex machinery as euler_fit; start 0 is the zero
// triple, the rest are seeded uniforms). Whether this minimum reaches zero
// for coupled g is exactly the claim the probe adjudicates.
MijZeroProbe mij_zero_constraint_probe(const SymMat3& g, const FitConfig& config = {});

}  // namespace triosc
