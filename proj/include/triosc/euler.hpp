#pragma once

// Euler-angle machinery for the X1-X2-X3 composition: the computed product,
// the literal transcription of its hand-expanded entries (kept separately
// because the two disagree and that disagreement is a finding), the rotation
// generator algebra, the adjoint action of the corresponding operator on
// coordinates, angle extraction, and the off-diagonal-minimizing fit that
// adjudicates whether such rotations can diagonalize a coupled system.

#include <array>
#include <cstdint>

#include "triosc/linalg3.hpp"

namespace triosc {

struct EulerAngles {
    double phi = 0.0;    // about axis 1
    double theta = 0.0;  // about axis 2
    double psi = 0.0;    // about axis 3
};

// R = R_X1(phi) * R_X2(theta) * R_X3(psi), by actual matrix multiplication.
Mat3 compose_standard(const EulerAngles& a);

// The hand-expanded matrix entries evaluated exactly as transcribed. Row 3,
// column 1 carries a cos(theta)-for-cos(phi) slip, so this is generally not
// orthogonal; compare against compose_standard.
Mat3 compose_printed(const EulerAngles& a);

// The transcribed coefficient matrix of the adjoint coordinate relations.
// Numerically this equals adjoint_action exactly (it is the composition with
// all three angles negated), and differs from both compose_standard and its
// transpose at generic angles.
Mat3 rbar_printed(const EulerAngles& a);

struct GeneratorAlgebraReport {
    double max_commutator_residual = 0.0;   // max_F || [J_i,J_j] - i eps_ijk J_k ||
    double max_hermiticity_residual = 0.0;  // max_F || J_k - J_k^dagger ||
};

// Defining-representation generators (J_k)_mn = -i eps_kmn, hbar = 1.
GeneratorAlgebraReport verify_generator_algebra();

// Convention used by adjoint_action, recorded in report metadata.
inline constexpr const char* kAdjointConvention =
    "Lambda = exp(i*phi*J1) exp(i*theta*J2) exp(i*psi*J3) with (J_k)_mn = -i*eps_kmn; "
    "B is defined by Lambda^-1 X_i Lambda = sum_k B_ik X_k, built from exact "
    "single-axis exponentials (Rodrigues closed form, no series truncation); "
    "equivalently B = R_X1(-phi) R_X2(-theta) R_X3(-psi)";

// Coefficient matrix B of the conjugated coordinates; always orthogonal
// with det +1.
Mat3 adjoint_action(const EulerAngles& a);

struct AngleExtraction {
    EulerAngles angles;
    bool gimbal_lock = false;        // |cos(theta)| below 1e-9; psi pinned to 0
    bool det_flipped = false;        // input was an improper rotation; last column negated
    double roundtrip_residual = 0.0; // ||compose_standard(angles) - q||_F after the det fix
};

// Inverse of compose_standard with theta = asin(q[0][2]). Throws
// NotOrthogonal when the input fails the 1e-8 orthogonality gate.
AngleExtraction extract_angles(const Mat3& q);

struct FitConfig {
    int starts = 8;            // 1 oracle-seeded + (starts-1) random
    int max_iters = 400;       // simplex budget per start
    double diameter_tol = 1e-12;
    std::uint64_t seed = 42;
};

struct FitResult {
    EulerAngles angles;
    double off_norm = 0.0;  // sqrt(sum_{i<j} (R^T G R)_ij^2) at the best angles
    std::array<double, 3> diagonal{};
    int iterations = 0;     // simplex iterations summed over the starts used
    int starts_used = 0;
    double seeded_off_norm = 0.0;  // result of the oracle-seeded start alone
};

// Minimizes the off-diagonal residual of R^T g R over the three angles.
// Start 0 is seeded from extract_angles of the Jacobi eigenvector matrix;
// remaining starts are uniform in [-pi,pi]^3 from the given seed. Returns
// the best result, ties broken by start index.
FitResult euler_fit(const SymMat3& g, const FitConfig& config = {});

// Objective shared with the fit: sum of squared upper off-diagonal entries
// of R^T g R with R = compose_standard(a).
double offdiagonal_objective(const SymMat3& g, const EulerAngles& a);

}  // namespace triosc
