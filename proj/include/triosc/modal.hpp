#pragma once

// The alternative modal construction: the symmetric vector (1,1,1)/sqrt(3),
// the two coupling-difference vectors with normalizers A+-, the associated
// eigenvalue triple, and the row-wise transformation built from them. The
// construction is exact only when the matrix has equal row sums; the module
// measures that condition instead of assuming it.

#include <array>

#include "triosc/linalg3.hpp"

namespace triosc {

// z = sqrt(K12^2+K13^2+K23^2 - (K12 K13 + K12 K23 + K13 K23)), evaluated as
// half the sum of squared pairwise coupling differences so the radicand is
// nonnegative by construction.
double coupling_discriminant(const SymMat3& g);

// {lambda, lambda_plus, lambda_minus} = {(tr+2S)/3, (tr-S)/3 + z, (tr-S)/3 - z}
// with S = K12+K13+K23. Defined for every symmetric input; the triple always
// sums to the trace.
std::array<double, 3> modal_eigenvalues(const SymMat3& g);

struct ModalBasis {
    Vec3 v;        // (1,1,1)/sqrt(3)
    Vec3 v_plus;   // unit-normalized
    Vec3 v_minus;  // unit-normalized
    double lambda0 = 0.0, lambda_plus = 0.0, lambda_minus = 0.0;
    double z = 0.0;
    double a_plus = 0.0, a_minus = 0.0;  // normalizers as transcribed (bracket 2z -+ (K13+K23-2K12))
    // Norms of the literally scaled vectors {v, A+ w+, A- w-}; index 0 is 1.
    std::array<double, 3> scaled_norms{};
    // |scaled norm - 1| per vector {v, v+, v-}; index 0 is identically 0.
    std::array<double, 3> norm_residuals{};
    // Same residuals with the bracket sign swapped; the transcribed sign
    // fails to normalize on hand-checked inputs, the swapped one succeeds.
    std::array<double, 3> norm_residuals_flipped{};
    bool bracket_sign_flipped = false;  // swapped bracket gave the smaller residual
    // ||g w - lambda w|| per unit vector {v, v+, v-}.
    std::array<double, 3> eig_residuals{};
    double rowsum_spread = 0.0;  // max - min of the three row sums of g
};

// Builds the basis and every diagnostic above. Throws DegenerateCoupling
// when z <= 1e-12 * (1 + ||g||_F) (the normalizers divide by z) or when one
// of the raw difference vectors vanishes even though z does not.
ModalBasis build_modal_basis(const SymMat3& g);

struct ModalTransform {
    Mat3 u;  // rows: unit-normalized v, v+, v-
    double orthogonality_dev = 0.0;  // ||U U^T - I||_F
    std::array<double, 3> diag{};    // diagonal of U g U^T
    double offdiag_norm = 0.0;       // off-diagonal Frobenius norm of U g U^T
    // Norms of the literal rows (1/sqrt(3) row and the transcribed-A+- scaled
    // rows), recorded before the unit re-normalization.
    std::array<double, 3> row_norms{};
    double rowsum_spread = 0.0;
};

// Row-wise transformation built from build_modal_basis. U g U^T is diagonal
// exactly when the construction's validity condition (equal row sums) holds.
ModalTransform modal_transform(const SymMat3& g);

// Reference diagonalizer: U = transpose of the Jacobi eigenvector matrix,
// so U g U^T is diagonal for every symmetric input.
ModalTransform robust_orthonormal_diagonalizer(const SymMat3& g);

// Max absolute difference after sorting both triples ascending; used to
// compare eigenvalue multisets from different routes.
double multiset_distance(std::array<double, 3> a, std::array<double, 3> b);

}  // namespace triosc
