#include "triosc/modal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace triosc {

double coupling_discriminant(const SymMat3& g) {
    const double d12 = g.o12 - g.o13;
    const double d13 = g.o12 - g.o23;
    const double d23 = g.o13 - g.o23;
    return std::sqrt(0.5 * (d12 * d12 + d13 * d13 + d23 * d23));
}

std::array<double, 3> modal_eigenvalues(const SymMat3& g) {
    const double tr = g.trace();
    const double s = g.o12 + g.o13 + g.o23;
    const double z = coupling_discriminant(g);
    return {(tr + 2.0 * s) / 3.0, (tr - s) / 3.0 + z, (tr - s) / 3.0 - z};
}

namespace {

Vec3 unit(const Vec3& v) {
    const double n = norm(v);
    return (1.0 / n) * v;
}

double rowsum_spread_of(const SymMat3& g) {
    const double r1 = g.d1 + g.o12 + g.o13;
    const double r2 = g.o12 + g.d2 + g.o23;
    const double r3 = g.o13 + g.o23 + g.d3;
    return std::max({r1, r2, r3}) - std::min({r1, r2, r3});
}

}  // namespace

ModalBasis build_modal_basis(const SymMat3& g) {
    const double z = coupling_discriminant(g);
    const double threshold = 1e-12 * (1.0 + g.frobenius());
    if (z <= threshold) {
        throw NumericalError(ErrorKind::DegenerateCoupling,
                             "build_modal_basis: coupling discriminant z vanishes; the "
                             "normalizers 1/sqrt(2z[...]) are undefined");
    }

    ModalBasis basis;
    basis.z = z;
    const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    basis.v = Vec3{{inv_sqrt3, inv_sqrt3, inv_sqrt3}};

    const Vec3 raw_plus{{g.o12 - g.o23 - z, g.o13 - g.o12 + z, g.o23 - g.o13}};
    const Vec3 raw_minus{{g.o12 - g.o23 + z, g.o13 - g.o12 - z, g.o23 - g.o13}};
    const double norm_plus = norm(raw_plus);
    const double norm_minus = norm(raw_minus);
    if (norm_plus <= threshold || norm_minus <= threshold) {
        // z > 0 but one difference vector still collapses (its bracket
        // 2z -+ (K13+K23-2K12) hits zero); the pair cannot span the
        // complement of v.
        throw NumericalError(ErrorKind::DegenerateCoupling,
                             "build_modal_basis: a difference eigenvector vanishes although "
                             "z > 0; basis is rank-deficient");
    }

    // Transcribed normalizers: A_+- = 1/sqrt(2z[2z -+ (K13+K23-2K12)]).
    const double bracket = g.o13 + g.o23 - 2.0 * g.o12;
    auto normalizer = [&](double signed_bracket) {
        const double radicand = 2.0 * z * (2.0 * z + signed_bracket);
        return radicand > 0.0 ? 1.0 / std::sqrt(radicand) : std::numeric_limits<double>::quiet_NaN();
    };
    basis.a_plus = normalizer(-bracket);
    basis.a_minus = normalizer(+bracket);
    const double a_plus_flipped = normalizer(+bracket);
    const double a_minus_flipped = normalizer(-bracket);

    auto scaled_norm = [](double a, double raw_norm) {
        return std::isfinite(a) ? std::abs(a) * raw_norm
                                : std::numeric_limits<double>::quiet_NaN();
    };
    auto residual_of = [](double s) {
        return std::isfinite(s) ? std::abs(s - 1.0) : std::numeric_limits<double>::infinity();
    };
    basis.scaled_norms = {1.0, scaled_norm(basis.a_plus, norm_plus),
                          scaled_norm(basis.a_minus, norm_minus)};
    basis.norm_residuals = {0.0, residual_of(basis.scaled_norms[1]),
                            residual_of(basis.scaled_norms[2])};
    basis.norm_residuals_flipped = {0.0, residual_of(scaled_norm(a_plus_flipped, norm_plus)),
                                    residual_of(scaled_norm(a_minus_flipped, norm_minus))};
    const double worst = std::max(basis.norm_residuals[1], basis.norm_residuals[2]);
    const double worst_flipped =
        std::max(basis.norm_residuals_flipped[1], basis.norm_residuals_flipped[2]);
    basis.bracket_sign_flipped = worst_flipped < worst;

    // v+ and v- are exactly orthogonal in algebra (raw dot = a^2+b^2+c^2-2z^2
    // = 0), but evaluating both from the raw differences squanders that near
    // |K13+K23-2K12| = 2z, where the smaller vector is pure cancellation.
    // Normalize the larger one and take the other as a cross product with v:
    // same direction in exact arithmetic, machine-precision orthogonality
    // everywhere.
    if (norm_plus >= norm_minus) {
        basis.v_plus = unit(raw_plus);
        Vec3 third = cross(basis.v, basis.v_plus);
        if (dot(third, raw_minus) < 0.0) third = -1.0 * third;
        basis.v_minus = unit(third);
    } else {
        basis.v_minus = unit(raw_minus);
        Vec3 third = cross(basis.v, basis.v_minus);
        if (dot(third, raw_plus) < 0.0) third = -1.0 * third;
        basis.v_plus = unit(third);
    }

    const auto lambdas = modal_eigenvalues(g);
    basis.lambda0 = lambdas[0];
    basis.lambda_plus = lambdas[1];
    basis.lambda_minus = lambdas[2];

    const std::array<const Vec3*, 3> vecs{&basis.v, &basis.v_plus, &basis.v_minus};
    for (int i = 0; i < 3; ++i) {
        const Vec3 resid = g.apply(*vecs[i]) - lambdas[i] * (*vecs[i]);
        basis.eig_residuals[i] = norm(resid);
    }
    basis.rowsum_spread = rowsum_spread_of(g);
    return basis;
}

ModalTransform modal_transform(const SymMat3& g) {
    const ModalBasis basis = build_modal_basis(g);

    ModalTransform t;
    const std::array<const Vec3*, 3> rows{&basis.v, &basis.v_plus, &basis.v_minus};
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) t.u(r, c) = (*rows[r])[c];

    // Literal row scales: row 1 of the display is already unit; rows 2 and 3
    // carry the transcribed normalizers, which may not normalize.
    t.row_norms = basis.scaled_norms;

    const Mat3 product = t.u * g.to_mat3() * t.u.transpose();
    t.diag = {product(0, 0), product(1, 1), product(2, 2)};
    double off = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            if (i != j) off += product(i, j) * product(i, j);
    t.offdiag_norm = std::sqrt(off);

    const auto [ortho, det_dev] = orthogonality_residual(t.u);
    (void)det_dev;
    t.orthogonality_dev = ortho;
    t.rowsum_spread = basis.rowsum_spread;
    return t;
}

ModalTransform robust_orthonormal_diagonalizer(const SymMat3& g) {
    const JacobiResult jr = jacobi_eigen(g);

    ModalTransform t;
    t.u = jr.eigenvectors.transpose();
    const Mat3 product = t.u * g.to_mat3() * t.u.transpose();
    t.diag = {product(0, 0), product(1, 1), product(2, 2)};
    double off = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            if (i != j) off += product(i, j) * product(i, j);
    t.offdiag_norm = std::sqrt(off);

    const auto [ortho, det_dev] = orthogonality_residual(t.u);
    (void)det_dev;
    t.orthogonality_dev = ortho;
    for (std::size_t r = 0; r < 3; ++r) t.row_norms[r] = norm(t.u.row(r));
    t.rowsum_spread = rowsum_spread_of(g);
    return t;
}

double multiset_distance(std::array<double, 3> a, std::array<double, 3> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace triosc
