#include "triosc/euler.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "triosc/rng.hpp"
#include "triosc/simplex.hpp"

namespace triosc {

namespace {

int levi_civita(int i, int j, int k) {
    if (i == j || j == k || i == k) return 0;
    // Even permutations of (0,1,2).
    if ((i == 0 && j == 1) || (i == 1 && j == 2) || (i == 2 && j == 0)) return 1;
    return -1;
}

}  // namespace

Mat3 compose_standard(const EulerAngles& a) {
    return axis_rotation(1, a.phi) * axis_rotation(2, a.theta) * axis_rotation(3, a.psi);
}

Mat3 compose_printed(const EulerAngles& a) {
    const double cf = std::cos(a.phi), sf = std::sin(a.phi);
    const double ct = std::cos(a.theta), st = std::sin(a.theta);
    const double cp = std::cos(a.psi), sp = std::sin(a.psi);

    Mat3 r;
    r(0, 0) = ct * cp;
    r(0, 1) = -ct * sp;
    r(0, 2) = st;
    r(1, 0) = sf * st * cp + cf * sp;
    r(1, 1) = cf * cp - sf * sp * st;
    r(1, 2) = -sf * ct;
    r(2, 0) = -ct * st * cp + sp * sf;  // transcribed verbatim; the product has cf*st*cp here
    r(2, 1) = sf * cp + sp * cf * st;
    r(2, 2) = cf * ct;
    return r;
}

Mat3 rbar_printed(const EulerAngles& a) {
    const double cf = std::cos(a.phi), sf = std::sin(a.phi);
    const double ct = std::cos(a.theta), st = std::sin(a.theta);
    const double cp = std::cos(a.psi), sp = std::sin(a.psi);

    Mat3 r;
    r(0, 0) = ct * cp;
    r(0, 1) = ct * sp;
    r(0, 2) = -st;
    r(1, 0) = sf * st * cp - sp * cf;
    r(1, 1) = sf * st * sp + cp * cf;
    r(1, 2) = sf * ct;
    r(2, 0) = st * cf * cp + sf * sp;
    r(2, 1) = st * cf * sp - sf * cp;
    r(2, 2) = cf * ct;
    return r;
}

GeneratorAlgebraReport verify_generator_algebra() {
    using C = std::complex<double>;
    using CMat = std::array<std::array<C, 3>, 3>;
    const C imag_unit(0.0, 1.0);

    auto zero = [] { return CMat{}; };
    auto sub = [](const CMat& a, const CMat& b) {
        CMat r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r[i][j] = a[i][j] - b[i][j];
        return r;
    };
    auto mul = [&](const CMat& a, const CMat& b) {
        CMat r = zero();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
        return r;
    };
    auto fro = [](const CMat& a) {
        double s = 0.0;
        for (const auto& row : a)
            for (const C& x : row) s += std::norm(x);
        return std::sqrt(s);
    };

    std::array<CMat, 3> j{};
    for (int k = 0; k < 3; ++k)
        for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n)
                j[k][m][n] = -imag_unit * static_cast<double>(levi_civita(k, m, n));

    GeneratorAlgebraReport report;
    for (int a = 0; a < 3; ++a) {
        // Hermiticity of each generator.
        CMat dagger;
        for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n) dagger[m][n] = std::conj(j[a][n][m]);
        report.max_hermiticity_residual =
            std::max(report.max_hermiticity_residual, fro(sub(j[a], dagger)));

        for (int b = 0; b < 3; ++b) {
            CMat expected = zero();
            for (int c = 0; c < 3; ++c) {
                const double eps = levi_civita(a, b, c);
                if (eps == 0.0) continue;
                for (int m = 0; m < 3; ++m)
                    for (int n = 0; n < 3; ++n) expected[m][n] += imag_unit * eps * j[c][m][n];
            }
            const CMat commutator = sub(mul(j[a], j[b]), mul(j[b], j[a]));
            report.max_commutator_residual =
                std::max(report.max_commutator_residual, fro(sub(commutator, expected)));
        }
    }
    return report;
}

namespace {

// Index-space generator of the adjoint action: (G_a)_ik = eps_aik.
Mat3 adjoint_generator(int axis) {
    Mat3 g{};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) g(i, k) = static_cast<double>(levi_civita(axis, i, k));
    return g;
}

// Rodrigues closed form exp(angle * G) = I + sin(angle) G + (1-cos(angle)) G^2.
Mat3 adjoint_axis_exponential(int axis, double angle) {
    const Mat3 g = adjoint_generator(axis);
    const Mat3 g2 = g * g;
    const double s = std::sin(angle), c = std::cos(angle);
    Mat3 r = Mat3::identity();
    for (std::size_t i = 0; i < 9; ++i) r.m[i] += s * g.m[i] + (1.0 - c) * g2.m[i];
    return r;
}

}  // namespace

Mat3 adjoint_action(const EulerAngles& a) {
    return adjoint_axis_exponential(0, a.phi) * adjoint_axis_exponential(1, a.theta) *
           adjoint_axis_exponential(2, a.psi);
}

AngleExtraction extract_angles(const Mat3& q) {
    const auto [ortho, det_dev] = orthogonality_residual(q);
    if (!(ortho <= 1e-8)) {
        throw NumericalError(ErrorKind::NotOrthogonal,
                             "extract_angles: input fails the orthogonality gate");
    }

    AngleExtraction out;
    Mat3 r = q;
    if (det(r) < 0.0) {
        out.det_flipped = true;
        for (std::size_t i = 0; i < 3; ++i) r(i, 2) = -r(i, 2);
    }

    const double s_theta = std::clamp(r(0, 2), -1.0, 1.0);
    const double c_theta = std::sqrt(std::max(0.0, 1.0 - s_theta * s_theta));
    out.angles.theta = std::asin(s_theta);

    if (c_theta < 1e-9) {
        // Gimbal lock: only phi +/- psi is identifiable. Pin psi = 0 and read
        // phi from the second row of R_X1(phi) R_X2(+-pi/2).
        out.gimbal_lock = true;
        out.angles.psi = 0.0;
        const double sign = (s_theta > 0.0) ? 1.0 : -1.0;
        out.angles.phi = std::atan2(r(1, 0) * sign, r(1, 1));
    } else {
        out.angles.phi = std::atan2(-r(1, 2), r(2, 2));
        out.angles.psi = std::atan2(-r(0, 1), r(0, 0));
    }

    out.roundtrip_residual = frobenius(compose_standard(out.angles) - r);
    return out;
}

double offdiagonal_objective(const SymMat3& g, const EulerAngles& a) {
    const SymMat3 c = conjugate(g, compose_standard(a));
    return c.o12 * c.o12 + c.o13 * c.o13 + c.o23 * c.o23;
}

FitResult euler_fit(const SymMat3& g, const FitConfig& config) {
    const double scale = g.frobenius();
    const double fval_tol = 1e-24 * (1.0 + scale * scale);

    auto objective = [&g](const std::vector<double>& x) {
        return offdiagonal_objective(g, EulerAngles{x[0], x[1], x[2]});
    };

    NelderMeadOptions opts;
    opts.max_iters = config.max_iters;
    opts.diameter_tol = config.diameter_tol;
    opts.fval_tol = fval_tol;

    const JacobiResult oracle = jacobi_eigen(g);
    const AngleExtraction seeded = extract_angles(oracle.eigenvectors);

    FitResult best;
    best.off_norm = std::numeric_limits<double>::infinity();

    constexpr double pi = std::numbers::pi;
    for (int start = 0; start < std::max(config.starts, 1); ++start) {
        std::vector<double> x0;
        if (start == 0) {
            x0 = {seeded.angles.phi, seeded.angles.theta, seeded.angles.psi};
        } else {
            Xoshiro256ss rng = sample_rng(config.seed, static_cast<std::uint64_t>(start));
            x0 = {rng.uniform(-pi, pi), rng.uniform(-pi, pi), rng.uniform(-pi, pi)};
        }

        const NelderMeadResult run = nelder_mead(objective, x0, opts);
        best.iterations += run.iterations;
        best.starts_used = start + 1;
        if (start == 0) best.seeded_off_norm = std::sqrt(run.fval);

        if (run.fval < best.off_norm * best.off_norm ||
            (start == 0 && !std::isfinite(best.off_norm))) {
            best.angles = EulerAngles{run.x[0], run.x[1], run.x[2]};
            best.off_norm = std::sqrt(run.fval);
            const SymMat3 rotated = conjugate(g, compose_standard(best.angles));
            best.diagonal = {rotated.d1, rotated.d2, rotated.d3};
        }
        if (best.off_norm * best.off_norm <= fval_tol) break;
    }
    return best;
}

}  // namespace triosc
