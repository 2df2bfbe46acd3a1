#include <cmath>

#include "doctest.h"

#include "triosc/euler.hpp"
#include "triosc/modal.hpp"
#include "triosc/sampling.hpp"

using namespace triosc;

namespace {

const SymMat3 kFixed{7.0, 6.0, 5.0, 1.0, 2.0, 3.0};

double max_abs_diff(const Mat3& a, const Mat3& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < 9; ++i) m = std::max(m, std::abs(a.m[i] - b.m[i]));
    return m;
}

}  // namespace

TEST_CASE("standard composition equals the single-axis product") {
    const EulerAngles a{0.4, 0.0, 0.0};
    CHECK(max_abs_diff(compose_standard(a), axis_rotation(1, 0.4)) == 0.0);
    const EulerAngles b{0.0, -1.1, 0.0};
    CHECK(max_abs_diff(compose_standard(b), axis_rotation(2, -1.1)) == 0.0);
    Xoshiro256ss rng(31);
    for (int it = 0; it < 100; ++it) {
        const AngleTriple t = random_angle_triple(rng);
        const auto [orth, det_dev] =
            orthogonality_residual(compose_standard({t.phi, t.theta, t.psi}));
        CHECK(orth <= 1e-14);
        CHECK(std::abs(det_dev) <= 1e-14);
    }
}

TEST_CASE("transcribed composition differs from the product in one entry only") {
    const EulerAngles a{0.3, 0.4, 0.5};
    const Mat3 printed = compose_printed(a);
    const Mat3 standard = compose_standard(a);
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
            if (r == 2 && c == 0) continue;
            CHECK(std::abs(printed(r, c) - standard(r, c)) <= 1e-15);
        }
    }
    // the slip replaces cos(phi) by cos(theta) in the (3,1) entry
    const double expected_gap = std::sin(0.4) * std::cos(0.5) *
                                std::abs(std::cos(0.3) - std::cos(0.4));
    CHECK(std::abs(printed(2, 0) - standard(2, 0)) == doctest::Approx(expected_gap));
    CHECK(std::abs(printed(2, 0) - standard(2, 0)) > 1e-3);
    // consequently the transcribed matrix is not orthogonal there
    CHECK(orthogonality_residual(printed).first > 1e-3);

    // equal first and second angles make the slip invisible
    const EulerAngles eq{0.7, 0.7, -0.2};
    CHECK(max_abs_diff(compose_printed(eq), compose_standard(eq)) <= 1e-15);
}

TEST_CASE("transcribed adjoint coefficients equal the computed adjoint action") {
    Xoshiro256ss rng(37);
    for (int it = 0; it < 200; ++it) {
        const AngleTriple t = random_angle_triple(rng);
        const EulerAngles a{t.phi, t.theta, t.psi};
        const Mat3 rbar = rbar_printed(a);
        const Mat3 adj = adjoint_action(a);
        CHECK(max_abs_diff(rbar, adj) <= 1e-14);
        // and both equal the composition with all angles negated
        const Mat3 neg = compose_standard({-a.phi, -a.theta, -a.psi});
        CHECK(max_abs_diff(rbar, neg) <= 1e-14);
        const auto [orth, det_dev] = orthogonality_residual(adj);
        CHECK(orth <= 1e-12);
        CHECK(std::abs(det_dev) <= 1e-12);
        // distinct from the forward composition and from its transpose at
        // generic angles (it is neither convention)
        if (std::abs(t.phi) > 0.1 && std::abs(t.theta) > 0.1 && std::abs(t.psi) > 0.1 &&
            std::abs(t.phi - t.psi) > 0.1) {
            const Mat3 fwd = compose_standard(a);
            CHECK(max_abs_diff(rbar, fwd) > 1e-6);
            CHECK(max_abs_diff(rbar, fwd.transpose()) > 1e-6);
        }
    }
}

TEST_CASE("generator algebra closes with unit structure constants") {
    const GeneratorAlgebraReport r = verify_generator_algebra();
    CHECK(r.max_commutator_residual <= 1e-15);
    CHECK(r.max_hermiticity_residual <= 1e-15);
}

TEST_CASE("angle extraction round-trips the composition") {
    Xoshiro256ss rng(41);
    for (int it = 0; it < 200; ++it) {
        const AngleTriple t = random_angle_triple(rng);
        const Mat3 q = compose_standard({t.phi, t.theta, t.psi});
        const AngleExtraction ex = extract_angles(q);
        CHECK(!ex.det_flipped);
        CHECK(ex.roundtrip_residual <= 1e-12);
        CHECK(max_abs_diff(compose_standard(ex.angles), q) <= 1e-12);
    }
}

TEST_CASE("angle extraction flags gimbal lock and improper input") {
    const Mat3 locked = compose_standard({0.3, std::asin(1.0), 0.7});
    const AngleExtraction ex = extract_angles(locked);
    CHECK(ex.gimbal_lock);
    CHECK(ex.roundtrip_residual <= 1e-9);

    Mat3 improper = compose_standard({0.2, 0.4, 0.6});
    for (std::size_t r = 0; r < 3; ++r) improper(r, 2) = -improper(r, 2);
    const AngleExtraction flipped = extract_angles(improper);
    CHECK(flipped.det_flipped);
    CHECK(flipped.roundtrip_residual <= 1e-12);

    Mat3 junk = Mat3::identity();
    junk(0, 1) = 0.5;
    CHECK_THROWS_AS((void)extract_angles(junk), NumericalError);
    try {
        (void)extract_angles(junk);
    } catch (const NumericalError& e) {
        CHECK(e.kind() == ErrorKind::NotOrthogonal);
    }
}

TEST_CASE("off-diagonal fit diagonalizes the reference matrix") {
    const FitResult r = euler_fit(kFixed);
    CHECK(r.off_norm <= 1e-8 * kFixed.frobenius());
    CHECK(r.seeded_off_norm <= 1e-8 * kFixed.frobenius());
    CHECK(r.starts_used >= 1);
    // the recovered diagonal is the eigenvalue multiset
    const JacobiResult j = jacobi_eigen(kFixed);
    CHECK(multiset_distance(r.diagonal, j.eigenvalues) <= 1e-7);
    // objective and result norm agree
    CHECK(offdiagonal_objective(kFixed, r.angles) ==
          doctest::Approx(r.off_norm * r.off_norm).epsilon(1e-9));
}

TEST_CASE("off-diagonal fit handles a batch of random symmetric matrices") {
    for (std::uint64_t i = 0; i < 25; ++i) {
        const SymMat3 g = random_symmat3(905, i, -10.0, 10.0);
        FitConfig cfg;
        cfg.seed = 905 ^ i;
        const FitResult r = euler_fit(g, cfg);
        CHECK(r.off_norm <= 1e-8 * std::max(1e-300, g.frobenius()));
    }
}
