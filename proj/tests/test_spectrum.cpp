#include <cmath>

#include "doctest.h"

#include "triosc/modal.hpp"
#include "triosc/sampling.hpp"
#include "triosc/spectrum.hpp"

using namespace triosc;

namespace {

const SymMat3 kFixed{7.0, 6.0, 5.0, 1.0, 2.0, 3.0};

double trace_rel_dev(const SymMat3& g, const std::array<double, 3>& lam) {
    const double sum = lam[0] + lam[1] + lam[2];
    const double mag = std::abs(lam[0]) + std::abs(lam[1]) + std::abs(lam[2]);
    return std::abs(sum - g.trace()) / std::max({1.0, std::abs(g.trace()), mag});
}

}  // namespace

TEST_CASE("robust closed form solves the reference matrix") {
    const Spectrum s = eigenvalues_robust(kFixed);
    const double s3 = std::sqrt(3.0);
    CHECK(s.omega_sq[0] == doctest::Approx(4.0 - s3).epsilon(1e-12));
    CHECK(s.omega_sq[1] == doctest::Approx(4.0 + s3).epsilon(1e-12));
    CHECK(s.omega_sq[2] == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(!s.degenerate_isotropic);
    CHECK(!s.clamped);
    // spread measure for this matrix: (1+4+1)/2 + 3*(1+4+9) = 45
    CHECK(s.big_omega == doctest::Approx(45.0).epsilon(1e-14));
}

TEST_CASE("robust closed form matches the Jacobi oracle on wide random input") {
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const SymMat3 g = random_symmat3(901, i, -1000.0, 1000.0);
        const Spectrum s = eigenvalues_robust(g);
        const JacobiResult j = jacobi_eigen(g);
        const double scale = std::max({1.0, std::abs(j.eigenvalues[0]),
                                       std::abs(j.eigenvalues[1]), std::abs(j.eigenvalues[2])});
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(std::abs(s.omega_sq[k] - j.eigenvalues[k]) <= 1e-10 * scale);
        }
    }
}

TEST_CASE("both closed forms satisfy the trace identity on random input") {
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const SymMat3 g = random_symmat3(902, i, -1000.0, 1000.0);
        CHECK(trace_rel_dev(g, eigenvalues_robust(g).omega_sq) <= 1e-10);
        CHECK(trace_rel_dev(g, eigenvalues_printed(g).omega_sq) <= 1e-10);
        CHECK(trace_rel_dev(g, modal_eigenvalues(g)) <= 1e-10);
    }
}

TEST_CASE("printed closed form deviates from the oracle at generic input") {
    // The transcribed amplitude multiplies the cosine by the full spread
    // measure rather than its square root, so the spread of the printed
    // triple is far too large wherever the matrix is not isotropic.
    const Spectrum p = eigenvalues_printed(kFixed);
    const JacobiResult j = jacobi_eigen(kFixed);
    double dev = 0.0;
    for (std::size_t k = 0; k < 3; ++k)
        dev = std::max(dev, std::abs(p.omega_sq[k] - j.eigenvalues[k]));
    CHECK(dev > 1.0);
    // but the triple still sums to the trace
    CHECK(trace_rel_dev(kFixed, p.omega_sq) <= 1e-14);
}

TEST_CASE("printed discriminant goes non-real for negative diagonals") {
    SymMat3 g = SymMat3::diag(-1.0, 2.0, 3.0);
    g.o12 = 0.4;
    const Spectrum p = eigenvalues_printed(g);
    CHECK(p.delta_nan);
    CHECK(p.phi_angle == doctest::Approx(0.0));
    // trace identity survives the fallback branch angle
    CHECK(trace_rel_dev(g, p.omega_sq) <= 1e-14);

    SymMat3 pos{1.0, 2.0, 3.0, 0.4, 0.0, 0.0};
    CHECK(!eigenvalues_printed(pos).delta_nan);
}

TEST_CASE("isotropic input takes the degenerate branch") {
    const Spectrum s = eigenvalues_robust(SymMat3::diag(2.5, 2.5, 2.5));
    CHECK(s.degenerate_isotropic);
    for (std::size_t k = 0; k < 3; ++k) CHECK(s.omega_sq[k] == doctest::Approx(2.5));
}

TEST_CASE("comparison record carries per-index deviations for all three routes") {
    const SpectrumComparison c = compare_modes(kFixed);
    const double s3 = std::sqrt(3.0);
    CHECK(c.jacobi[0] == doctest::Approx(4.0 - s3).epsilon(1e-12));
    CHECK(c.jacobi[2] == doctest::Approx(10.0).epsilon(1e-12));
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(c.robust_vs_jacobi[k] <= 1e-10 * 10.0);
        CHECK(c.printed_vs_jacobi[k] ==
              doctest::Approx(std::abs(c.printed.omega_sq[k] - c.jacobi[k])).epsilon(1e-12));
    }
    // printed and robust use different discriminant routes on purpose
    CHECK(c.delta_printed != doctest::Approx(c.delta_robust).epsilon(1e-6));
}
