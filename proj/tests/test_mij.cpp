#include <cmath>

#include "doctest.h"

#include "triosc/batch.hpp"
#include "triosc/mij.hpp"
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

TEST_CASE("transcribed coefficients reduce to the input at zero angles") {
    Xoshiro256ss rng(53);
    for (int it = 0; it < 20; ++it) {
        const SymMat3 g = random_symmat3(rng, -5.0, 5.0);
        CHECK(max_abs_diff(mij_printed(g, EulerAngles{}), g.to_mat3()) <= 1e-15);
    }
}

TEST_CASE("the (3,3) coefficient is exact for every angle triple") {
    Xoshiro256ss rng(59);
    for (int it = 0; it < 200; ++it) {
        const SymMat3 g = random_symmat3(rng, -4.0, 4.0);
        const AngleTriple t = random_angle_triple(rng);
        const EulerAngles a{t.phi, t.theta, t.psi};
        const Mat3 printed = mij_printed(g, a);
        const Mat3 product = conjugate(g, compose_standard(a)).to_mat3();
        CHECK(std::abs(printed(2, 2) - product(2, 2)) <= 1e-12 * (1.0 + g.frobenius()));
        // it never involves the third angle
        const Mat3 other = mij_printed(g, EulerAngles{a.phi, a.theta, a.psi + 1.3});
        CHECK(printed(2, 2) == other(2, 2));
    }
    // quarter-turn second angle isolates the first diagonal entry
    const Mat3 quarter =
        mij_printed(kFixed, EulerAngles{0.9, std::asin(1.0), -0.4});
    CHECK(quarter(2, 2) == doctest::Approx(kFixed.d1).epsilon(1e-12));
}

TEST_CASE("entry-wise audit confirms (3,3) and flags the slipped entries") {
    const MijReport r = mij_compare(kFixed, EulerAngles{0.7, 0.9, 1.1});
    CHECK(r.tol == doctest::Approx(1e-12 * (1.0 + kFixed.frobenius())));
    CHECK(r.confirmed[2][2]);
    // the (1,1) coefficient carries a sin(phi)-for-sin(psi) slip in its
    // coupling term, visible whenever the (2,3) coupling is present
    CHECK(!r.confirmed[0][0]);
    CHECK(r.per_entry_dev(0, 0) > 1e-6);
    // the transcription is symmetric in the (1,2)/(2,1) pair
    CHECK(std::abs(r.printed(0, 1) - r.printed(1, 0)) <= 1e-13);
}

TEST_CASE("the (1,1) slip vanishes when the (2,3) coupling is absent") {
    SymMat3 g{3.0, 2.0, 1.0, 0.8, -0.6, 0.0};  // o23 = 0 switches the slip off
    const MijReport r = mij_compare(g, EulerAngles{0.7, 0.9, 1.1});
    CHECK(r.confirmed[0][0]);
    SymMat3 h = g;
    h.o23 = 0.5;
    const MijReport r2 = mij_compare(h, EulerAngles{0.7, 0.9, 1.1});
    CHECK(!r2.confirmed[0][0]);
}

TEST_CASE("audit deviations scale linearly with the input") {
    Xoshiro256ss rng(61);
    for (int it = 0; it < 50; ++it) {
        const SymMat3 g = random_symmat3(rng, -3.0, 3.0);
        const AngleTriple t = random_angle_triple(rng);
        const EulerAngles a{t.phi, t.theta, t.psi};
        const MijReport r1 = mij_compare(g, a);
        const MijReport r2 = mij_compare(2.0 * g, a);
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                CHECK(r2.per_entry_dev(i, j) ==
                      doctest::Approx(2.0 * r1.per_entry_dev(i, j))
                          .epsilon(1e-9)
                          .scale(1.0 + g.frobenius()));
            }
        }
    }
}

TEST_CASE("batch audit confirms every entry except the first diagonal one") {
    const MijBatch b = run_mij_batch(42, 2000, -3.0, 3.0, 2);
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
            if (r == 0 && c == 0) {
                CHECK(!b.table[r][c].confirmed_all);
                CHECK(b.table[r][c].max_dev > 1e-3);
            } else {
                CHECK(b.table[r][c].confirmed_all);
                CHECK(b.table[r][c].max_dev <= b.max_tol);
            }
        }
    }
    // the transcription is a symmetric matrix, slip included
    CHECK(b.max_symmetry_dev <= 1e-12);
}

TEST_CASE("zero-constraint probe minimizes the transcribed off-diagonal system") {
    FitConfig cfg;
    cfg.starts = 6;
    cfg.max_iters = 300;
    const MijZeroProbe p = mij_zero_constraint_probe(kFixed, cfg);
    CHECK(std::isfinite(p.achieved_min));
    CHECK(p.printed_off_norm == doctest::Approx(std::sqrt(p.achieved_min)));
    CHECK(p.achieved_min >= 0.0);
    CHECK(p.starts_used >= 1);
    // the true product's off-diagonal always reaches zero in contrast
    CHECK(p.fit_off_norm <= 1e-8 * kFixed.frobenius());
    // the reported angles actually achieve the reported minimum
    const Mat3 at = mij_printed(kFixed, p.angles);
    const double recompute = at(0, 1) * at(0, 1) + at(0, 2) * at(0, 2) +
                             at(1, 2) * at(1, 2) + at(1, 0) * at(1, 0) +
                             at(2, 0) * at(2, 0) + at(2, 1) * at(2, 1);
    CHECK(recompute == doctest::Approx(p.achieved_min).epsilon(1e-9).scale(1.0));
}
