#include "triosc/mij.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "triosc/rng.hpp"
#include "triosc/simplex.hpp"

namespace triosc {

Mat3 mij_printed(const SymMat3& g, const EulerAngles& a) {
    const double w1 = g.d1, w2 = g.d2, w3 = g.d3;
    const double k12 = g.o12, k13 = g.o13, k23 = g.o23;

    const double cf = std::cos(a.phi), sf = std::sin(a.phi);
    const double ct = std::cos(a.theta), st = std::sin(a.theta);
    const double cp = std::cos(a.psi), sp = std::sin(a.psi);
    const double c2f = std::cos(2.0 * a.phi);
    const double c2t = std::cos(2.0 * a.theta);
    const double c2p = std::cos(2.0 * a.psi);

    Mat3 m;

    // Each entry below is the displayed formula taken term by term. The
    // K23 coefficient of M11 carries sin(phi) where the product has
    // sin(psi); everything else is checked against the products by
    // mij_compare rather than edited here.
    m(0, 0) = ct * ct * cp * cp * w1 + (cf * sp + st * sf * cp) * (cf * sp + st * sf * cp) * w2 +
              (sp * sf - cp * cf * st) * (sp * sf - cp * cf * st) * w3 +
              2.0 * ct * cp * ((cf * sp + st * sf * cp) * k12 + (sp * sf - cp * cf * st) * k13) +
              2.0 * (cf * sf * (sp * sp - cp * cp * st * st) - st * sf * cp * c2f) * k23;

    m(0, 1) = -ct * ct * cp * sp * w1 +
              (sp * cp * (cf * cf - st * st * sf * sf) + cf * sf * st * c2p) * w2 +
              (cp * sp * (sf * sf - st * st * cf * cf) - cf * sf * st * c2p) * w3 +
              ct * (cf * c2p - 2.0 * cp * sf * sp * st) * k12 +
              ct * (sf * c2p + 2.0 * cp * cf * st * sp) * k13 +
              (2.0 * (st * st + 1.0) * cp * cf * sp * sf - st * c2f * c2p) * k23;

    m(0, 2) = st * ct * cp * w1 - sf * ct * (cf * sp + st * sf * cp) * w2 +
              cf * ct * (sp * sf - cp * cf * st) * w3 + (cf * sp * st - sf * cp * c2t) * k12 +
              (sf * sp * st + cf * cp * c2t) * k13 +
              (2.0 * st * sf * cp * cf * ct + sp * ct * c2f) * k23;

    m(1, 0) = -ct * ct * sp * cp * w1 +
              (cf * sf * st * c2p + sp * cp * (cf * cf - sf * sf * st * st)) * w2 +
              (-cf * sf * st * c2p + sp * cp * (sf * sf - cf * cf * st * st)) * w3 +
              ct * (cf * c2p - 2.0 * cp * sf * sp * st) * k12 +
              ct * (sf * c2p + 2.0 * cp * st * cf * sp) * k13 +
              (st * (sp * sp * c2f - cp * cp * c2f) + 2.0 * (1.0 + st * st) * cp * sp * cf * sf) *
                  k23;

    m(1, 1) = ct * ct * sp * sp * w1 + (cf * cp - sf * sp * st) * (cf * cp - sf * sp * st) * w2 +
              (cp * sf + st * cf * sp) * (cp * sf + st * cf * sp) * w3 -
              2.0 * ct * sp * (cf * cp - sf * sp * st) * k12 -
              2.0 * ct * sp * (cp * sf + st * cf * sp) * k13 +
              2.0 * (sf * cf * (cp * cp - sp * sp * st * st) + st * cp * sp * c2f) * k23;

    m(1, 2) = -st * ct * sp * w1 + sf * ct * (sf * sp * st - cf * cp) * w2 +
              cf * ct * (cp * sf + st * cf * sp) * w3 + (cf * cp * st + sp * sf * c2t) * k12 +
              (cp * sf * st - sp * cf * c2t) * k13 + ct * (cp * c2f - 2.0 * sf * st * cf * sp) * k23;

    m(2, 0) = ct * st * cp * w1 - ct * sf * (sf * st * cp + cf * sp) * w2 +
              ct * cf * (sp * sf - cf * st * cp) * w3 + (st * cf * sp - sf * cp * c2t) * k12 +
              (cp * cf * c2t + st * sp * sf) * k13 + ct * (2.0 * cf * sf * st * cp + sp * c2f) * k23;

    m(2, 1) = -ct * st * sp * w1 - ct * sf * (cf * cp - sf * sp * st) * w2 +
              cf * ct * (sf * cp + sp * cf * st) * w3 + (sf * sp * c2t + st * cf * cp) * k12 +
              (-cf * sp * c2t + st * sf * cp) * k13 +
              ct * (cp * c2f - 2.0 * cf * sf * sp * st) * k23;

    m(2, 2) = st * st * w1 + ct * ct * sf * sf * w2 + cf * cf * ct * ct * w3 -
              2.0 * ct * (st * sf * k12 - st * cf * k13 + ct * cf * sf * k23);

    return m;
}

MijReport mij_compare(const SymMat3& g, const EulerAngles& a) {
    MijReport rep;
    rep.printed = mij_printed(g, a);

    const Mat3 r = compose_standard(a);
    const Mat3 gm = g.to_mat3();
    rep.product_rt_g_r = r.transpose() * gm * r;
    rep.product_r_g_rt = r * gm * r.transpose();

    rep.tol = 1e-12 * (1.0 + g.frobenius());
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            const double dev_rt = std::abs(rep.printed(i, j) - rep.product_rt_g_r(i, j));
            const double dev_tr = std::abs(rep.printed(i, j) - rep.product_r_g_rt(i, j));
            rep.per_entry_dev(i, j) = std::min(dev_rt, dev_tr);
            rep.confirmed[i][j] = rep.per_entry_dev(i, j) <= rep.tol;
            rep.symmetry_dev =
                std::max(rep.symmetry_dev, std::abs(rep.printed(i, j) - rep.printed(j, i)));
        }
    }
    return rep;
}

MijZeroProbe mij_zero_constraint_probe(const SymMat3& g, const FitConfig& config) {
    const double scale = g.frobenius();
    const double fval_tol = 1e-24 * (1.0 + scale * scale);

    auto objective = [&g](const std::vector<double>& x) {
        const Mat3 m = mij_printed(g, EulerAngles{x[0], x[1], x[2]});
        double s = 0.0;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                if (i != j) s += m(i, j) * m(i, j);
        return s;
    };

    NelderMeadOptions opts;
    opts.max_iters = config.max_iters;
    opts.diameter_tol = config.diameter_tol;
    opts.fval_tol = fval_tol;

    MijZeroProbe probe;
    probe.achieved_min = std::numeric_limits<double>::infinity();

    constexpr double pi = std::numbers::pi;
    for (int start = 0; start < std::max(config.starts, 1); ++start) {
        std::vector<double> x0{0.0, 0.0, 0.0};
        if (start > 0) {
            Xoshiro256ss rng = sample_rng(config.seed, static_cast<std::uint64_t>(start));
            x0 = {rng.uniform(-pi, pi), rng.uniform(-pi, pi), rng.uniform(-pi, pi)};
        }

        const NelderMeadResult run = nelder_mead(objective, x0, opts);
        probe.iterations += run.iterations;
        probe.starts_used = start + 1;
        if (run.fval < probe.achieved_min) {
            probe.achieved_min = run.fval;
            probe.angles = EulerAngles{run.x[0], run.x[1], run.x[2]};
        }
        if (probe.achieved_min <= fval_tol) break;
    }
    probe.printed_off_norm = std::sqrt(std::max(0.0, probe.achieved_min));
    probe.fit_off_norm = euler_fit(g, config).off_norm;
    return probe;
}

}  // namespace triosc
