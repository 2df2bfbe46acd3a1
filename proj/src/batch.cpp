#include "triosc/batch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "triosc/euler.hpp"
#include "triosc/mij.hpp"
#include "triosc/modal.hpp"
#include "triosc/parallel.hpp"
#include "triosc/sampling.hpp"
#include "triosc/spectrum.hpp"

namespace triosc {

namespace {

double trace_identity_dev(double tr, const std::array<double, 3>& lambda) {
    const double s = lambda[0] + lambda[1] + lambda[2];
    const double scale = std::max(
        {1.0, std::abs(tr), std::abs(lambda[0]) + std::abs(lambda[1]) + std::abs(lambda[2])});
    return std::abs(s - tr) / scale;
}

unsigned worker_bound(long long samples, unsigned threads) {
    if (samples <= 0) return 0;
    return static_cast<unsigned>(
        std::min<long long>(std::max(threads, 1u), samples));
}

}  // namespace

SpectrumBatch run_spectrum_batch(std::uint64_t seed, long long samples, double lo, double hi,
                                 unsigned threads) {
    SpectrumBatch out;
    out.seed = seed;
    out.samples = samples;
    out.lo = lo;
    out.hi = hi;
    if (samples <= 0) return out;

    struct Partial {
        double max_dev = 0.0;
        std::uint64_t worst = 0;
        double max_printed = 0.0;
        double min_printed = std::numeric_limits<double>::infinity();
        double tp = 0.0, tr = 0.0, tm = 0.0;
        long long deg = 0, cp = 0, cr = 0, dn = 0;
    };
    std::vector<Partial> parts(worker_bound(samples, threads));

    parallel_chunks(
        static_cast<std::size_t>(samples), threads,
        [&](unsigned w, std::size_t begin, std::size_t end) {
            Partial& p = parts[w];
            for (std::size_t i = begin; i < end; ++i) {
                const SymMat3 g = random_symmat3(seed, i, lo, hi);
                const Spectrum pr = eigenvalues_printed(g);
                const Spectrum ro = eigenvalues_robust(g);
                const JacobiResult jr = jacobi_eigen(g);

                const double scale_j =
                    std::max({1.0, std::abs(jr.eigenvalues[0]), std::abs(jr.eigenvalues[1]),
                              std::abs(jr.eigenvalues[2])});
                double dev = 0.0;
                double dev_printed = 0.0;
                for (int k = 0; k < 3; ++k) {
                    const auto ks = static_cast<std::size_t>(k);
                    dev = std::max(dev, std::abs(ro.omega_sq[ks] - jr.eigenvalues[ks]));
                    dev_printed =
                        std::max(dev_printed, std::abs(pr.omega_sq[ks] - jr.eigenvalues[ks]));
                }
                dev /= scale_j;
                dev_printed /= scale_j;
                if (dev > p.max_dev) {
                    p.max_dev = dev;
                    p.worst = i;
                }
                p.max_printed = std::max(p.max_printed, dev_printed);
                p.min_printed = std::min(p.min_printed, dev_printed);

                const double trc = g.trace();
                p.tp = std::max(p.tp, trace_identity_dev(trc, pr.omega_sq));
                p.tr = std::max(p.tr, trace_identity_dev(trc, ro.omega_sq));
                p.tm = std::max(p.tm, trace_identity_dev(trc, modal_eigenvalues(g)));

                p.deg += ro.degenerate_isotropic ? 1 : 0;
                p.cp += pr.clamped ? 1 : 0;
                p.cr += ro.clamped ? 1 : 0;
                p.dn += pr.delta_nan ? 1 : 0;
            }
        });

    for (const Partial& p : parts) {
        if (p.max_dev > out.max_robust_vs_jacobi) {
            out.max_robust_vs_jacobi = p.max_dev;
            out.worst_index = p.worst;
        }
        out.max_printed_vs_jacobi = std::max(out.max_printed_vs_jacobi, p.max_printed);
        out.min_printed_vs_jacobi = std::min(out.min_printed_vs_jacobi, p.min_printed);
        out.max_trace_dev_printed = std::max(out.max_trace_dev_printed, p.tp);
        out.max_trace_dev_robust = std::max(out.max_trace_dev_robust, p.tr);
        out.max_trace_dev_modal = std::max(out.max_trace_dev_modal, p.tm);
        out.degenerate_count += p.deg;
        out.clamped_printed_count += p.cp;
        out.clamped_robust_count += p.cr;
        out.delta_nan_printed_count += p.dn;
    }
    return out;
}

MijBatch run_mij_batch(std::uint64_t seed, long long samples, double lo, double hi,
                       unsigned threads) {
    MijBatch out;
    out.seed = seed;
    out.samples = samples;
    out.lo = lo;
    out.hi = hi;
    if (samples <= 0) return out;

    struct Partial {
        std::array<std::array<MijEntrySummary, 3>, 3> table{};
        double max_sym = 0.0;
        double max_tol = 0.0;
    };
    std::vector<Partial> parts(worker_bound(samples, threads));

    parallel_chunks(
        static_cast<std::size_t>(samples), threads,
        [&](unsigned w, std::size_t begin, std::size_t end) {
            Partial& p = parts[w];
            for (std::size_t i = begin; i < end; ++i) {
                Xoshiro256ss rng = sample_rng(seed, i);
                const SymMat3 g = random_symmat3(rng, lo, hi);
                const AngleTriple at = random_angle_triple(rng);
                const MijReport rep = mij_compare(g, EulerAngles{at.phi, at.theta, at.psi});
                for (std::size_t r = 0; r < 3; ++r) {
                    for (std::size_t c = 0; c < 3; ++c) {
                        MijEntrySummary& e = p.table[r][c];
                        e.max_dev = std::max(e.max_dev, rep.per_entry_dev(r, c));
                        e.confirmed_count += rep.confirmed[r][c] ? 1 : 0;
                    }
                }
                p.max_sym = std::max(p.max_sym, rep.symmetry_dev);
                p.max_tol = std::max(p.max_tol, rep.tol);
            }
        });

    for (const Partial& p : parts) {
        for (std::size_t r = 0; r < 3; ++r) {
            for (std::size_t c = 0; c < 3; ++c) {
                out.table[r][c].max_dev = std::max(out.table[r][c].max_dev, p.table[r][c].max_dev);
                out.table[r][c].confirmed_count += p.table[r][c].confirmed_count;
            }
        }
        out.max_symmetry_dev = std::max(out.max_symmetry_dev, p.max_sym);
        out.max_tol = std::max(out.max_tol, p.max_tol);
    }
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c)
            out.table[r][c].confirmed_all = out.table[r][c].confirmed_count == samples;
    return out;
}

EulerFitBatch run_euler_fit_batch(std::uint64_t seed, long long samples, double lo, double hi,
                                  unsigned threads) {
    EulerFitBatch out;
    out.seed = seed;
    out.samples = samples;
    out.lo = lo;
    out.hi = hi;
    if (samples <= 0) return out;

    struct Partial {
        long long seeded_ok = 0, full_ok = 0, gimbal = 0, iters = 0;
        double max_off = 0.0, max_seeded = 0.0;
        int max_starts = 0;
    };
    std::vector<Partial> parts(worker_bound(samples, threads));

    parallel_chunks(
        static_cast<std::size_t>(samples), threads,
        [&](unsigned w, std::size_t begin, std::size_t end) {
            Partial& p = parts[w];
            for (std::size_t i = begin; i < end; ++i) {
                const SymMat3 g = random_symmat3(seed, i, lo, hi);
                FitConfig cfg;
                cfg.seed = seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(i) + 1));
                const FitResult fr = euler_fit(g, cfg);

                const double fnorm = std::max(g.frobenius(), 1e-300);
                const double threshold = 1e-8 * g.frobenius();
                p.seeded_ok += fr.seeded_off_norm <= threshold ? 1 : 0;
                p.full_ok += fr.off_norm <= threshold ? 1 : 0;
                p.max_off = std::max(p.max_off, fr.off_norm / fnorm);
                p.max_seeded = std::max(p.max_seeded, fr.seeded_off_norm / fnorm);
                p.max_starts = std::max(p.max_starts, fr.starts_used);
                p.iters += fr.iterations;

                const AngleExtraction ex = extract_angles(jacobi_eigen(g).eigenvectors);
                p.gimbal += ex.gimbal_lock ? 1 : 0;
            }
        });

    for (const Partial& p : parts) {
        out.seeded_success += p.seeded_ok;
        out.full_success += p.full_ok;
        out.gimbal_count += p.gimbal;
        out.total_iterations += p.iters;
        out.max_off_rel = std::max(out.max_off_rel, p.max_off);
        out.max_seeded_off_rel = std::max(out.max_seeded_off_rel, p.max_seeded);
        out.max_starts_used = std::max(out.max_starts_used, p.max_starts);
    }
    return out;
}

RotationBatch run_rotation_batch(std::uint64_t seed, long long samples, unsigned threads) {
    RotationBatch out;
    out.seed = seed;
    out.samples = samples;

    const GeneratorAlgebraReport gen = verify_generator_algebra();
    out.generator_commutator_residual = gen.max_commutator_residual;
    out.generator_hermiticity_residual = gen.max_hermiticity_residual;
    if (samples <= 0) return out;

    struct Partial {
        double adj_orth = 0.0, adj_det = 0.0, std_orth = 0.0;
        double adj_vs_rbar = 0.0, printed_vs_std = 0.0, roundtrip = 0.0;
    };
    std::vector<Partial> parts(worker_bound(samples, threads));

    parallel_chunks(
        static_cast<std::size_t>(samples), threads,
        [&](unsigned w, std::size_t begin, std::size_t end) {
            Partial& p = parts[w];
            for (std::size_t i = begin; i < end; ++i) {
                const AngleTriple at = random_angle_triple(seed, i);
                const EulerAngles a{at.phi, at.theta, at.psi};

                const Mat3 adj = adjoint_action(a);
                const auto [adj_orth, adj_det] = orthogonality_residual(adj);
                p.adj_orth = std::max(p.adj_orth, adj_orth);
                p.adj_det = std::max(p.adj_det, std::abs(adj_det));

                const Mat3 std_r = compose_standard(a);
                const auto [std_orth, std_det] = orthogonality_residual(std_r);
                (void)std_det;
                p.std_orth = std::max(p.std_orth, std_orth);

                p.adj_vs_rbar = std::max(p.adj_vs_rbar, frobenius(adj - rbar_printed(a)));
                p.printed_vs_std =
                    std::max(p.printed_vs_std, frobenius(compose_printed(a) - std_r));
                p.roundtrip = std::max(p.roundtrip, extract_angles(std_r).roundtrip_residual);
            }
        });

    for (const Partial& p : parts) {
        out.max_adjoint_orthogonality = std::max(out.max_adjoint_orthogonality, p.adj_orth);
        out.max_adjoint_det_dev = std::max(out.max_adjoint_det_dev, p.adj_det);
        out.max_standard_orthogonality = std::max(out.max_standard_orthogonality, p.std_orth);
        out.max_adjoint_vs_rbar = std::max(out.max_adjoint_vs_rbar, p.adj_vs_rbar);
        out.max_printed_vs_standard = std::max(out.max_printed_vs_standard, p.printed_vs_std);
        out.max_extraction_roundtrip = std::max(out.max_extraction_roundtrip, p.roundtrip);
    }
    return out;
}

ModalBatch run_modal_batch(std::uint64_t seed, long long samples, double lo, double hi,
                           unsigned threads) {
    ModalBatch out;
    out.seed = seed;
    out.samples = samples;
    out.lo = lo;
    out.hi = hi;
    if (samples <= 0) return out;

    struct Partial {
        long long degenerate = 0, z_pool = 0, flips = 0;
        double pair_dot = 0.0, comp_sum = 0.0, flipped_resid = 0.0;
        double printed_resid_min = std::numeric_limits<double>::infinity();
        double trace_dev = 0.0;
        double eq_eig = 0.0, eq_off = 0.0, eq_multiset = 0.0;
    };
    std::vector<Partial> parts(worker_bound(samples, threads));

    parallel_chunks(
        static_cast<std::size_t>(samples), threads,
        [&](unsigned w, std::size_t begin, std::size_t end) {
            Partial& p = parts[w];
            for (std::size_t i = begin; i < end; ++i) {
                const SymMat3 g = random_symmat3(seed, i, lo, hi);
                p.trace_dev = std::max(p.trace_dev, trace_identity_dev(g.trace(), modal_eigenvalues(g)));

                try {
                    const ModalBasis b = build_modal_basis(g);
                    if (b.z > 1e-6) {
                        ++p.z_pool;
                        p.pair_dot = std::max({p.pair_dot, std::abs(dot(b.v, b.v_plus)),
                                               std::abs(dot(b.v, b.v_minus)),
                                               std::abs(dot(b.v_plus, b.v_minus))});
                        const double sum_plus = b.v_plus[0] + b.v_plus[1] + b.v_plus[2];
                        const double sum_minus = b.v_minus[0] + b.v_minus[1] + b.v_minus[2];
                        p.comp_sum =
                            std::max({p.comp_sum, std::abs(sum_plus), std::abs(sum_minus)});
                    }
                    p.flipped_resid = std::max({p.flipped_resid, b.norm_residuals_flipped[1],
                                                b.norm_residuals_flipped[2]});
                    p.printed_resid_min =
                        std::min(p.printed_resid_min,
                                 std::max(b.norm_residuals[1], b.norm_residuals[2]));
                    p.flips += b.bracket_sign_flipped ? 1 : 0;
                } catch (const NumericalError&) {
                    ++p.degenerate;
                }

                // Equal-row-sum companion: same couplings, diagonal re-picked
                // so every row sums to 10.
                SymMat3 eq = g;
                eq.d1 = 10.0 - g.o12 - g.o13;
                eq.d2 = 10.0 - g.o12 - g.o23;
                eq.d3 = 10.0 - g.o13 - g.o23;
                try {
                    const ModalBasis eb = build_modal_basis(eq);
                    p.eq_eig = std::max({p.eq_eig, eb.eig_residuals[0], eb.eig_residuals[1],
                                         eb.eig_residuals[2]});
                    const ModalTransform et = modal_transform(eq);
                    p.eq_off =
                        std::max(p.eq_off, et.offdiag_norm / (1.0 + eq.frobenius()));
                    const JacobiResult jr = jacobi_eigen(eq);
                    const double scale =
                        std::max({1.0, std::abs(jr.eigenvalues[0]), std::abs(jr.eigenvalues[2])});
                    p.eq_multiset =
                        std::max(p.eq_multiset,
                                 multiset_distance(modal_eigenvalues(eq), jr.eigenvalues) / scale);
                } catch (const NumericalError&) {
                    // couplings too symmetric for the companion as well; already
                    // counted via the primary sample when applicable
                }
            }
        });

    for (const Partial& p : parts) {
        out.degenerate_count += p.degenerate;
        out.z_filter_count += p.z_pool;
        out.bracket_flip_count += p.flips;
        out.max_pair_dot = std::max(out.max_pair_dot, p.pair_dot);
        out.max_component_sum = std::max(out.max_component_sum, p.comp_sum);
        out.max_norm_residual_flipped = std::max(out.max_norm_residual_flipped, p.flipped_resid);
        out.max_trace_dev = std::max(out.max_trace_dev, p.trace_dev);
        out.max_eig_residual_equal_rowsum = std::max(out.max_eig_residual_equal_rowsum, p.eq_eig);
        out.max_offdiag_equal_rowsum = std::max(out.max_offdiag_equal_rowsum, p.eq_off);
        out.max_multiset_dev_equal_rowsum =
            std::max(out.max_multiset_dev_equal_rowsum, p.eq_multiset);
    }
    double min_printed = std::numeric_limits<double>::infinity();
    for (const Partial& p : parts) min_printed = std::min(min_printed, p.printed_resid_min);
    out.min_norm_residual_printed = min_printed;
    return out;
}

namespace {

OscillatorSystem constant_reference_system(double dt, double t1, int stride) {
    // Unit masses; stiffness and couplings chosen so the coefficient matrix
    // is [[7,1,2],[1,6,3],[2,3,5]] at every time.
    OscillatorSystem sys;
    sys.masses = {TimeProfile::constant(1.0), TimeProfile::constant(1.0),
                  TimeProfile::constant(1.0)};
    sys.stiffnesses = {TimeProfile::constant(7.0), TimeProfile::constant(6.0),
                       TimeProfile::constant(5.0)};
    sys.c12 = TimeProfile::constant(2.0);
    sys.c13 = TimeProfile::constant(4.0);
    sys.c23 = TimeProfile::constant(6.0);
    sys.t0 = 0.0;
    sys.t1 = t1;
    sys.dt = dt;
    sys.stride = stride;
    return sys;
}

double final_state_error(const std::vector<TrajectoryState>& run,
                         const std::vector<TrajectoryState>& ref) {
    const TrajectoryState& a = run.back();
    const TrajectoryState& b = ref.back();
    return std::sqrt(dot(a.x - b.x, a.x - b.x) + dot(a.p - b.p, a.p - b.p));
}

}  // namespace

DynamicsProbe run_dynamics_probe() {
    DynamicsProbe probe;
    const Vec3 x0{{1.0, 0.5, -0.25}};
    const Vec3 p0{{0.0, 0.3, 0.1}};

    {
        const OscillatorSystem sys = constant_reference_system(1e-3, 10.0, 1);
        const DecoupledComparison cmp = integrate_naive_decoupled(sys, x0, p0);
        probe.const_sup_discrepancy = cmp.max_discrepancy;
        probe.const_steps = static_cast<long long>(cmp.direct.size()) - 1;
        const double e0 = cmp.direct.front().energy;
        double drift = 0.0;
        for (const TrajectoryState& s : cmp.direct)
            drift = std::max(drift, std::abs(s.energy - e0));
        probe.const_energy_drift_rel = drift / std::max(1.0, std::abs(e0));
    }

    {
        const int big_stride = 1 << 30;
        const auto ref = integrate_direct(constant_reference_system(0.01 / 16.0, 1.0, big_stride),
                                          x0, p0);
        const auto coarse =
            integrate_direct(constant_reference_system(0.01, 1.0, big_stride), x0, p0);
        const auto fine =
            integrate_direct(constant_reference_system(0.005, 1.0, big_stride), x0, p0);
        probe.rk4_order_factor = final_state_error(coarse, ref) / final_state_error(fine, ref);
    }

    {
        OscillatorSystem sys;
        sys.masses = {TimeProfile::constant(1.0), TimeProfile::constant(1.0),
                      TimeProfile::constant(1.0)};
        sys.stiffnesses = {TimeProfile::constant(2.0), TimeProfile::constant(3.0),
                           TimeProfile::constant(4.0)};
        sys.c12 = TimeProfile::constant(0.5);
        sys.c13 = TimeProfile::constant(0.5);
        sys.c23 = TimeProfile::sinusoid(1.0, 0.8, 2.0, 0.0);
        sys.t0 = 0.0;
        sys.t1 = 10.0;
        sys.dt = 1e-3;
        sys.stride = 100;

        const DecoupledComparison cmp = integrate_naive_decoupled(sys, Vec3{{1.0, 0.0, 0.0}},
                                                                  Vec3{{0.0, 0.0, 0.0}});
        probe.td_max_discrepancy = cmp.max_discrepancy;
        probe.td_first_discrepancy = cmp.discrepancy.empty() ? -1.0 : cmp.discrepancy.front();
        probe.td_truncated = cmp.truncated;

        bool finite = !cmp.naive.empty();
        bool monotone = true;
        for (std::size_t i = 0; i < cmp.naive.size(); ++i) {
            const TrajectoryState& s = cmp.naive[i];
            if (!std::isfinite(s.t) || !std::isfinite(s.energy) ||
                !std::isfinite(cmp.discrepancy[i]))
                finite = false;
            for (int k = 0; k < 3; ++k)
                if (!std::isfinite(s.x[static_cast<std::size_t>(k)]) ||
                    !std::isfinite(s.p[static_cast<std::size_t>(k)]))
                    finite = false;
            if (i > 0 && !(cmp.naive[i].t > cmp.naive[i - 1].t)) monotone = false;
        }
        probe.td_finite = finite;
        probe.td_monotone_time = monotone;
    }
    return probe;
}

}  // namespace triosc
