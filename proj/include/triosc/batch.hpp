#pragma once

// Seeded batch sweeps shared by the CLI subcommands and the acceptance
// suite. Every runner derives one generator per sample index and reduces
// with max / count / first-index operations only, so the numbers are
// independent of the thread count.

#include <array>
#include <cstdint>
#include <limits>

#include "triosc/dynamics.hpp"
#include "triosc/linalg3.hpp"

namespace triosc {

struct SpectrumBatch {
    std::uint64_t seed = 0;
    long long samples = 0;
    double lo = 0.0, hi = 0.0;
    // max over samples of max_i |robust_i - jacobi_i| / max(1, max_i |jacobi_i|)
    double max_robust_vs_jacobi = 0.0;
    std::uint64_t worst_index = 0;  // first sample achieving the max above
    // Same measure for the as-printed eigenvalues; stays large because the
    // printed amplitude is the unrooted spread measure.
    double max_printed_vs_jacobi = 0.0;
    double min_printed_vs_jacobi = std::numeric_limits<double>::infinity();
    // |sum(lambda) - tr| / max(1, |tr|, sum |lambda_i|), per eigenvalue route
    double max_trace_dev_printed = 0.0;
    double max_trace_dev_robust = 0.0;
    double max_trace_dev_modal = 0.0;
    long long degenerate_count = 0;      // isotropic fallback taken (robust mode)
    long long clamped_printed_count = 0; // cosine argument left [-1, 1]
    long long clamped_robust_count = 0;
    long long delta_nan_printed_count = 0;  // fractional-power discriminant was NaN
};

SpectrumBatch run_spectrum_batch(std::uint64_t seed, long long samples, double lo, double hi,
                                 unsigned threads);

struct MijEntrySummary {
    double max_dev = 0.0;            // max over samples of the per-entry deviation
    long long confirmed_count = 0;   // samples where the entry matched a product
    bool confirmed_all = false;
};

struct MijBatch {
    std::uint64_t seed = 0;
    long long samples = 0;
    double lo = 0.0, hi = 0.0;
    std::array<std::array<MijEntrySummary, 3>, 3> table{};
    double max_symmetry_dev = 0.0;   // asymmetry of the transcribed matrix
    double max_tol = 0.0;            // largest per-sample confirmation tolerance
};

MijBatch run_mij_batch(std::uint64_t seed, long long samples, double lo, double hi,
                       unsigned threads);

struct EulerFitBatch {
    std::uint64_t seed = 0;
    long long samples = 0;
    double lo = 0.0, hi = 0.0;
    long long seeded_success = 0;   // oracle-seeded start alone reached 1e-8 * ||g||_F
    long long full_success = 0;     // best over the multi-start budget reached it
    long long gimbal_count = 0;     // oracle extraction hit the Euler-chart singularity
    double max_off_rel = 0.0;        // max over samples of off_norm / max(1e-300, ||g||_F)
    double max_seeded_off_rel = 0.0;
    int max_starts_used = 0;
    long long total_iterations = 0;
};

EulerFitBatch run_euler_fit_batch(std::uint64_t seed, long long samples, double lo, double hi,
                                  unsigned threads);

struct RotationBatch {
    std::uint64_t seed = 0;
    long long samples = 0;
    double generator_commutator_residual = 0.0;
    double generator_hermiticity_residual = 0.0;
    double max_adjoint_orthogonality = 0.0;  // ||B^T B - I||_F over sampled triples
    double max_adjoint_det_dev = 0.0;        // |det B - 1|
    double max_standard_orthogonality = 0.0;
    double max_adjoint_vs_rbar = 0.0;       // transcribed coefficient matrix vs adjoint action
    double max_printed_vs_standard = 0.0;   // transcribed composition vs actual product
    double max_extraction_roundtrip = 0.0;  // extract/compose round-trip residual
};

RotationBatch run_rotation_batch(std::uint64_t seed, long long samples, unsigned threads);

struct ModalBatch {
    std::uint64_t seed = 0;
    long long samples = 0;
    double lo = 0.0, hi = 0.0;
    long long degenerate_count = 0;   // DegenerateCoupling raised
    long long z_filter_count = 0;     // samples with z > 1e-6 (orthogonality pool)
    double max_pair_dot = 0.0;        // max |v.v+|, |v.v-|, |v+.v-| over the pool
    double max_component_sum = 0.0;   // max |sum of components| of v+ and v- (unit)
    double max_norm_residual_flipped = 0.0;  // swapped-bracket normalizers
    double min_norm_residual_printed = 0.0;  // best the transcribed normalizers achieve (min over samples of the worse of the +/- residuals)
    long long bracket_flip_count = 0;
    double max_trace_dev = 0.0;       // modal eigenvalue sum vs trace, relative
    // Equal-row-sum companions (diagonal adjusted to force equal row sums):
    double max_eig_residual_equal_rowsum = 0.0;
    double max_offdiag_equal_rowsum = 0.0;      // modal transform off-diagonal norm
    double max_multiset_dev_equal_rowsum = 0.0; // modal eigenvalues vs Jacobi
};

ModalBatch run_modal_batch(std::uint64_t seed, long long samples, double lo, double hi,
                           unsigned threads);

struct DynamicsProbe {
    // Constant-parameter cross-check: direct vs naive decoupled.
    double const_sup_discrepancy = 0.0;
    long long const_steps = 0;
    double const_energy_drift_rel = 0.0;
    // RK4 order factor: error(dt) / error(dt/2) against a dt/16 reference.
    double rk4_order_factor = 0.0;
    // Time-dependent run diagnostics.
    double td_max_discrepancy = 0.0;
    double td_first_discrepancy = 0.0;  // D at t0, must be ~0
    bool td_finite = false;             // every sample finite
    bool td_monotone_time = false;      // emission times strictly increasing
    bool td_truncated = false;
};

DynamicsProbe run_dynamics_probe();

}  // namespace triosc
