#pragma once

// Time-dependent system construction from the profile families, classical
// Hamiltonian integration (fixed-step RK4), and the comparison between the
// direct trajectory and the naively decoupled one that drops the time
// derivative of the diagonalizing transformation.

#include <array>
#include <string>
#include <vector>

#include "triosc/linalg3.hpp"
#include "triosc/profiles.hpp"

namespace triosc {

struct OscillatorSystem {
    std::array<TimeProfile, 3> masses;       // strictly positive on [t0, t1]
    std::array<TimeProfile, 3> stiffnesses;
    TimeProfile c12, c13, c23;               // couplings
    double t0 = 0.0;
    double t1 = 1.0;
    double dt = 1e-3;
    int stride = 1;  // emit every stride-th step (step 0 and the final step always emit)
};

struct TrajectoryState {
    double t = 0.0;
    Vec3 x;
    Vec3 p;
    double energy = 0.0;  // instantaneous H = ||p||^2/2 + x^T G(t) x / 2
};

// omega_i^2 = (1/4)(mdot^2/m^2 - 2 mddot/m) + c/m, analytic derivatives.
// Throws NonPositiveMass when m(t) <= 0.
double effective_frequency_sq(const TimeProfile& m, const TimeProfile& c, double t);

// K_ab = c_ab / (2 sqrt(m_a m_b)). Throws NonPositiveMass.
double coupling_k(const TimeProfile& m_a, const TimeProfile& m_b, const TimeProfile& c_ab,
                  double t);

// The symmetric coefficient matrix at time t: diagonal from
// effective_frequency_sq, off-diagonal from coupling_k.
SymMat3 gamma_at(const OscillatorSystem& sys, double t);

// Checks dt > 0, t1 > t0, positive masses at every step boundary, and the
// resolution condition dt * max_i sqrt(|lambda_i(t)|) <= 0.1 at every step
// boundary. Throws NonPositiveMass or StepTooLarge. Returns the step count.
long long validate_system(const OscillatorSystem& sys);

// Fixed-step RK4 on xdot = p, pdot = -G(t) x.
std::vector<TrajectoryState> integrate_direct(const OscillatorSystem& sys, const Vec3& x0,
                                              const Vec3& p0);

// One eigenbasis continuity step: permutes and sign-fixes the columns of
// `current` to maximize overlap with the reference columns.
struct BasisMatch {
    Mat3 basis;                         // columns reordered and sign-aligned
    std::array<double, 3> eigenvalues;  // permuted to match
    double min_overlap = 0.0;           // smallest |dot| among matched pairs
};
BasisMatch match_eigenbasis(const Mat3& reference_columns, const JacobiResult& current);

struct DecoupledComparison {
    std::vector<TrajectoryState> direct;
    std::vector<TrajectoryState> naive;   // truncated runs emit fewer rows
    std::vector<double> discrepancy;      // ||x_naive - x_direct|| per naive row
    double max_discrepancy = 0.0;
    bool truncated = false;               // eigenbasis overlap fell below 0.5
    double truncation_time = 0.0;
    std::string truncation_message;
};

// Integrates each instantaneous normal mode independently (no dU/dt term),
// tracking the eigenbasis by maximal-overlap matching, and compares against
// integrate_direct on the same grid. An overlap below 0.5 truncates the
// naive run (EigenbasisDiscontinuity recorded, partial results kept).
DecoupledComparison integrate_naive_decoupled(const OscillatorSystem& sys, const Vec3& x0,
                                              const Vec3& p0);

}  // namespace triosc
