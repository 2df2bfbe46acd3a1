#include "triosc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace triosc {

double effective_frequency_sq(const TimeProfile& m, const TimeProfile& c, double t) {
    const double mv = m.value(t);
    if (!(mv > 0.0)) {
        throw NumericalError(ErrorKind::NonPositiveMass,
                             "mass profile is not positive at t = " + std::to_string(t));
    }
    const double md = m.d1(t);
    const double mdd = m.d2(t);
    return 0.25 * (md * md / (mv * mv) - 2.0 * mdd / mv) + c.value(t) / mv;
}

double coupling_k(const TimeProfile& m_a, const TimeProfile& m_b, const TimeProfile& c_ab,
                  double t) {
    const double ma = m_a.value(t);
    const double mb = m_b.value(t);
    if (!(ma > 0.0) || !(mb > 0.0)) {
        throw NumericalError(ErrorKind::NonPositiveMass,
                             "mass profile is not positive at t = " + std::to_string(t));
    }
    return c_ab.value(t) / (2.0 * std::sqrt(ma * mb));
}

SymMat3 gamma_at(const OscillatorSystem& sys, double t) {
    SymMat3 g;
    g.d1 = effective_frequency_sq(sys.masses[0], sys.stiffnesses[0], t);
    g.d2 = effective_frequency_sq(sys.masses[1], sys.stiffnesses[1], t);
    g.d3 = effective_frequency_sq(sys.masses[2], sys.stiffnesses[2], t);
    g.o12 = coupling_k(sys.masses[0], sys.masses[1], sys.c12, t);
    g.o13 = coupling_k(sys.masses[0], sys.masses[2], sys.c13, t);
    g.o23 = coupling_k(sys.masses[1], sys.masses[2], sys.c23, t);
    return g;
}

long long validate_system(const OscillatorSystem& sys) {
    if (!(sys.dt > 0.0) || !(sys.t1 > sys.t0)) {
        throw NumericalError(ErrorKind::UsageError,
                             "simulation interval requires t1 > t0 and dt > 0");
    }
    if (sys.stride < 1) {
        throw NumericalError(ErrorKind::UsageError, "output stride must be >= 1");
    }
    const long long n_steps = std::llround((sys.t1 - sys.t0) / sys.dt);
    if (n_steps < 1) {
        throw NumericalError(ErrorKind::UsageError, "interval shorter than one step");
    }

    for (long long n = 0; n <= n_steps; ++n) {
        const double t = sys.t0 + static_cast<double>(n) * sys.dt;
        const SymMat3 g = gamma_at(sys, t);  // throws NonPositiveMass on bad mass
        const JacobiResult jr = jacobi_eigen(g);
        double fastest = 0.0;
        for (double lambda : jr.eigenvalues) fastest = std::max(fastest, std::sqrt(std::abs(lambda)));
        if (sys.dt * fastest > 0.1) {
            throw NumericalError(ErrorKind::StepTooLarge,
                                 "dt * max mode frequency = " + std::to_string(sys.dt * fastest) +
                                     " exceeds 0.1 at t = " + std::to_string(t));
        }
    }
    return n_steps;
}

namespace {

TrajectoryState make_state(double t, const Vec3& x, const Vec3& p, const SymMat3& g) {
    TrajectoryState s;
    s.t = t;
    s.x = x;
    s.p = p;
    s.energy = 0.5 * dot(p, p) + 0.5 * dot(x, g.apply(x));
    return s;
}

bool emits(long long step, long long n_steps, int stride) {
    return step == 0 || step % stride == 0 || step == n_steps;
}

}  // namespace

std::vector<TrajectoryState> integrate_direct(const OscillatorSystem& sys, const Vec3& x0,
                                              const Vec3& p0) {
    const long long n_steps = validate_system(sys);
    std::vector<TrajectoryState> out;
    out.reserve(static_cast<std::size_t>(n_steps / sys.stride + 2));

    Vec3 x = x0, p = p0;
    out.push_back(make_state(sys.t0, x, p, gamma_at(sys, sys.t0)));

    for (long long n = 0; n < n_steps; ++n) {
        const double t = sys.t0 + static_cast<double>(n) * sys.dt;
        const double h = sys.dt;
        const SymMat3 g_start = gamma_at(sys, t);
        const SymMat3 g_mid = gamma_at(sys, t + 0.5 * h);
        const SymMat3 g_end = gamma_at(sys, t + h);

        const Vec3 k1x = p;
        const Vec3 k1p = -1.0 * g_start.apply(x);
        const Vec3 k2x = p + (0.5 * h) * k1p;
        const Vec3 k2p = -1.0 * g_mid.apply(x + (0.5 * h) * k1x);
        const Vec3 k3x = p + (0.5 * h) * k2p;
        const Vec3 k3p = -1.0 * g_mid.apply(x + (0.5 * h) * k2x);
        const Vec3 k4x = p + h * k3p;
        const Vec3 k4p = -1.0 * g_end.apply(x + h * k3x);

        x = x + (h / 6.0) * (k1x + 2.0 * (k2x + k3x) + k4x);
        p = p + (h / 6.0) * (k1p + 2.0 * (k2p + k3p) + k4p);

        if (emits(n + 1, n_steps, sys.stride))
            out.push_back(make_state(t + h, x, p, g_end));
    }
    return out;
}

BasisMatch match_eigenbasis(const Mat3& reference_columns, const JacobiResult& current) {
    static constexpr int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                         {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    double overlaps[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            overlaps[i][j] = dot(reference_columns.col(static_cast<std::size_t>(i)),
                                 current.eigenvectors.col(static_cast<std::size_t>(j)));

    int best = 0;
    double best_score = -1.0;
    for (int k = 0; k < 6; ++k) {
        double score = 0.0;
        for (int i = 0; i < 3; ++i) score += std::abs(overlaps[i][kPerms[k][i]]);
        if (score > best_score) {
            best_score = score;
            best = k;
        }
    }

    BasisMatch match;
    match.min_overlap = 1.0;
    for (int i = 0; i < 3; ++i) {
        const int j = kPerms[best][i];
        const double d = overlaps[i][j];
        const double sign = (d < 0.0) ? -1.0 : 1.0;
        for (std::size_t r = 0; r < 3; ++r)
            match.basis(r, static_cast<std::size_t>(i)) =
                sign * current.eigenvectors(r, static_cast<std::size_t>(j));
        match.eigenvalues[static_cast<std::size_t>(i)] =
            current.eigenvalues[static_cast<std::size_t>(j)];
        match.min_overlap = std::min(match.min_overlap, std::abs(d));
    }
    return match;
}

DecoupledComparison integrate_naive_decoupled(const OscillatorSystem& sys, const Vec3& x0,
                                              const Vec3& p0) {
    DecoupledComparison cmp;
    cmp.direct = integrate_direct(sys, x0, p0);  // validates the system as well
    const long long n_steps = std::llround((sys.t1 - sys.t0) / sys.dt);

    const JacobiResult j0 = jacobi_eigen(gamma_at(sys, sys.t0));
    Mat3 basis = j0.eigenvectors;  // columns are the tracked eigenvectors
    std::array<double, 3> lambda = j0.eigenvalues;

    auto to_modes = [](const Mat3& b, const Vec3& v) {
        Vec3 q;
        for (std::size_t i = 0; i < 3; ++i) q[i] = dot(b.col(i), v);
        return q;
    };
    Vec3 q = to_modes(basis, x0);
    Vec3 pi = to_modes(basis, p0);

    auto emit_naive = [&](double t, const Mat3& b) {
        const Vec3 x = b * q;
        const Vec3 p = b * pi;
        cmp.naive.push_back(make_state(t, x, p, gamma_at(sys, t)));
        const std::size_t idx = cmp.naive.size() - 1;
        const double d = norm(cmp.naive[idx].x - cmp.direct[idx].x);
        cmp.discrepancy.push_back(d);
        cmp.max_discrepancy = std::max(cmp.max_discrepancy, d);
    };
    emit_naive(sys.t0, basis);

    for (long long n = 0; n < n_steps; ++n) {
        const double t = sys.t0 + static_cast<double>(n) * sys.dt;
        const double h = sys.dt;

        const BasisMatch mid = match_eigenbasis(basis, jacobi_eigen(gamma_at(sys, t + 0.5 * h)));
        const BasisMatch end = match_eigenbasis(basis, jacobi_eigen(gamma_at(sys, t + h)));
        const double overlap = std::min(mid.min_overlap, end.min_overlap);
        if (overlap < 0.5) {
            cmp.truncated = true;
            cmp.truncation_time = t;
            cmp.truncation_message =
                to_string(ErrorKind::EigenbasisDiscontinuity) +
                std::string(": eigenbasis overlap ") + std::to_string(overlap) +
                " fell below 0.5 at t = " + std::to_string(t) + "; run truncated";
            break;
        }

        for (std::size_t i = 0; i < 3; ++i) {
            const double l1 = lambda[i];
            const double l2 = mid.eigenvalues[i];
            const double l3 = end.eigenvalues[i];

            const double k1q = pi[i];
            const double k1p = -l1 * q[i];
            const double k2q = pi[i] + 0.5 * h * k1p;
            const double k2p = -l2 * (q[i] + 0.5 * h * k1q);
            const double k3q = pi[i] + 0.5 * h * k2p;
            const double k3p = -l2 * (q[i] + 0.5 * h * k2q);
            const double k4q = pi[i] + h * k3p;
            const double k4p = -l3 * (q[i] + h * k3q);

            q[i] += h / 6.0 * (k1q + 2.0 * (k2q + k3q) + k4q);
            pi[i] += h / 6.0 * (k1p + 2.0 * (k2p + k3p) + k4p);
        }

        basis = end.basis;
        lambda = end.eigenvalues;
        if (emits(n + 1, n_steps, sys.stride)) emit_naive(t + h, basis);
    }
    return cmp;
}

}  // namespace triosc
