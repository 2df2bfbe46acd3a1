#include "triosc/cli.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "triosc/batch.hpp"
#include "triosc/dynamics.hpp"
#include "triosc/euler.hpp"
#include "triosc/mij.hpp"
#include "triosc/modal.hpp"
#include "triosc/parallel.hpp"
#include "triosc/report_io.hpp"
#include "triosc/rng.hpp"
#include "triosc/sampling.hpp"
#include "triosc/spectrum.hpp"

namespace triosc {
namespace {

// ---------------------------------------------------------------- parsing

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_number(const std::string& token) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &pos);
    } catch (const std::exception&) {
        throw NumericalError(ErrorKind::UsageError, "cannot parse number '" + token + "'");
    }
    while (pos < token.size() && std::isspace(static_cast<unsigned char>(token[pos]))) ++pos;
    if (pos != token.size()) {
        throw NumericalError(ErrorKind::UsageError, "trailing junk in number '" + token + "'");
    }
    return v;
}

// Rows separated by ';', entries by ','. Mirror entries must match exactly.
SymMat3 parse_matrix_literal(const std::string& text) {
    const auto rows = split(text, ';');
    if (rows.size() != 3) {
        throw NumericalError(ErrorKind::UsageError,
                             "matrix literal needs exactly 3 ';'-separated rows");
    }
    double m[3][3];
    for (int r = 0; r < 3; ++r) {
        const auto cols = split(rows[static_cast<std::size_t>(r)], ',');
        if (cols.size() != 3) {
            throw NumericalError(ErrorKind::UsageError,
                                 "matrix row " + std::to_string(r + 1) +
                                     " needs exactly 3 ','-separated entries");
        }
        for (int c = 0; c < 3; ++c) m[r][c] = parse_number(cols[static_cast<std::size_t>(c)]);
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            if (m[i][j] != m[j][i]) {
                throw NumericalError(
                    ErrorKind::UsageError,
                    "matrix literal is not symmetric: entries (" + std::to_string(i + 1) + "," +
                        std::to_string(j + 1) + ") and (" + std::to_string(j + 1) + "," +
                        std::to_string(i + 1) + ") must match exactly");
            }
        }
    }
    return SymMat3{m[0][0], m[1][1], m[2][2], m[0][1], m[0][2], m[1][2]};
}

std::array<double, 3> parse_triple(const std::string& text, const char* what) {
    const auto parts = split(text, ',');
    if (parts.size() != 3) {
        throw NumericalError(ErrorKind::UsageError,
                             std::string(what) + " needs exactly 3 ','-separated numbers");
    }
    return {parse_number(parts[0]), parse_number(parts[1]), parse_number(parts[2])};
}

Json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw NumericalError(ErrorKind::UsageError, "cannot open config file '" + path + "'");
    }
    try {
        return Json::parse(f);
    } catch (const Json::exception& e) {
        throw NumericalError(ErrorKind::UsageError,
                             "config file '" + path + "' is not valid JSON: " + e.what());
    }
}

TimeProfile parse_profile(const Json& p) {
    try {
        const std::string family = p.at("family").get<std::string>();
        std::vector<double> params = p.at("params").get<std::vector<double>>();
        return TimeProfile(profile_family_from_string(family), std::move(params));
    } catch (const Json::exception& e) {
        throw NumericalError(ErrorKind::UsageError,
                             std::string("bad profile in config: ") + e.what());
    }
}

void parse_system_config(const Json& cfg, OscillatorSystem& sys, Vec3& x0, Vec3& p0) {
    try {
        const Json& osc = cfg.at("oscillators");
        if (!osc.is_array() || osc.size() != 3) {
            throw NumericalError(ErrorKind::UsageError,
                                 "config field 'oscillators' must list exactly 3 entries");
        }
        for (std::size_t i = 0; i < 3; ++i) {
            sys.masses[i] = parse_profile(osc[i].at("mass"));
            sys.stiffnesses[i] = parse_profile(osc[i].at("stiffness"));
        }
        const Json& cpl = cfg.at("couplings");
        sys.c12 = parse_profile(cpl.at("c12"));
        sys.c13 = parse_profile(cpl.at("c13"));
        sys.c23 = parse_profile(cpl.at("c23"));

        const Json& sim = cfg.at("simulation");
        sys.t0 = sim.at("t0").get<double>();
        sys.t1 = sim.at("t1").get<double>();
        sys.dt = sim.at("dt").get<double>();
        sys.stride = sim.value("stride", 1);

        const Json& init = cfg.at("initial");
        const auto xs = init.at("X").get<std::vector<double>>();
        const auto ps = init.at("P").get<std::vector<double>>();
        if (xs.size() != 3 || ps.size() != 3) {
            throw NumericalError(ErrorKind::UsageError,
                                 "config fields initial.X and initial.P must hold 3 numbers");
        }
        for (std::size_t i = 0; i < 3; ++i) {
            x0[i] = xs[i];
            p0[i] = ps[i];
        }
    } catch (const Json::exception& e) {
        throw NumericalError(ErrorKind::UsageError, std::string("bad config: ") + e.what());
    }
}

// ---------------------------------------------------------------- JSON bits

Json json_array3(const std::array<double, 3>& a) { return Json::array({a[0], a[1], a[2]}); }

Json json_vec3(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

Json json_mat3(const Mat3& m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < 3; ++r)
        rows.push_back(Json::array({m(r, 0), m(r, 1), m(r, 2)}));
    return rows;
}

Json json_symmat3(const SymMat3& g) { return json_mat3(g.to_mat3()); }

Json json_spectrum(const Spectrum& s) {
    Json j;
    j["mode"] = s.mode == SpectrumMode::AsPrinted ? "printed" : "robust";
    j["eigenvalues"] = json_array3(s.omega_sq);
    j["spread_measure"] = s.big_omega;
    j["discriminant"] = s.delta;
    j["branch_angle"] = s.phi_angle;
    j["degenerate_isotropic"] = s.degenerate_isotropic;
    j["clamped"] = s.clamped;
    j["clamp_excess"] = s.clamp_excess;
    j["discriminant_nan"] = s.delta_nan;
    return j;
}

Json json_angles(const EulerAngles& a) {
    return Json{{"phi", a.phi}, {"theta", a.theta}, {"psi", a.psi}};
}

Json make_envelope(const std::string& command, std::uint64_t seed) {
    Json j;
    j["schema_version"] = "1";
    j["command"] = command;
    j["rng"] = Json{{"algorithm", kRngName}, {"seed", seed}};
    return j;
}

// ---------------------------------------------------------------- options

struct Options {
    std::uint64_t seed = 42;
    long long samples = -1;  // -1: subcommand default
    double tol = 0.0;        // 0: builtin default per check
    std::string mode = "both";
    std::string format;      // per-subcommand default when empty
    std::string out_path;
    std::string config_path;
    unsigned threads = default_thread_count();

    std::string matrix_text;
    std::string angles_text;
    std::string probe_text = "0.3,0.4,0.5";
    bool zero_probe = false;
    bool compare_decoupling = false;
    int starts = 8;
    int max_iters = 400;
};

long long samples_or(const Options& o, long long fallback) {
    return o.samples >= 0 ? o.samples : fallback;
}

double tol_or(const Options& o, double fallback) { return o.tol > 0.0 ? o.tol : fallback; }

void check_json_only(const Options& o, const char* cmd) {
    if (!o.format.empty() && o.format != "json") {
        throw NumericalError(ErrorKind::UsageError,
                             std::string(cmd) + " emits JSON only (--format json)");
    }
}

SymMat3 matrix_from_options(const Options& o) {
    if (!o.matrix_text.empty()) return parse_matrix_literal(o.matrix_text);
    if (!o.config_path.empty()) {
        OscillatorSystem sys;
        Vec3 x0, p0;
        parse_system_config(load_json_file(o.config_path), sys, x0, p0);
        return gamma_at(sys, sys.t0);
    }
    throw NumericalError(ErrorKind::UsageError, "need --matrix or --config");
}

void emit(const Json& j, const Options& o, std::ostream& out) {
    write_text_output(dump_json(j), o.out_path, out);
}

// ---------------------------------------------------------------- handlers

int handle_eig(const Options& o, std::ostream& out) {
    check_json_only(o, "eig");
    if (o.mode != "printed" && o.mode != "robust" && o.mode != "both") {
        throw NumericalError(ErrorKind::UsageError,
                             "--mode must be printed, robust or both");
    }
    Json rep = make_envelope("eig", o.seed);

    if (!o.matrix_text.empty() || !o.config_path.empty()) {
        const SymMat3 g = matrix_from_options(o);
        const double tol = tol_or(o, 1e-10);
        const SpectrumComparison c = compare_modes(g);

        rep["params"] = Json{{"mode", o.mode}, {"tol", tol}};
        Json res;
        res["matrix"] = json_symmat3(g);
        if (o.mode != "robust") res["printed"] = json_spectrum(c.printed);
        if (o.mode != "printed") res["robust"] = json_spectrum(c.robust);
        res["jacobi"] = Json{{"eigenvalues", json_array3(c.jacobi)}};
        res["deviations"] = Json{{"printed_vs_robust", json_array3(c.printed_vs_robust)},
                                 {"printed_vs_jacobi", json_array3(c.printed_vs_jacobi)},
                                 {"robust_vs_jacobi", json_array3(c.robust_vs_jacobi)}};

        const double scale = std::max(
            {1.0, std::abs(c.jacobi[0]), std::abs(c.jacobi[1]), std::abs(c.jacobi[2])});
        double robust_rel = 0.0, printed_rel = 0.0;
        for (int k = 0; k < 3; ++k) {
            robust_rel = std::max(robust_rel, c.robust_vs_jacobi[static_cast<std::size_t>(k)]);
            printed_rel = std::max(printed_rel, c.printed_vs_jacobi[static_cast<std::size_t>(k)]);
        }
        robust_rel /= scale;
        printed_rel /= scale;
        res["robust_vs_jacobi_rel"] = robust_rel;
        res["printed_vs_jacobi_rel"] = printed_rel;

        const double tr = g.trace();
        const auto trace_dev = [tr](const std::array<double, 3>& lam) {
            const double sum = lam[0] + lam[1] + lam[2];
            const double mag = std::abs(lam[0]) + std::abs(lam[1]) + std::abs(lam[2]);
            return std::abs(sum - tr) / std::max({1.0, std::abs(tr), mag});
        };
        res["trace_identity_rel"] = Json{{"printed", trace_dev(c.printed.omega_sq)},
                                         {"robust", trace_dev(c.robust.omega_sq)},
                                         {"modal", trace_dev(modal_eigenvalues(g))}};
        res["verdict"] = Json{{"robust_matches_oracle", robust_rel <= tol},
                              {"printed_matches_oracle", printed_rel <= tol}};
        rep["result"] = res;
        emit(rep, o, out);
        return 0;
    }

    const long long n = samples_or(o, 100000);
    const double tol = tol_or(o, 1e-10);
    const SpectrumBatch b = run_spectrum_batch(o.seed, n, -1000.0, 1000.0, o.threads);
    rep["params"] = Json{{"samples", n}, {"entry_range", Json::array({-1000.0, 1000.0})},
                         {"tol", tol}};
    Json res;
    res["max_robust_vs_jacobi_rel"] = b.max_robust_vs_jacobi;
    res["worst_sample_index"] = b.worst_index;
    res["printed_vs_jacobi_rel"] =
        Json{{"max", b.max_printed_vs_jacobi}, {"min", b.min_printed_vs_jacobi}};
    res["trace_identity_rel"] = Json{{"printed", b.max_trace_dev_printed},
                                     {"robust", b.max_trace_dev_robust},
                                     {"modal", b.max_trace_dev_modal}};
    res["counts"] = Json{{"degenerate_isotropic", b.degenerate_count},
                         {"clamped_printed", b.clamped_printed_count},
                         {"clamped_robust", b.clamped_robust_count},
                         {"printed_discriminant_nan", b.delta_nan_printed_count}};
    res["verdict"] = Json{{"robust_matches_oracle", b.max_robust_vs_jacobi <= tol},
                          {"trace_identities_hold",
                           std::max({b.max_trace_dev_printed, b.max_trace_dev_robust,
                                     b.max_trace_dev_modal}) <= tol}};
    rep["result"] = res;
    emit(rep, o, out);
    return 0;
}

int handle_verify_rotation(const Options& o, std::ostream& out) {
    check_json_only(o, "verify-rotation");
    const long long n = samples_or(o, 10000);
    const RotationBatch b = run_rotation_batch(o.seed, n, o.threads);

    const auto pa = parse_triple(o.probe_text, "--probe");
    const EulerAngles probe{pa[0], pa[1], pa[2]};
    const Mat3 printed = compose_printed(probe);
    const Mat3 standard = compose_standard(probe);
    const Mat3 rbar = rbar_printed(probe);
    const Mat3 adjoint = adjoint_action(probe);
    const auto [printed_orth, printed_det] = orthogonality_residual(printed);
    const auto [standard_orth, standard_det] = orthogonality_residual(standard);
    (void)standard_det;

    Json rep = make_envelope("verify-rotation", o.seed);
    rep["params"] = Json{{"samples", n}, {"probe_angles", json_angles(probe)}};
    Json res;
    res["generator_algebra"] = Json{{"commutator_residual", b.generator_commutator_residual},
                                    {"hermiticity_residual", b.generator_hermiticity_residual}};
    res["batch"] = Json{{"max_adjoint_orthogonality_dev", b.max_adjoint_orthogonality},
                        {"max_adjoint_det_dev", b.max_adjoint_det_dev},
                        {"max_standard_orthogonality_dev", b.max_standard_orthogonality},
                        {"max_rbar_vs_adjoint", b.max_adjoint_vs_rbar},
                        {"max_printed_vs_standard", b.max_printed_vs_standard},
                        {"max_extraction_roundtrip", b.max_extraction_roundtrip}};
    res["probe"] = Json{{"printed", json_mat3(printed)},
                        {"standard", json_mat3(standard)},
                        {"rbar", json_mat3(rbar)},
                        {"adjoint", json_mat3(adjoint)},
                        {"printed_orthogonality_dev", printed_orth},
                        {"printed_det_dev", printed_det},
                        {"standard_orthogonality_dev", standard_orth},
                        {"printed_vs_standard", frobenius(printed - standard)},
                        {"rbar_vs_adjoint", frobenius(rbar - adjoint)}};
    res["adjoint_convention"] = kAdjointConvention;
    res["verdict"] =
        Json{{"generator_algebra_holds",
              b.generator_commutator_residual <= tol_or(o, 1e-15) &&
                  b.generator_hermiticity_residual <= tol_or(o, 1e-15)},
             {"adjoint_orthogonal", b.max_adjoint_orthogonality <= 1e-12},
             {"standard_orthogonal", b.max_standard_orthogonality <= 1e-14},
             {"printed_composition_deviates", printed_orth > 1e-8},
             {"rbar_is_adjoint_action", b.max_adjoint_vs_rbar <= 1e-12}};
    rep["result"] = res;
    emit(rep, o, out);
    return 0;
}

const char* mij_entry_name(std::size_t r, std::size_t c) {
    static const char* names[3][3] = {{"M11", "M12", "M13"},
                                      {"M21", "M22", "M23"},
                                      {"M31", "M32", "M33"}};
    return names[r][c];
}

int handle_verify_mij(const Options& o, std::ostream& out) {
    check_json_only(o, "verify-mij");
    Json rep = make_envelope("verify-mij", o.seed);

    if (o.zero_probe) {
        const SymMat3 g = matrix_from_options(o);
        FitConfig cfg;
        cfg.starts = o.starts;
        cfg.max_iters = o.max_iters;
        cfg.seed = o.seed;
        const MijZeroProbe probe = mij_zero_constraint_probe(g, cfg);
        rep["params"] = Json{{"matrix", json_symmat3(g)}, {"starts", cfg.starts},
                             {"max_iters", cfg.max_iters}};
        rep["result"] =
            Json{{"angles", json_angles(probe.angles)},
                 {"achieved_min", probe.achieved_min},
                 {"printed_off_norm", probe.printed_off_norm},
                 {"fit_off_norm_true_product", probe.fit_off_norm},
                 {"iterations", probe.iterations},
                 {"starts_used", probe.starts_used},
                 {"note", "achieved_min is the minimum over angles of the sum of squared "
                          "off-diagonal transcribed coefficients; fit_off_norm_true_product "
                          "is the same objective on the actual conjugation"}};
        emit(rep, o, out);
        return 0;
    }

    if (!o.matrix_text.empty() && !o.angles_text.empty()) {
        const SymMat3 g = parse_matrix_literal(o.matrix_text);
        const auto at = parse_triple(o.angles_text, "--angles");
        const MijReport r = mij_compare(g, EulerAngles{at[0], at[1], at[2]});
        rep["params"] = Json{{"matrix", json_symmat3(g)},
                             {"angles", json_angles(EulerAngles{at[0], at[1], at[2]})}};
        Json confirmed = Json::array();
        for (std::size_t i = 0; i < 3; ++i)
            confirmed.push_back(
                Json::array({r.confirmed[i][0], r.confirmed[i][1], r.confirmed[i][2]}));
        rep["result"] = Json{{"printed", json_mat3(r.printed)},
                             {"product_rt_g_r", json_mat3(r.product_rt_g_r)},
                             {"product_r_g_rt", json_mat3(r.product_r_g_rt)},
                             {"per_entry_dev", json_mat3(r.per_entry_dev)},
                             {"confirmed", confirmed},
                             {"symmetry_dev", r.symmetry_dev},
                             {"tol", r.tol}};
        emit(rep, o, out);
        return 0;
    }

    const long long n = samples_or(o, 10000);
    const MijBatch b = run_mij_batch(o.seed, n, -3.0, 3.0, o.threads);
    rep["params"] = Json{{"samples", n}, {"entry_range", Json::array({-3.0, 3.0})}};
    Json table = Json::array();
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
            const MijEntrySummary& e = b.table[r][c];
            table.push_back(Json{{"entry", mij_entry_name(r, c)},
                                 {"classification", e.confirmed_all ? "confirmed" : "deviating"},
                                 {"max_dev", e.max_dev},
                                 {"confirmed_count", e.confirmed_count}});
        }
    }
    rep["result"] = Json{{"table", table},
                         {"max_symmetry_dev", b.max_symmetry_dev},
                         {"max_confirmation_tol", b.max_tol},
                         {"m33_confirmed", b.table[2][2].confirmed_all}};
    emit(rep, o, out);
    return 0;
}

int handle_euler_fit(const Options& o, std::ostream& out) {
    check_json_only(o, "euler-fit");
    Json rep = make_envelope("euler-fit", o.seed);

    if (!o.matrix_text.empty() || !o.config_path.empty()) {
        const SymMat3 g = matrix_from_options(o);
        FitConfig cfg;
        cfg.starts = o.starts;
        cfg.max_iters = o.max_iters;
        cfg.seed = o.seed;
        const FitResult fr = euler_fit(g, cfg);
        const JacobiResult jr = jacobi_eigen(g);
        const double rel = fr.off_norm / std::max(g.frobenius(), 1e-300);
        const double tol = tol_or(o, 1e-8);

        rep["params"] = Json{{"matrix", json_symmat3(g)}, {"starts", cfg.starts},
                             {"max_iters", cfg.max_iters}, {"tol", tol}};
        rep["result"] = Json{{"angles", json_angles(fr.angles)},
                             {"off_norm", fr.off_norm},
                             {"off_norm_rel", rel},
                             {"diagonal", json_array3(fr.diagonal)},
                             {"jacobi_eigenvalues", json_array3(jr.eigenvalues)},
                             {"seeded_off_norm", fr.seeded_off_norm},
                             {"iterations", fr.iterations},
                             {"starts_used", fr.starts_used},
                             {"verdict", Json{{"diagonalized", rel <= tol}}}};
        emit(rep, o, out);
        return 0;
    }

    const long long n = samples_or(o, 1000);
    const double tol = tol_or(o, 1e-8);
    const EulerFitBatch b = run_euler_fit_batch(o.seed, n, -10.0, 10.0, o.threads);
    const double seeded_rate =
        n > 0 ? static_cast<double>(b.seeded_success) / static_cast<double>(n) : 0.0;
    const double full_rate =
        n > 0 ? static_cast<double>(b.full_success) / static_cast<double>(n) : 0.0;
    rep["params"] = Json{{"samples", n}, {"entry_range", Json::array({-10.0, 10.0})},
                         {"tol", tol}};
    rep["result"] = Json{{"seeded_success", b.seeded_success},
                         {"full_success", b.full_success},
                         {"seeded_rate", seeded_rate},
                         {"full_rate", full_rate},
                         {"gimbal_lock_count", b.gimbal_count},
                         {"max_off_norm_rel", b.max_off_rel},
                         {"max_seeded_off_norm_rel", b.max_seeded_off_rel},
                         {"max_starts_used", b.max_starts_used},
                         {"total_iterations", b.total_iterations},
                         {"verdict", Json{{"seeded_rate_ok", seeded_rate >= 0.99},
                                          {"all_resolved_in_budget", full_rate >= 1.0}}}};
    emit(rep, o, out);
    return 0;
}

int handle_modal(const Options& o, std::ostream& out) {
    check_json_only(o, "modal");
    Json rep = make_envelope("modal", o.seed);

    if (!o.matrix_text.empty() || !o.config_path.empty()) {
        const SymMat3 g = matrix_from_options(o);
        const ModalBasis b = build_modal_basis(g);  // throws DegenerateCoupling
        const ModalTransform t = modal_transform(g);
        const ModalTransform ref = robust_orthonormal_diagonalizer(g);
        const JacobiResult jr = jacobi_eigen(g);
        const std::array<double, 3> lambdas{b.lambda0, b.lambda_plus, b.lambda_minus};

        rep["params"] = Json{{"matrix", json_symmat3(g)}};
        Json basis;
        basis["v"] = json_vec3(b.v);
        basis["v_plus"] = json_vec3(b.v_plus);
        basis["v_minus"] = json_vec3(b.v_minus);
        basis["lambda"] = b.lambda0;
        basis["lambda_plus"] = b.lambda_plus;
        basis["lambda_minus"] = b.lambda_minus;
        basis["z"] = b.z;
        basis["a_plus"] = b.a_plus;
        basis["a_minus"] = b.a_minus;
        basis["scaled_norms"] = json_array3(b.scaled_norms);
        basis["norm_residuals"] = json_array3(b.norm_residuals);
        basis["norm_residuals_flipped"] = json_array3(b.norm_residuals_flipped);
        basis["bracket_sign_flipped"] = b.bracket_sign_flipped;
        basis["eig_residuals"] = json_array3(b.eig_residuals);
        basis["rowsum_spread"] = b.rowsum_spread;

        Json transform;
        transform["u"] = json_mat3(t.u);
        transform["diag"] = json_array3(t.diag);
        transform["offdiag_norm"] = t.offdiag_norm;
        transform["orthogonality_dev"] = t.orthogonality_dev;
        transform["row_norms"] = json_array3(t.row_norms);

        Json reference;
        reference["diag"] = json_array3(ref.diag);
        reference["offdiag_norm"] = ref.offdiag_norm;
        reference["orthogonality_dev"] = ref.orthogonality_dev;

        rep["result"] =
            Json{{"basis", basis},
                 {"transform", transform},
                 {"reference", reference},
                 {"jacobi_eigenvalues", json_array3(jr.eigenvalues)},
                 {"modal_vs_jacobi_multiset", multiset_distance(lambdas, jr.eigenvalues)},
                 {"trace_identity_dev",
                  std::abs(lambdas[0] + lambdas[1] + lambdas[2] - g.trace())}};
        emit(rep, o, out);
        return 0;
    }

    const long long n = samples_or(o, 10000);
    const ModalBatch b = run_modal_batch(o.seed, n, -3.0, 3.0, o.threads);
    rep["params"] = Json{{"samples", n}, {"entry_range", Json::array({-3.0, 3.0})}};
    rep["result"] = Json{{"degenerate_count", b.degenerate_count},
                         {"z_above_1e-6_count", b.z_filter_count},
                         {"max_pair_dot", b.max_pair_dot},
                         {"max_component_sum", b.max_component_sum},
                         {"max_norm_residual_flipped", b.max_norm_residual_flipped},
                         {"min_norm_residual_printed", b.min_norm_residual_printed},
                         {"bracket_flip_count", b.bracket_flip_count},
                         {"max_trace_identity_dev", b.max_trace_dev},
                         {"equal_rowsum", Json{{"max_eig_residual", b.max_eig_residual_equal_rowsum},
                                               {"max_offdiag_rel", b.max_offdiag_equal_rowsum},
                                               {"max_multiset_dev", b.max_multiset_dev_equal_rowsum}}},
                         {"verdict", Json{{"orthogonality_ok", b.max_pair_dot <= 1e-12},
                                          {"flipped_normalizers_ok",
                                           b.max_norm_residual_flipped <= 1e-10},
                                          {"equal_rowsum_construction_valid",
                                           b.max_offdiag_equal_rowsum <= 1e-9}}}};
    emit(rep, o, out);
    return 0;
}

int handle_simulate(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.config_path.empty()) {
        throw NumericalError(ErrorKind::UsageError, "simulate needs --config");
    }
    const std::string format = o.format.empty() ? "csv" : o.format;
    if (format != "csv" && format != "json") {
        throw NumericalError(ErrorKind::UsageError, "--format must be csv or json");
    }

    const Json cfg = load_json_file(o.config_path);
    OscillatorSystem sys;
    Vec3 x0, p0;
    parse_system_config(cfg, sys, x0, p0);

    std::vector<TrajectoryState> rows;
    std::vector<double> discrepancy;
    bool truncated = false;
    std::string truncation_message;
    double max_d = 0.0;

    if (o.compare_decoupling) {
        DecoupledComparison cmp = integrate_naive_decoupled(sys, x0, p0);
        // state columns follow the direct integration; D measures the naive
        // trajectory's distance from it
        rows.assign(cmp.direct.begin(),
                    cmp.direct.begin() + static_cast<long>(cmp.naive.size()));
        discrepancy = cmp.discrepancy;
        truncated = cmp.truncated;
        truncation_message = cmp.truncation_message;
        max_d = cmp.max_discrepancy;
    } else {
        rows = integrate_direct(sys, x0, p0);
    }

    if (format == "csv") {
        std::string text = "t,x1,x2,x3,p1,p2,p3,energy";
        if (o.compare_decoupling) text += ",D";
        text += '\n';
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const TrajectoryState& s = rows[i];
            text += csv_number(s.t);
            for (int k = 0; k < 3; ++k) text += ',' + csv_number(s.x[static_cast<std::size_t>(k)]);
            for (int k = 0; k < 3; ++k) text += ',' + csv_number(s.p[static_cast<std::size_t>(k)]);
            text += ',' + csv_number(s.energy);
            if (o.compare_decoupling) text += ',' + csv_number(discrepancy[i]);
            text += '\n';
        }
        write_text_output(text, o.out_path, out);
    } else {
        Json rep = make_envelope("simulate", o.seed);
        rep["params"] = Json{{"config", cfg}, {"compare_decoupling", o.compare_decoupling}};
        Json columns = Json::array({"t", "x1", "x2", "x3", "p1", "p2", "p3", "energy"});
        if (o.compare_decoupling) columns.push_back("D");
        Json data = Json::array();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const TrajectoryState& s = rows[i];
            Json row = Json::array({s.t, s.x[0], s.x[1], s.x[2], s.p[0], s.p[1], s.p[2], s.energy});
            if (o.compare_decoupling) row.push_back(discrepancy[i]);
            data.push_back(row);
        }
        Json res;
        res["columns"] = columns;
        res["data"] = data;
        if (o.compare_decoupling) res["max_discrepancy"] = max_d;
        if (truncated) {
            res["error"] = Json{{"kind", to_string(ErrorKind::EigenbasisDiscontinuity)},
                                {"message", truncation_message}};
        }
        rep["result"] = res;
        emit(rep, o, out);
    }

    if (truncated) {
        err << "warning: " << truncation_message << "\n";
        return 2;
    }
    return 0;
}

int handle_report(const Options& o, std::ostream& out) {
    check_json_only(o, "report");
    const long long base = o.samples >= 0 ? o.samples : 10000;
    const long long fit_n = o.samples >= 0 ? std::min<long long>(o.samples, 1000) : 500;
    const long long spectrum_n = o.samples >= 0 ? o.samples : 20000;

    const SpectrumBatch sb = run_spectrum_batch(o.seed, spectrum_n, -1000.0, 1000.0, o.threads);
    const RotationBatch rb = run_rotation_batch(o.seed, base, o.threads);
    const MijBatch mb = run_mij_batch(o.seed, base, -3.0, 3.0, o.threads);
    const EulerFitBatch fb = run_euler_fit_batch(o.seed, fit_n, -10.0, 10.0, o.threads);
    const ModalBatch mob = run_modal_batch(o.seed, base, -3.0, 3.0, o.threads);
    const DynamicsProbe dp = run_dynamics_probe();

    Json rep = make_envelope("report", o.seed);
    rep["params"] = Json{{"samples", Json{{"spectrum", spectrum_n},
                                          {"rotation", base},
                                          {"mij", base},
                                          {"euler_fit", fit_n},
                                          {"modal", base}}}};

    Json spectrum;
    spectrum["max_robust_vs_jacobi_rel"] = sb.max_robust_vs_jacobi;
    spectrum["printed_vs_jacobi_rel"] =
        Json{{"max", sb.max_printed_vs_jacobi}, {"min", sb.min_printed_vs_jacobi}};
    spectrum["trace_identity_rel"] = Json{{"printed", sb.max_trace_dev_printed},
                                          {"robust", sb.max_trace_dev_robust},
                                          {"modal", sb.max_trace_dev_modal}};
    spectrum["counts"] = Json{{"degenerate_isotropic", sb.degenerate_count},
                              {"clamped_printed", sb.clamped_printed_count},
                              {"clamped_robust", sb.clamped_robust_count},
                              {"printed_discriminant_nan", sb.delta_nan_printed_count}};

    Json rotation;
    rotation["generator_commutator_residual"] = rb.generator_commutator_residual;
    rotation["generator_hermiticity_residual"] = rb.generator_hermiticity_residual;
    rotation["max_adjoint_orthogonality_dev"] = rb.max_adjoint_orthogonality;
    rotation["max_standard_orthogonality_dev"] = rb.max_standard_orthogonality;
    rotation["max_rbar_vs_adjoint"] = rb.max_adjoint_vs_rbar;
    rotation["max_printed_vs_standard"] = rb.max_printed_vs_standard;
    rotation["max_extraction_roundtrip"] = rb.max_extraction_roundtrip;

    Json mij;
    {
        Json table = Json::array();
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 3; ++c)
                table.push_back(
                    Json{{"entry", mij_entry_name(r, c)},
                         {"classification",
                          mb.table[r][c].confirmed_all ? "confirmed" : "deviating"},
                         {"max_dev", mb.table[r][c].max_dev}});
        mij["table"] = table;
        mij["max_symmetry_dev"] = mb.max_symmetry_dev;
    }

    Json fit;
    fit["seeded_success"] = fb.seeded_success;
    fit["full_success"] = fb.full_success;
    fit["samples"] = fb.samples;
    fit["gimbal_lock_count"] = fb.gimbal_count;
    fit["max_off_norm_rel"] = fb.max_off_rel;

    Json modal;
    modal["degenerate_count"] = mob.degenerate_count;
    modal["max_pair_dot"] = mob.max_pair_dot;
    modal["max_norm_residual_flipped"] = mob.max_norm_residual_flipped;
    modal["min_norm_residual_printed"] = mob.min_norm_residual_printed;
    modal["bracket_flip_count"] = mob.bracket_flip_count;
    modal["equal_rowsum"] = Json{{"max_eig_residual", mob.max_eig_residual_equal_rowsum},
                                 {"max_offdiag_rel", mob.max_offdiag_equal_rowsum},
                                 {"max_multiset_dev", mob.max_multiset_dev_equal_rowsum}};

    Json dynamics;
    dynamics["const_sup_discrepancy"] = dp.const_sup_discrepancy;
    dynamics["const_steps"] = dp.const_steps;
    dynamics["const_energy_drift_rel"] = dp.const_energy_drift_rel;
    dynamics["rk4_order_factor"] = dp.rk4_order_factor;
    dynamics["time_dependent"] = Json{{"max_discrepancy", dp.td_max_discrepancy},
                                      {"first_discrepancy", dp.td_first_discrepancy},
                                      {"finite", dp.td_finite},
                                      {"monotone_time", dp.td_monotone_time},
                                      {"truncated", dp.td_truncated}};

    Json verdicts;
    verdicts["robust_closed_form_matches_oracle"] = sb.max_robust_vs_jacobi <= 1e-10;
    verdicts["printed_closed_form_matches_oracle"] = sb.max_printed_vs_jacobi <= 1e-10;
    verdicts["trace_identities_hold"] =
        std::max({sb.max_trace_dev_printed, sb.max_trace_dev_robust, sb.max_trace_dev_modal}) <=
        1e-10;
    verdicts["printed_composition_orthogonal"] = rb.max_printed_vs_standard <= 1e-12;
    verdicts["rbar_matches_adjoint_action"] = rb.max_adjoint_vs_rbar <= 1e-12;
    verdicts["euler_rotations_diagonalize"] =
        fb.full_success == fb.samples &&
        fb.seeded_success >= static_cast<long long>(0.99 * static_cast<double>(fb.samples));
    verdicts["m33_confirmed"] = mb.table[2][2].confirmed_all;
    {
        Json deviating = Json::array();
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 3; ++c)
                if (!mb.table[r][c].confirmed_all) deviating.push_back(mij_entry_name(r, c));
        verdicts["deviating_mij_entries"] = deviating;
    }
    verdicts["printed_modal_normalizers_unit"] = mob.min_norm_residual_printed <= 1e-10;
    verdicts["flipped_modal_normalizers_unit"] = mob.max_norm_residual_flipped <= 1e-10;
    verdicts["modal_valid_on_equal_rowsums"] = mob.max_offdiag_equal_rowsum <= 1e-9;
    verdicts["naive_decoupling_exact_when_constant"] = dp.const_sup_discrepancy <= 1e-8;
    verdicts["rk4_order_nominal"] =
        dp.rk4_order_factor >= 12.0 && dp.rk4_order_factor <= 20.0;
    verdicts["dudt_discrepancy_observed"] = dp.td_finite && dp.td_max_discrepancy > 1e-6;

    rep["result"] = Json{{"spectrum", spectrum}, {"rotation", rotation},  {"mij", mij},
                         {"euler_fit", fit},     {"modal", modal},        {"dynamics", dynamics},
                         {"verdicts", verdicts}};
    emit(rep, o, out);
    return 0;
}

void add_common_options(CLI::App* sub, Options& o, bool with_matrix) {
    sub->add_option("--seed", o.seed, "RNG seed; the generator is " + std::string(kRngName))
        ->capture_default_str();
    sub->add_option("--samples", o.samples, "batch sample count (subcommand default when omitted)");
    sub->add_option("--tol", o.tol, "override the default verdict tolerance");
    sub->add_option("--format", o.format, "output format: json (simulate also accepts csv)");
    sub->add_option("--out", o.out_path, "write the report to this file instead of stdout");
    sub->add_option("--config", o.config_path, "JSON system configuration file");
    sub->add_option("--threads", o.threads,
                    "worker pool bound (results are identical for any value)")
        ->capture_default_str();
    if (with_matrix) {
        sub->add_option("--matrix", o.matrix_text,
                        "symmetric 3x3 literal: rows ';'-separated, entries ','-separated, "
                        "mirror entries must match exactly");
    }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Three-oscillator formula verification harness: closed-form eigenvalues, "
                 "Euler-angle diagonalization, conjugation coefficient audit, modal basis, "
                 "and direct-vs-decoupled dynamics."};
    app.require_subcommand(1);

    CLI::App* eig = app.add_subcommand(
        "eig", "Closed-form eigenvalues (printed and robust) vs the Jacobi oracle; "
               "single matrix or seeded batch. JSON.");
    add_common_options(eig, o, true);
    eig->add_option("--mode", o.mode, "printed | robust | both")->capture_default_str();

    CLI::App* vrot = app.add_subcommand(
        "verify-rotation", "Generator algebra, adjoint action orthogonality, transcribed "
                           "composition audit. JSON.");
    add_common_options(vrot, o, false);
    vrot->add_option("--probe", o.probe_text, "angle triple 'phi,theta,psi' for the spot check")
        ->capture_default_str();

    CLI::App* vmij = app.add_subcommand(
        "verify-mij", "Entry-wise audit of the nine transcribed conjugation coefficients. "
                      "Batch table, single-point report (--matrix with --angles), or "
                      "zero-constraint probe (--probe-zero). JSON.");
    add_common_options(vmij, o, true);
    vmij->add_option("--angles", o.angles_text, "angle triple 'phi,theta,psi'");
    vmij->add_flag("--probe-zero", o.zero_probe,
                   "minimize the sum of squared off-diagonal transcribed coefficients");
    vmij->add_option("--starts", o.starts, "probe restarts")->capture_default_str();
    vmij->add_option("--max-iters", o.max_iters, "simplex iterations per start")
        ->capture_default_str();

    CLI::App* efit = app.add_subcommand(
        "euler-fit", "Minimize the off-diagonal norm of R^T G R over Euler angles; single "
                     "matrix or seeded batch. JSON.");
    add_common_options(efit, o, true);
    efit->add_option("--starts", o.starts, "multi-start budget")->capture_default_str();
    efit->add_option("--max-iters", o.max_iters, "simplex iterations per start")
        ->capture_default_str();

    CLI::App* modal = app.add_subcommand(
        "modal", "Symmetric-plus-difference eigenvector basis, normalizer audit, and the "
                 "row-wise transform vs the oracle diagonalizer. JSON.");
    add_common_options(modal, o, true);

    CLI::App* sim = app.add_subcommand(
        "simulate", "Integrate the configured system (RK4). CSV columns: t,x1,x2,x3,p1,p2,p3,"
                    "energy and, with --compare-decoupling, D = |x_naive - x_direct|; state "
                    "columns are the direct trajectory. --format json for a structured report.");
    add_common_options(sim, o, false);
    sim->add_flag("--compare-decoupling", o.compare_decoupling,
                  "also run the naively decoupled integration and report D(t)");

    CLI::App* report = app.add_subcommand(
        "report", "Run every verification batch and emit one adjudication document. JSON.");
    add_common_options(report, o, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (o.samples != -1 && o.samples < 1) {
            throw NumericalError(ErrorKind::UsageError, "--samples must be at least 1");
        }
        if (o.tol < 0.0) {
            throw NumericalError(ErrorKind::UsageError, "--tol must be positive");
        }
        if (eig->parsed()) return handle_eig(o, out);
        if (vrot->parsed()) return handle_verify_rotation(o, out);
        if (vmij->parsed()) return handle_verify_mij(o, out);
        if (efit->parsed()) return handle_euler_fit(o, out);
        if (modal->parsed()) return handle_modal(o, out);
        if (sim->parsed()) return handle_simulate(o, out, err);
        if (report->parsed()) return handle_report(o, out);
        err << "error: no subcommand selected\n";
        return 1;
    } catch (const NumericalError& e) {
        if (e.kind() == ErrorKind::UsageError) {
            err << "error: " << e.what() << "\n";
            return 1;
        }
        Json rep = make_envelope(cmd, o.seed);
        rep["error"] = Json{{"kind", to_string(e.kind())}, {"message", e.what()}};
        try {
            write_text_output(dump_json(rep), o.out_path, out);
        } catch (const NumericalError& write_err) {
            err << "error: " << write_err.what() << "\n";
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace triosc
