#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "triosc/cli.hpp"
#include "triosc/errors.hpp"
#include "triosc/report_io.hpp"
#include "triosc/rng.hpp"

using namespace triosc;

namespace {

struct CliRun {
    int exit_code = 0;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    args.insert(args.begin(), "triosc");
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    CliRun r;
    r.exit_code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

const char* kConfigPath = "cli_test_config.json";

void write_test_config() {
    std::ofstream f(kConfigPath);
    f << R"({
  "oscillators": [
    {"mass": {"family": "constant", "params": [1.0]},
     "stiffness": {"family": "constant", "params": [2.0]}},
    {"mass": {"family": "constant", "params": [1.0]},
     "stiffness": {"family": "constant", "params": [3.0]}},
    {"mass": {"family": "constant", "params": [1.0]},
     "stiffness": {"family": "constant", "params": [4.0]}}
  ],
  "couplings": {
    "c12": {"family": "constant", "params": [0.5]},
    "c13": {"family": "constant", "params": [0.5]},
    "c23": {"family": "constant", "params": [0.5]}
  },
  "simulation": {"t0": 0.0, "t1": 1.0, "dt": 0.001, "stride": 100},
  "initial": {"X": [1.0, 0.0, 0.0], "P": [0.0, 0.0, 0.0]}
})";
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("help and missing subcommand exit codes") {
    const CliRun help = run({"--help"});
    CHECK(help.exit_code == 0);
    CHECK(help.out.find("eig") != std::string::npos);
    CHECK(help.out.find("simulate") != std::string::npos);

    const CliRun none = run({});
    CHECK(none.exit_code == 1);
}

TEST_CASE("error kinds round-trip through their names") {
    for (ErrorKind kind : kAllErrorKinds) {
        const auto back = error_kind_from_string(to_string(kind));
        REQUIRE(back.has_value());
        CHECK(*back == kind);
    }
    CHECK(!error_kind_from_string("NotAKind").has_value());
}

TEST_CASE("eig solves a matrix literal and stamps the report header") {
    const CliRun r = run({"eig", "--matrix", "7,1,2;1,6,3;2,3,5"});
    REQUIRE(r.exit_code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j.at("schema_version").get<std::string>() == "1");
    CHECK(j.at("command").get<std::string>() == "eig");
    CHECK(j.at("rng").at("algorithm").get<std::string>() == std::string(kRngName));
    const auto eig = j.at("result").at("robust").at("eigenvalues");
    const double s3 = std::sqrt(3.0);
    CHECK(eig[0].get<double>() == doctest::Approx(4.0 - s3).epsilon(1e-10));
    CHECK(eig[1].get<double>() == doctest::Approx(4.0 + s3).epsilon(1e-10));
    CHECK(eig[2].get<double>() == doctest::Approx(10.0).epsilon(1e-10));
    CHECK(j.at("result").at("verdict").at("robust_matches_oracle").get<bool>());
    CHECK(!j.at("result").at("verdict").at("printed_matches_oracle").get<bool>());
}

TEST_CASE("matrix literal grammar is enforced") {
    CHECK(run({"eig", "--matrix", "1,2,0;2,4,0;0,0,5"}).exit_code == 0);
    // wrong shape
    CHECK(run({"eig", "--matrix", "1,2;2,4"}).exit_code == 1);
    CHECK(run({"eig", "--matrix", "1,2,3;4,5,6"}).exit_code == 1);
    CHECK(run({"eig", "--matrix", "1,2,3,4;5,6,7,8;9,10,11,12"}).exit_code == 1);
    // not a number
    CHECK(run({"eig", "--matrix", "1x,2,0;2,4,0;0,0,5"}).exit_code == 1);
    // mirror entries differ
    const CliRun asym = run({"eig", "--matrix", "1,2,0;3,4,0;0,0,5"});
    CHECK(asym.exit_code == 1);
    CHECK(asym.err.find("symmetric") != std::string::npos);
    // near-mirror is still rejected: the match must be exact
    CHECK(run({"eig", "--matrix", "1,2.0000001,0;2,4,0;0,0,5"}).exit_code == 1);
    // bad mode spelling
    CHECK(run({"eig", "--matrix", "1,0,0;0,2,0;0,0,3", "--mode", "fancy"}).exit_code == 1);
    // out-of-range knobs
    CHECK(run({"eig", "--samples", "0"}).exit_code == 1);
    CHECK(run({"eig", "--matrix", "1,0,0;0,2,0;0,0,3", "--tol", "-1"}).exit_code == 1);
}

TEST_CASE("batch reports are byte-identical across reruns and thread counts") {
    const std::vector<std::string> base{"eig", "--samples", "300", "--seed", "7"};
    std::vector<std::string> one = base;
    one.insert(one.end(), {"--threads", "1"});
    std::vector<std::string> many = base;
    many.insert(many.end(), {"--threads", "7"});

    const CliRun a = run(one);
    const CliRun b = run(many);
    const CliRun c = run(one);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    const Json j = Json::parse(a.out);
    CHECK(j.at("result").at("verdict").at("robust_matches_oracle").get<bool>());
}

TEST_CASE("degenerate modal input produces a structured error and exit 2") {
    const CliRun r = run({"modal", "--matrix", "1,0.5,0.5;0.5,1,0.5;0.5,0.5,1"});
    CHECK(r.exit_code == 2);
    const Json j = Json::parse(r.out);
    CHECK(j.at("error").at("kind").get<std::string>() == "DegenerateCoupling");
    CHECK(!r.err.empty());
}

TEST_CASE("modal subcommand reports the reference construction") {
    const CliRun r = run({"modal", "--matrix", "7,1,2;1,6,3;2,3,5"});
    REQUIRE(r.exit_code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j.at("result").at("basis").at("z").get<double>() ==
          doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(j.at("result").at("basis").at("bracket_sign_flipped").get<bool>());
    CHECK(j.at("result").at("modal_vs_jacobi_multiset").get<double>() <= 1e-10);
}

TEST_CASE("simulate emits aligned CSV and JSON") {
    write_test_config();

    const CliRun csv = run({"simulate", "--config", kConfigPath});
    REQUIRE(csv.exit_code == 0);
    const auto ls = lines_of(csv.out);
    REQUIRE(ls.size() == 12);  // header + t=0 + 9 interior strides + final
    CHECK(ls[0] == "t,x1,x2,x3,p1,p2,p3,energy");
    // every data row carries 8 comma-separated numeric fields
    for (std::size_t i = 1; i < ls.size(); ++i) {
        int commas = 0;
        for (char ch : ls[i]) commas += ch == ',' ? 1 : 0;
        CHECK(commas == 7);
    }

    const CliRun withd = run({"simulate", "--config", kConfigPath, "--compare-decoupling"});
    REQUIRE(withd.exit_code == 0);
    const auto ls2 = lines_of(withd.out);
    CHECK(ls2[0] == "t,x1,x2,x3,p1,p2,p3,energy,D");
    REQUIRE(ls2.size() == 12);
    // D starts at zero for aligned initial conditions
    const std::string& first_row = ls2[1];
    const std::string d0 = first_row.substr(first_row.rfind(',') + 1);
    CHECK(std::abs(std::stod(d0)) <= 1e-12);

    const CliRun js = run({"simulate", "--config", kConfigPath, "--format", "json"});
    REQUIRE(js.exit_code == 0);
    const Json j = Json::parse(js.out);
    CHECK(j.at("result").at("columns").size() == 8);
    CHECK(j.at("result").at("data").size() == 11);

    // csv is simulate-only
    CHECK(run({"eig", "--matrix", "1,0,0;0,2,0;0,0,3", "--format", "csv"}).exit_code == 1);
    // config is required
    CHECK(run({"simulate"}).exit_code == 1);

    std::remove(kConfigPath);
}

TEST_CASE("eig accepts a system config in place of a literal") {
    write_test_config();
    const CliRun r = run({"eig", "--config", kConfigPath});
    REQUIRE(r.exit_code == 0);
    const Json j = Json::parse(r.out);
    const auto m = j.at("result").at("matrix");
    CHECK(m[0][0].get<double>() == doctest::Approx(2.0));
    CHECK(m[0][1].get<double>() == doctest::Approx(0.25));
    CHECK(m[2][2].get<double>() == doctest::Approx(4.0));
    std::remove(kConfigPath);
}

TEST_CASE("reports can be routed to a file") {
    const char* path = "cli_test_out.json";
    const CliRun direct = run({"eig", "--matrix", "7,1,2;1,6,3;2,3,5"});
    const CliRun filed = run({"eig", "--matrix", "7,1,2;1,6,3;2,3,5", "--out", path});
    REQUIRE(filed.exit_code == 0);
    CHECK(filed.out.empty());
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::stringstream buf;
    buf << f.rdbuf();
    CHECK(buf.str() == direct.out);
    f.close();
    std::remove(path);
}

TEST_CASE("verify-mij batch classifies all nine entries") {
    const CliRun r = run({"verify-mij", "--samples", "200"});
    REQUIRE(r.exit_code == 0);
    const Json j = Json::parse(r.out);
    const auto table = j.at("result").at("table");
    REQUIRE(table.size() == 9);
    for (const auto& e : table) {
        const std::string cls = e.at("classification").get<std::string>();
        CHECK((cls == "confirmed" || cls == "deviating"));
    }
    CHECK(j.at("result").at("m33_confirmed").get<bool>());
}

TEST_CASE("verify-rotation verdicts hold on a sampled batch") {
    const CliRun r = run({"verify-rotation", "--samples", "500"});
    REQUIRE(r.exit_code == 0);
    const Json j = Json::parse(r.out);
    const auto v = j.at("result").at("verdict");
    CHECK(v.at("generator_algebra_holds").get<bool>());
    CHECK(v.at("adjoint_orthogonal").get<bool>());
    CHECK(v.at("standard_orthogonal").get<bool>());
    CHECK(v.at("printed_composition_deviates").get<bool>());
    CHECK(v.at("rbar_is_adjoint_action").get<bool>());
}

TEST_CASE("euler-fit subcommand diagonalizes a literal") {
    const CliRun r = run({"euler-fit", "--matrix", "7,1,2;1,6,3;2,3,5"});
    REQUIRE(r.exit_code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j.at("result").at("verdict").at("diagonalized").get<bool>());
}

TEST_CASE("report aggregates every module with stable bytes") {
    const std::vector<std::string> args{"report", "--samples", "60", "--seed", "3"};
    const CliRun a = run(args);
    REQUIRE(a.exit_code == 0);
    const CliRun b = run(args);
    CHECK(a.out == b.out);
    const Json j = Json::parse(a.out);
    const auto v = j.at("result").at("verdicts");
    CHECK(v.at("robust_closed_form_matches_oracle").get<bool>());
    CHECK(!v.at("printed_closed_form_matches_oracle").get<bool>());
    CHECK(v.at("trace_identities_hold").get<bool>());
    CHECK(v.at("m33_confirmed").get<bool>());
    CHECK(v.at("rbar_matches_adjoint_action").get<bool>());
    CHECK(v.at("naive_decoupling_exact_when_constant").get<bool>());
    CHECK(v.at("rk4_order_nominal").get<bool>());
    CHECK(v.at("dudt_discrepancy_observed").get<bool>());
    CHECK(v.at("deviating_mij_entries").size() > 0);
}
