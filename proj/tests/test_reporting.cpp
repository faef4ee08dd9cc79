#include "test_support.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "logosc/commands.hpp"

using namespace logosc;
using test::abs;
using test::rel;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("logosc_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<double>> read_csv(const std::filesystem::path& p, std::string& header) {
    std::ifstream in(p, std::ios::binary);
    std::getline(in, header);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

std::filesystem::path find_file(const std::filesystem::path& dir, const std::string& prefix, const std::string& ext) {
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        const auto name = e.path().filename().string();
        if (name.rfind(prefix, 0) == 0 && e.path().extension() == ext) return e.path();
    }
    FAIL("no file " << prefix << "*" << ext << " in " << dir);
    return {};
}

RunConfig small_config(const std::string& family, const std::filesystem::path& out) {
    RunConfig cfg;
    cfg.family = family;
    cfg.out = out.string();
    cfg.t_count = 5;
    return cfg;
}

}  // namespace

TEST_CASE("config file parsing and flag precedence", "[reporting]") {
    RunConfig cfg;
    for (const auto& [k, v] : parse_config_text("# comment\nfamily = caseB\nk0=64  # trailing\n\nt_end = 50\nn = 0-2,5\ntol-norm = 1e-9\n")) {
        apply_setting(cfg, k, v);
    }
    CHECK(cfg.family == "caseB");
    CHECK(cfg.k0 == 64.0);
    CHECK(cfg.end() == 50.0);
    CHECK(cfg.n_list == std::vector<int>{0, 1, 2, 5});
    CHECK(cfg.tol.norm == 1e-9);
    apply_setting(cfg, "k0", "100");  // a later flag wins
    CHECK(cfg.k0 == 100.0);
    REQUIRE_LOGOSC_ERROR(apply_setting(cfg, "bogus", "1"), ErrorCode::InvalidConfig);
    REQUIRE_LOGOSC_ERROR(apply_setting(cfg, "m0", "1,5"), ErrorCode::InvalidConfig);
    REQUIRE_LOGOSC_ERROR(apply_setting(cfg, "tol-bogus", "1"), ErrorCode::InvalidConfig);
    REQUIRE_LOGOSC_ERROR(parse_config_text("no equals sign"), ErrorCode::InvalidConfig);
}

TEST_CASE("config validation", "[reporting]") {
    RunConfig cfg;
    cfg.validate();
    cfg.family = "caseZ";
    REQUIRE_LOGOSC_ERROR(cfg.validate(), ErrorCode::UnsupportedFamily);
    cfg.family = "all";
    cfg.t_count = 1;
    REQUIRE_LOGOSC_ERROR(cfg.validate(), ErrorCode::InvalidConfig);
    cfg.t_count = 10;
    cfg.tol.ode = 1e-14;
    REQUIRE_LOGOSC_ERROR(cfg.validate(), ErrorCode::InvalidConfig);
}

TEST_CASE("time grids", "[reporting]") {
    RunConfig cfg;
    cfg.t_count = 3;
    auto g = cfg.time_grid();
    CHECK(g[0] == 1.0);
    CHECK_THAT(g[1], rel(10.0, 1e-14));
    CHECK(g[2] == 100.0);
    cfg.spacing = Spacing::Linear;
    g = cfg.time_grid();
    CHECK(g[1] == 50.5);
}

TEST_CASE("number formatting is locale-free and round-trips", "[reporting]") {
    CHECK(csv::format_number(0.5) == "0.5");
    CHECK(csv::format_number(-3.0) == "-3");
    const double v = 0.1 + 0.2;
    CHECK(std::stod(csv::format_number(v)) == v);
    CHECK(csv::format_number(1e-300).find(',') == std::string::npos);
}

TEST_CASE("parameter hash is stable and parameter sensitive", "[reporting]") {
    RunConfig a;
    RunConfig b;
    CHECK(a.parameter_hash(Family::CaseA) == b.parameter_hash(Family::CaseA));
    CHECK(a.parameter_hash(Family::CaseA) != a.parameter_hash(Family::CaseB));
    b.k0 = 101.0;
    CHECK(a.parameter_hash(Family::CaseA) != b.parameter_hash(Family::CaseA));
    CHECK(a.parameter_hash(Family::CaseA).size() == 12);
    CHECK(csv::fnv1a("") == 14695981039346656037ULL);
    CHECK(csv::fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("rho command writes both paths and passes its gates", "[reporting][cli]") {
    const auto dir = scratch_dir("rho");
    RunConfig cfg = small_config("caseB", dir);
    const auto out = cmd_rho(cfg);
    CHECK(out.exit_code == 0);
    CHECK_THAT(out.summary["families"][0]["rho_ratio_end_start"].get<double>(), rel(10.0, 1e-9));
    std::string header;
    const auto rows = read_csv(find_file(dir, "rho_caseB_analytic_", ".csv"), header);
    CHECK(header == "t,rho,rho_dot,residual");
    REQUIRE(rows.size() == 5);
    CHECK_THAT(rows.back()[1] / rows.front()[1], rel(10.0, 1e-9));

    const auto dir_a = scratch_dir("rho_a");
    cmd_rho(small_config("caseA", dir_a));
    const auto rows_a = read_csv(find_file(dir_a, "rho_caseA_analytic_", ".csv"), header);
    for (const auto& r : rows_a) {
        CHECK(r[1] == rows_a.front()[1]);
        CHECK(std::abs(r[3]) < 1e-12);
    }
}

TEST_CASE("rho command rejects a non-positive discriminant", "[reporting][cli]") {
    RunConfig cfg = small_config("caseB", scratch_dir("disc"));
    cfg.k0 = 0.16;  // omega0 t0 = 0.4
    REQUIRE_LOGOSC_ERROR(cmd_rho(cfg), ErrorCode::NonPositiveDiscriminant);
    CHECK(exit_code_for(ErrorCode::NonPositiveDiscriminant) == 5);
}

TEST_CASE("wavefunction slices have definite parity and a normalization sidecar", "[reporting][cli]") {
    const auto dir = scratch_dir("wf");
    RunConfig cfg = small_config("caseC", dir);
    cfg.n_list = {0, 1};
    cfg.t_count = 2;
    cfg.q_count = 101;
    const auto out = cmd_wavefunction(cfg);
    CHECK(out.exit_code == 0);
    std::string header;
    for (int n : {0, 1}) {
        const auto rows = read_csv(find_file(dir, "wavefunction_caseC_n" + std::to_string(n) + "_t1_", ".csv"), header);
        CHECK(header == "q,re_psi,im_psi,abs2_psi");
        REQUIRE(rows.size() == 101);
        const double sign = n == 0 ? 1.0 : -1.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& lo = rows[i];
            const auto& hi = rows[rows.size() - 1 - i];
            CHECK(lo[0] == -hi[0]);
            CHECK(lo[1] == sign * hi[1]);
            CHECK(lo[2] == sign * hi[2]);
        }
        const auto side = json::parse(slurp(find_file(dir, "wavefunction_caseC_n" + std::to_string(n) + "_t1_", ".json")));
        CHECK_THAT(side["normalization"].get<double>(), abs(1.0, 1e-8));
    }
}

TEST_CASE("observables command reports the uncertainty products", "[reporting][cli]") {
    const auto dir = scratch_dir("obs");
    RunConfig cfg = small_config("all", dir);
    cfg.n_list = {0, 1};
    const auto out = cmd_observables(cfg);
    CHECK(out.exit_code == 0);
    const auto& fams = out.summary["families"];
    CHECK_THAT(fams[0]["rows"][0]["product_over_hbar"].get<double>(), rel(0.5, 1e-15));
    CHECK_THAT(fams[1]["rows"][0]["product_over_hbar"].get<double>(), rel(0.500627, 2e-6));
    std::string header;
    const auto rows = read_csv(find_file(dir, "observables_caseB_n0_", ".csv"), header);
    CHECK(header == "t,dq,dp,product,c11,c22");
    CHECK(rows.size() == 5);
}

TEST_CASE("trajectory and phase-diagram commands", "[reporting][cli]") {
    const auto dir = scratch_dir("traj");
    RunConfig cfg = small_config("all", dir);
    cfg.samples = 3000;
    CHECK(cmd_trajectory(cfg).exit_code == 0);
    const auto pd = cmd_phase_diagram(cfg);
    CHECK(pd.exit_code == 0);
    CHECK_THAT(pd.summary["families"][1]["envelope_exponent"].get<double>(), abs(0.5, 0.02));
    CHECK_THAT(pd.summary["families"][2]["envelope_exponent"].get<double>(), abs(-0.5, 0.02));
    std::string header;
    read_csv(find_file(dir, "trajectory_caseA_", ".csv"), header);
    CHECK(header == "t,q,p");
    const auto rows = read_csv(find_file(dir, "phase_diagram_caseA_", ".csv"), header);
    CHECK(header == "q,p");
    CHECK(rows.size() == 3000);
}

TEST_CASE("CSV output is bit-identical across runs and uses LF endings", "[reporting][cli]") {
    const auto d1 = scratch_dir("det1");
    const auto d2 = scratch_dir("det2");
    cmd_trajectory(small_config("caseC", d1));
    cmd_trajectory(small_config("caseC", d2));
    const auto f1 = find_file(d1, "trajectory_caseC_", ".csv");
    const auto f2 = d2 / f1.filename();
    const std::string a = slurp(f1);
    CHECK(a == slurp(f2));
    CHECK(a.find('\r') == std::string::npos);
    CHECK(a.back() == '\n');
}

TEST_CASE("verify on the constant baseline", "[reporting][cli]") {
    RunConfig cfg = small_config("constant", scratch_dir("verify_const"));
    const auto out = cmd_verify(cfg);
    CHECK(out.exit_code == 0);
    CHECK(out.summary["failed"].empty());
}

TEST_CASE("verify fails with a named gate at an unattainable tolerance", "[reporting][cli]") {
    RunConfig cfg = small_config("constant", scratch_dir("verify_tight"));
    cfg.tol.numeric = 1e-15;
    const auto out = cmd_verify(cfg);
    CHECK(out.exit_code == 1);
    bool named = false;
    for (const auto& g : out.summary["failed"]) named = named || g.get<std::string>() == "pinney_numeric_vs_closed_form/constant";
    CHECK(named);
}
