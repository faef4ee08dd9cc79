#pragma once

/**
 * @file commands.hpp
 * @brief The CLI subcommands as library functions.
 *
 * Every command writes its artifacts under `cfg.out` and returns a JSON
 * summary plus an exit status: 0 when every gate passes, 1 when a gate fails.
 * Errors propagate as logosc::Error; `exit_code_for` maps them to statuses.
 */

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "classical.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "observables.hpp"
#include "pinney.hpp"
#include "quantum_states.hpp"
#include "verify.hpp"

namespace logosc {

using json = nlohmann::ordered_json;

struct CommandOutcome {
    int exit_code = 0;
    json summary;
};

inline int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidConfig: return 2;
    case ErrorCode::InvalidParameter: return 3;
    case ErrorCode::NonPositiveTime: return 4;
    case ErrorCode::NonPositiveDiscriminant: return 5;
    case ErrorCode::UnsupportedFamily: return 6;
    case ErrorCode::UnsupportedInitialConditions: return 7;
    case ErrorCode::OutOfDomain: return 8;
    case ErrorCode::OrderTooLarge: return 9;
    case ErrorCode::BlowUp: return 10;
    case ErrorCode::StepFailure: return 11;
    case ErrorCode::QuadratureFailure: return 12;
    }
    return 70;
}

inline json error_json(const Error& e) {
    json j;
    j["error"]["code"] = std::string(to_string(e.code()));
    j["error"]["exit_code"] = exit_code_for(e.code());
    j["error"]["message"] = e.what();
    if (const auto* blow = dynamic_cast<const BlowUpError*>(&e)) j["error"]["last_valid_t"] = blow->last_valid_t();
    return j;
}

inline json config_json(const RunConfig& cfg) {
    json j;
    j["family"] = cfg.family;
    j["m0"] = cfg.m0;
    j["k0"] = cfg.k0;
    j["t0"] = cfg.t0;
    j["hbar"] = cfg.hbar;
    j["n"] = cfg.n_list;
    j["t_start"] = cfg.start();
    j["t_end"] = cfg.end();
    j["t_count"] = cfg.t_count;
    j["spacing"] = cfg.spacing == Spacing::Log ? "log" : "linear";
    j["q_max"] = cfg.q_half_width;
    j["q_count"] = cfg.q_count;
    j["q0"] = cfg.q0;
    j["v0"] = cfg.v0;
    j["samples"] = cfg.samples;
    for (const auto& [name, ptr] : RunConfig::tolerance_fields()) j["tol"][std::string(name)] = cfg.tol.*ptr;
    return j;
}

inline json spec_json(const OscillatorSpec& spec) {
    json j;
    j["family"] = std::string(to_string(spec.family()));
    j["m0"] = spec.m0();
    j["k0"] = spec.k0();
    j["t0"] = spec.t0();
    j["hbar"] = spec.hbar();
    j["omega0"] = spec.omega0();
    j["discriminant"] = spec.discriminant();
    return j;
}

namespace command_detail {

inline std::filesystem::path prepare_out(const RunConfig& cfg) {
    const std::filesystem::path dir(cfg.out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw Error(ErrorCode::InvalidConfig, "output directory '" + cfg.out + "' is not writable");
    }
    return dir;
}

inline std::string stem(const std::string& kind, const RunConfig& cfg, Family f, const std::string& extra = {}) {
    std::string s = kind + "_" + std::string(to_string(f));
    if (!extra.empty()) s += "_" + extra;
    return s + "_" + cfg.parameter_hash(f);
}

inline void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidConfig, "cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
}

inline json gate(const std::string& name, double measured, double threshold) {
    json g;
    g["name"] = name;
    g["measured"] = measured;
    g["threshold"] = threshold;
    g["passed"] = std::isfinite(measured) && measured <= threshold;
    return g;
}

inline bool all_passed(const json& gates) {
    for (const auto& g : gates) {
        if (!g["passed"].get<bool>()) return false;
    }
    return true;
}

inline void require_after_t0(const RunConfig& cfg) {
    if (cfg.start() < cfg.t0) {
        throw Error(ErrorCode::OutOfDomain, "t-start must be >= t0 for this command");
    }
}

}  // namespace command_detail

/// ρ on the time grid for the closed-form and numeric paths.
inline CommandOutcome cmd_rho(const RunConfig& cfg) {
    using namespace command_detail;
    cfg.validate();
    const auto dir = prepare_out(cfg);
    const auto grid = cfg.time_grid();
    CommandOutcome outcome;
    outcome.summary["command"] = "rho";
    outcome.summary["config"] = config_json(cfg);
    bool ok = true;
    for (Family f : cfg.families()) {
        const OscillatorSpec spec = cfg.spec(f);
        const PinneySolution closed = analytic_rho(spec);
        const double a = cfg.start();
        const PinneySolution numeric =
            solve_pinney_numeric(spec, closed.rho(a), closed.rho_dot(a), a, cfg.end(), cfg.tol.ode);

        const std::string base = stem("rho", cfg, f);
        csv::Writer analytic_csv(dir / (stem("rho", cfg, f, "analytic") + ".csv"), {"t", "rho", "rho_dot", "residual"});
        csv::Writer numeric_csv(dir / (stem("rho", cfg, f, "numeric") + ".csv"), {"t", "rho", "rho_dot", "residual"});
        double worst_residual = 0.0;
        double sup_error = 0.0;
        for (double t : grid) {
            analytic_csv.row({t, closed.rho(t), closed.rho_dot(t), pinney_residual(spec, closed, t)});
            numeric_csv.row({t, numeric.rho(t), numeric.rho_dot(t), pinney_residual(spec, numeric, t)});
            worst_residual = std::max(worst_residual, pinney_residual_normalized(spec, closed, t));
            sup_error = std::max(sup_error, std::abs(numeric.rho(t) - closed.rho(t)) / closed.rho(t));
        }
        json gates = json::array();
        gates.push_back(gate("pinney_residual", worst_residual, cfg.tol.pinney));
        gates.push_back(gate("pinney_numeric_vs_closed_form", sup_error, cfg.tol.numeric));

        json entry;
        entry["spec"] = spec_json(spec);
        entry["files"] = {analytic_csv.path().filename().string(), numeric_csv.path().filename().string()};
        entry["rho_ratio_end_start"] = closed.rho(cfg.end()) / closed.rho(a);
        entry["numeric_steps"] = numeric.steps();
        entry["gates"] = gates;
        write_json(dir / (base + ".json"), entry);
        ok = ok && all_passed(gates);
        outcome.summary["families"].push_back(entry);
    }
    outcome.summary["passed"] = ok;
    outcome.exit_code = ok ? 0 : 1;
    return outcome;
}

/// ψ_n(q, t) slices on the symmetric grid q_i = a(2i − (N−1))/(N−1).
inline CommandOutcome cmd_wavefunction(const RunConfig& cfg) {
    using namespace command_detail;
    cfg.validate();
    require_after_t0(cfg);
    const auto dir = prepare_out(cfg);
    const auto grid = cfg.time_grid();
    const int N = cfg.q_count;
    CommandOutcome outcome;
    outcome.summary["command"] = "wavefunction";
    outcome.summary["config"] = config_json(cfg);
    bool ok = true;
    double worst_norm = 0.0;
    std::size_t files = 0;
    for (Family f : cfg.families()) {
        const OscillatorSpec spec = cfg.spec(f);
        const PinneySolution sol = analytic_rho(spec);
        for (int n : cfg.n_list) {
            check_hermite_order(n);
            for (std::size_t k = 0; k < grid.size(); ++k) {
                const double t = grid[k];
                const EigenstateSlice slice(spec, sol, n, t);
                const double a = cfg.q_half_width > 0.0 ? cfg.q_half_width
                                                        : (std::sqrt(2.0 * n + 1.0) + 4.0) * slice.width();
                const std::string tag = "n" + std::to_string(n) + "_t" + std::to_string(k);
                csv::Writer out(dir / (stem("wavefunction", cfg, f, tag) + ".csv"), {"q", "re_psi", "im_psi", "abs2_psi"});
                for (int i = 0; i < N; ++i) {
                    const double q = a * (2.0 * i - (N - 1)) / (N - 1);
                    const cplx v = slice.value(q);
                    out.row({q, v.real(), v.imag(), std::norm(v)});
                }
                const double norm = normalization(spec, sol, n, t);
                json side;
                side["spec"] = spec_json(spec);
                side["n"] = n;
                side["t"] = t;
                side["rho"] = slice.rho();
                side["rho_dot"] = slice.rho_dot();
                side["lewis_phase"] = slice.phase();
                side["q_max"] = a;
                side["normalization"] = norm;
                side["gates"] = json::array({gate("normalization", std::abs(norm - 1.0), cfg.tol.norm)});
                write_json(dir / (stem("wavefunction", cfg, f, tag) + ".json"), side);
                worst_norm = std::max(worst_norm, std::abs(norm - 1.0));
                ok = ok && all_passed(side["gates"]);
                ++files;
            }
        }
    }
    outcome.summary["slices"] = files;
    outcome.summary["gates"] = json::array({gate("normalization", worst_norm, cfg.tol.norm)});
    outcome.summary["passed"] = ok;
    outcome.exit_code = ok ? 0 : 1;
    return outcome;
}

/// Fock-state and coherent-state fluctuations over the time grid.
inline CommandOutcome cmd_observables(const RunConfig& cfg) {
    using namespace command_detail;
    cfg.validate();
    require_after_t0(cfg);
    const auto dir = prepare_out(cfg);
    const auto grid = cfg.time_grid();
    CommandOutcome outcome;
    outcome.summary["command"] = "observables";
    outcome.summary["config"] = config_json(cfg);
    bool ok = true;
    for (Family f : cfg.families()) {
        const OscillatorSpec spec = cfg.spec(f);
        const PinneySolution sol = analytic_rho(spec);
        const double hbar = spec.hbar();
        json entry;
        entry["spec"] = spec_json(spec);
        double product_err = 0.0;
        double c11_err = 0.0;
        double gaussian_identity = 0.0;
        for (int n : cfg.n_list) {
            csv::Writer out(dir / (stem("observables", cfg, f, "n" + std::to_string(n)) + ".csv"),
                            {"t", "dq", "dp", "product", "c11", "c22"});
            const FockUncertainty first = fock_uncertainty(spec, sol, n, grid.front());
            double max_residual = 0.0;
            for (double t : grid) {
                const ObservableReport rep = fock_report(spec, sol, n, t);
                const FockUncertainty closed = fock_uncertainty(spec, sol, n, t);
                out.row({t, rep.dq, rep.dp, rep.product, rep.c11, rep.c22});
                product_err = std::max(product_err, std::abs(rep.product - closed.product) / closed.product);
                c11_err = std::max(c11_err, std::abs(rep.c11 - closed.c11));
                max_residual = std::max(max_residual, std::abs(rep.relation39_residual));
                if (n == 0) gaussian_identity = std::max(gaussian_identity, std::abs(rep.relation39_residual));
            }
            json row;
            row["state"] = "fock";
            row["n"] = n;
            row["product"] = first.product;
            row["product_over_hbar"] = first.product / hbar;
            row["c11"] = first.c11;
            row["c22"] = first.c22;
            row["c22_source"] = first.c22_from_oracle ? "oracle" : "closed_form";
            row["relation39_residual_max"] = max_residual;
            row["file"] = out.path().filename().string();
            entry["rows"].push_back(row);
        }

        const CoherentStateParams alpha = calibrate_coherent(spec, sol, cfg.q0, cfg.v0);
        csv::Writer out(dir / (stem("observables", cfg, f, "coherent") + ".csv"),
                        {"t", "dq", "dp", "product", "c11", "c22"});
        for (double t : grid) {
            const ObservableReport rep = coherent_report(alpha, spec, sol, t);
            out.row({t, rep.dq, rep.dp, rep.product, rep.c11, rep.c22});
            gaussian_identity = std::max(gaussian_identity, std::abs(rep.relation39_residual));
        }
        const ObservableReport head = coherent_report(alpha, spec, sol, grid.front());
        json row;
        row["state"] = "coherent";
        row["alpha0"] = {alpha.u, alpha.v};
        row["product"] = head.product;
        row["product_over_hbar"] = head.product / hbar;
        row["c11"] = head.c11;
        row["c22"] = head.c22;
        row["file"] = out.path().filename().string();
        entry["rows"].push_back(row);

        json gates = json::array();
        gates.push_back(gate("fock_product_oracle", product_err, cfg.tol.observables));
        gates.push_back(gate("fock_c11_oracle", c11_err, cfg.tol.c11));
        gates.push_back(gate("correlation_identity", gaussian_identity, cfg.tol.identity));
        entry["gates"] = gates;
        write_json(dir / (stem("observables", cfg, f) + ".json"), entry);
        ok = ok && all_passed(gates);
        outcome.summary["families"].push_back(entry);
    }
    outcome.summary["passed"] = ok;
    outcome.exit_code = ok ? 0 : 1;
    return outcome;
}

/// Numeric (q, p) trajectory; cross-checked against the closed form when one applies.
inline CommandOutcome cmd_trajectory(const RunConfig& cfg) {
    using namespace command_detail;
    cfg.validate();
    require_after_t0(cfg);
    const auto dir = prepare_out(cfg);
    auto grid = cfg.time_grid();
    CommandOutcome outcome;
    outcome.summary["command"] = "trajectory";
    outcome.summary["config"] = config_json(cfg);
    bool ok = true;
    for (Family f : cfg.families()) {
        const OscillatorSpec spec = cfg.spec(f);
        const Trajectory tr = integrate_eom(spec, cfg.q0, cfg.v0, grid, cfg.tol.trajectory_ode);
        csv::Writer out(dir / (stem("trajectory", cfg, f) + ".csv"), {"t", "q", "p"});
        for (std::size_t i = 0; i < tr.times.size(); ++i) out.row({tr.times[i], tr.q[i], tr.p[i]});
        json entry;
        entry["spec"] = spec_json(spec);
        entry["files"].push_back(out.path().filename().string());
        json gates = json::array();
        if (cfg.q0 == 1.0 && cfg.v0 == 0.0) {
            const Trajectory closed = closed_form_trajectory(spec, 1.0, 0.0, grid);
            csv::Writer cf(dir / (stem("trajectory", cfg, f, "closed") + ".csv"), {"t", "q", "p"});
            for (std::size_t i = 0; i < closed.times.size(); ++i) cf.row({closed.times[i], closed.q[i], closed.p[i]});
            entry["files"].push_back(cf.path().filename().string());
            gates.push_back(gate("trajectory_numeric_vs_closed_form", verify_detail::sup_relative(tr, closed),
                                 cfg.tol.trajectory));
        }
        entry["gates"] = gates;
        write_json(dir / (stem("trajectory", cfg, f) + ".json"), entry);
        ok = ok && all_passed(gates);
        outcome.summary["families"].push_back(entry);
    }
    outcome.summary["passed"] = ok;
    outcome.exit_code = ok ? 0 : 1;
    return outcome;
}

/// (q, p) orbit on `samples` log-spaced points over [t0, t-end].
inline CommandOutcome cmd_phase_diagram(const RunConfig& cfg) {
    using namespace command_detail;
    cfg.validate();
    const auto dir = prepare_out(cfg);
    CommandOutcome outcome;
    outcome.summary["command"] = "phase-diagram";
    outcome.summary["config"] = config_json(cfg);
    bool ok = true;
    for (Family f : cfg.families()) {
        const OscillatorSpec spec = cfg.spec(f);
        const Trajectory tr = phase_diagram(spec, cfg.q0, cfg.v0, cfg.end(), static_cast<std::size_t>(cfg.samples),
                                            cfg.tol.trajectory_ode);
        csv::Writer out(dir / (stem("phase_diagram", cfg, f) + ".csv"), {"q", "p"});
        for (std::size_t i = 0; i < tr.times.size(); ++i) out.row({tr.q[i], tr.p[i]});
        json entry;
        entry["spec"] = spec_json(spec);
        entry["file"] = out.path().filename().string();
        json gates = json::array();
        if (f == Family::CaseA) {
            const double scale = spec.m0() * spec.omega0();
            const double r0 = cfg.q0 * cfg.q0 + std::pow(spec.m0() * cfg.v0 / scale, 2);
            double dev = 0.0;
            for (std::size_t i = 0; i < tr.q.size(); ++i) {
                dev = std::max(dev, std::abs(tr.q[i] * tr.q[i] + std::pow(tr.p[i] / scale, 2) - r0) / r0);
            }
            gates.push_back(gate("closed_orbit", dev, cfg.tol.orbit));
        }
        if (f == Family::CaseB || f == Family::CaseC) {
            const auto peaks = oscillation_peaks(tr.times, tr.q);
            if (peaks.size() >= 3) {
                const PowerLawFit fit = fit_power_law(peaks);
                const double target = f == Family::CaseB ? 0.5 : -0.5;
                entry["envelope_exponent"] = fit.exponent;
                entry["envelope_peaks"] = peaks.size();
                gates.push_back(gate("envelope_exponent", std::abs(fit.exponent - target), cfg.tol.envelope));
            }
        }
        entry["gates"] = gates;
        write_json(dir / (stem("phase_diagram", cfg, f) + ".json"), entry);
        ok = ok && all_passed(gates);
        outcome.summary["families"].push_back(entry);
    }
    outcome.summary["passed"] = ok;
    outcome.exit_code = ok ? 0 : 1;
    return outcome;
}

inline json verify_json(const VerifyReport& report) {
    json j = json::array();
    for (const auto& g : report.gates) {
        json e;
        e["name"] = g.name;
        e["family"] = g.family;
        e["measured"] = g.measured;
        e["threshold"] = g.threshold;
        e["passed"] = g.passed;
        e["detail"] = g.detail;
        j.push_back(e);
    }
    return j;
}

/// Runs the invariant suite; exit status 0 iff every gate passes.
inline CommandOutcome cmd_verify(const RunConfig& cfg) {
    using namespace command_detail;
    cfg.validate();
    const auto dir = prepare_out(cfg);
    const VerifyReport report = run_verify(cfg);
    CommandOutcome outcome;
    outcome.summary["command"] = "verify";
    outcome.summary["config"] = config_json(cfg);
    outcome.summary["gates"] = verify_json(report);
    json failed = json::array();
    for (const auto& g : report.gates) {
        if (!g.passed) failed.push_back(g.name + "/" + g.family);
    }
    outcome.summary["failed"] = failed;
    outcome.summary["passed"] = report.all_passed();
    std::string tag;
    for (Family f : cfg.families()) tag += cfg.canonical(f) + "|";
    write_json(dir / ("verify_" + RunConfig::lower(cfg.family) + "_" + csv::hex_tag(csv::fnv1a(tag)) + ".json"),
               outcome.summary);
    outcome.summary["seconds"] = report.seconds;
    outcome.exit_code = report.all_passed() ? 0 : 1;
    return outcome;
}

}  // namespace logosc
