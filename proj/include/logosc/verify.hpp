#pragma once

/**
 * @file verify.hpp
 * @brief The end-to-end invariant suite behind `logosc verify`.
 *
 * Each gate reduces one check to a scalar error measure and a threshold;
 * a gate passes iff measured <= threshold.
 */

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "classical.hpp"
#include "config.hpp"
#include "observables.hpp"
#include "pinney.hpp"
#include "quantum_states.hpp"

namespace logosc {

struct GateResult {
    std::string name;
    std::string family;
    double measured = 0.0;
    double threshold = 0.0;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<GateResult> gates;
    double seconds = 0.0;

    [[nodiscard]] bool all_passed() const {
        return std::all_of(gates.begin(), gates.end(), [](const GateResult& g) { return g.passed; });
    }
};

namespace verify_detail {

inline constexpr int kMaxOrder = 6;

class Recorder {
public:
    explicit Recorder(std::vector<GateResult>& out) : out_(out) {}

    void add(std::string name, Family f, double measured, double threshold, std::string detail = {}) {
        const bool ok = std::isfinite(measured) && measured <= threshold;
        out_.push_back({std::move(name), std::string(to_string(f)), measured, threshold, ok,
                        std::move(detail)});
    }

private:
    std::vector<GateResult>& out_;
};

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline std::vector<double> probe_times(const OscillatorSpec& spec) {
    const double t0 = spec.t0();
    return {t0, 3.0 * t0, 30.0 * t0};
}

inline std::vector<double> grid_for(const OscillatorSpec& spec, std::size_t count) {
    const double t0 = spec.t0();
    if (spec.family() == Family::ConstantBaseline) return linear_grid(t0, 100.0 * t0, count);
    return log_grid(t0, 100.0 * t0, count);
}

inline void pinney_gates(Recorder& rec, const OscillatorSpec& spec, const RunConfig& cfg) {
    const Family f = spec.family();
    const PinneySolution closed = analytic_rho(spec);
    const auto grid = grid_for(spec, 200);
    double worst = 0.0;
    for (double t : grid) worst = std::max(worst, pinney_residual_normalized(spec, closed, t));
    rec.add("pinney_residual", f, worst, cfg.tol.pinney, "max |residual|/|omega^2 rho| on 200 points");

    const double t0 = spec.t0();
    const PinneySolution numeric = solve_pinney_numeric(spec, closed.rho(t0), closed.rho_dot(t0), t0,
                                                        100.0 * t0, cfg.tol.ode);
    double sup = 0.0;
    for (double t : grid_for(spec, 2000)) sup = std::max(sup, rel(numeric.rho(t), closed.rho(t)));
    rec.add("pinney_numeric_vs_closed_form", f, sup, cfg.tol.numeric, "relative sup error over [t0, 100 t0]");
}

inline void wavefunction_gates(Recorder& rec, const OscillatorSpec& spec, const RunConfig& cfg) {
    const Family f = spec.family();
    const PinneySolution sol = analytic_rho(spec);
    const double t0 = spec.t0();
    const std::vector<double> times{t0, 3.0 * t0, 10.0 * t0, 50.0 * t0};

    double norm_err = 0.0;
    double ortho_err = 0.0;
    for (double t : times) {
        for (int n = 0; n <= kMaxOrder; ++n) {
            norm_err = std::max(norm_err, std::abs(normalization(spec, sol, n, t) - 1.0));
            for (int m = n + 1; m <= kMaxOrder; ++m) {
                ortho_err = std::max(ortho_err, std::abs(overlap(spec, sol, n, m, t)));
            }
        }
    }
    rec.add("normalization", f, norm_err, cfg.tol.norm, "max |<n|n> - 1|, n <= 6, four times");
    rec.add("orthogonality", f, ortho_err, cfg.tol.ortho, "max |<n|m>|, n != m <= 6, four times");

    std::mt19937_64 rng(20240611ULL + static_cast<unsigned>(f));
    std::uniform_real_distribution<double> log_t(std::log(1.5 * t0), std::log(50.0 * t0));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_int_distribution<int> order(0, kMaxOrder);
    double worst = 0.0;
    int accepted = 0;
    while (accepted < 20) {
        const double t = std::exp(log_t(rng));
        const int n = order(rng);
        const EigenstateSlice slice(spec, sol, n, t);
        const double reach = std::sqrt(2.0 * n + 1.0) + 1.0;
        const double q = unit(rng) * reach * slice.width();
        double peak = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double qq = (-1.0 + i / 200.0) * reach * slice.width();
            peak = std::max(peak, std::abs(slice.value(qq)));
        }
        const cplx psi = slice.value(q);
        if (std::abs(psi) < 1e-2 * peak) continue;
        const double h_t = 1e-4 / omega(spec, t);
        const double h_q = 3e-4 * slice.width();
        const cplx res = schrodinger_residual(spec, sol, n, q, t, h_t, h_q);
        worst = std::max(worst, std::abs(res) / (spec.hbar() * omega(spec, t) * std::abs(psi)));
        ++accepted;
    }
    rec.add("schrodinger_residual", f, worst, cfg.tol.schrodinger,
            "max |residual|/(hbar omega |psi|) at 20 random points");
}

inline void observable_gates(Recorder& rec, const OscillatorSpec& spec, const RunConfig& cfg) {
    const Family f = spec.family();
    const PinneySolution sol = analytic_rho(spec);
    const double hbar = spec.hbar();
    const auto times = probe_times(spec);

    double product_oracle = 0.0;
    double c11_oracle = 0.0;
    double c22_ladder = 0.0;
    double c22_printed = 0.0;
    double bound_violation = 0.0;
    double product_formula = 0.0;
    for (double t : times) {
        for (int n = 0; n <= kMaxOrder; ++n) {
            const Moments m = moments_oracle(spec, sol, n, t);
            const FockUncertainty closed = fock_uncertainty(spec, sol, n, t);
            const double level = (n + 0.5) * hbar;
            product_oracle = std::max(product_oracle, rel(m.product(), closed.product));
            c11_oracle = std::max(c11_oracle, std::abs(m.c11() - closed.c11));
            const double nn = n;
            if (f == Family::CaseA || f == Family::ConstantBaseline) {
                product_formula = std::max(product_formula, std::abs(closed.product - level));
                c22_ladder = std::max(c22_ladder, rel(m.c22(), -0.5 * (nn * nn + nn + 1.0) * hbar * hbar));
            }
            if (f == Family::CaseA) {
                c22_printed = std::max(c22_printed, rel(m.c22(), -(nn * nn + nn + 0.5) * hbar * hbar));
            }
            if (f == Family::CaseB || f == Family::CaseC) {
                const double D = spec.discriminant();
                const double expected = 2.0 * spec.omega0() * spec.t0() / std::sqrt(D) * level;
                product_formula = std::max(product_formula, rel(closed.product, expected));
            }
            if (n >= 1) {
                bound_violation = std::max(bound_violation,
                                           -correlation_identity_residual(m.product(), m.c11(), hbar));
            }
        }
    }
    if (f == Family::CaseA || f == Family::ConstantBaseline) {
        rec.add("fock_product_closed_form", f, product_formula, 0.0, "|closed-form product - (n+1/2) hbar|");
    } else {
        rec.add("fock_product_closed_form", f, product_formula, cfg.tol.observables,
                "closed-form product vs 2 w0 t0/sqrt(4 w0^2 t0^2 - 1) (n+1/2) hbar, relative");
    }
    rec.add("fock_product_oracle", f, product_oracle, cfg.tol.observables,
            "moments oracle vs closed form, relative, n <= 6, t in {t0, 3t0, 30t0}");
    rec.add("fock_c11_oracle", f, c11_oracle, cfg.tol.c11, "|oracle C11 - closed form C11|");
    if (f == Family::CaseA || f == Family::ConstantBaseline) {
        rec.add("fock_c22_ladder", f, c22_ladder, cfg.tol.observables,
                "oracle C22 vs -(n^2+n+1) hbar^2/2, relative");
    }
    if (f == Family::CaseA) {
        rec.add("fock_c22_caseA_printed", f, c22_printed, cfg.tol.observables,
                "oracle C22 vs -(n^2+n+1/2) hbar^2, relative");
    }
    rec.add("uncertainty_bound", f, std::max(bound_violation, 0.0), cfg.tol.identity,
            "product >= (hbar/2) sqrt(1 + (2 C11/hbar)^2) for n >= 1");

    // Gaussian states: ground state and the coherent state released at (1, 0).
    double identity = 0.0;
    const CoherentStateParams alpha = calibrate_coherent(spec, sol, 1.0, 0.0);
    for (double t : times) {
        const Moments m0 = moments_oracle(spec, sol, 0, t);
        identity = std::max(identity, std::abs(correlation_identity_residual(m0.product(), m0.c11(), hbar)));
        const ObservableReport rep = coherent_report(alpha, spec, sol, t);
        identity = std::max(identity, std::abs(rep.relation39_residual));
    }
    rec.add("correlation_identity", f, identity, cfg.tol.identity,
            "|product - (hbar/2) sqrt(1 + (2 C11/hbar)^2)| for ground and coherent states");
}

inline double sup_relative(const Trajectory& a, const Trajectory& b) {
    double dq = 0.0, dp = 0.0, sq = 0.0, sp = 0.0;
    for (std::size_t i = 0; i < a.times.size(); ++i) {
        dq = std::max(dq, std::abs(a.q[i] - b.q[i]));
        dp = std::max(dp, std::abs(a.p[i] - b.p[i]));
        sq = std::max(sq, std::abs(b.q[i]));
        sp = std::max(sp, std::abs(b.p[i]));
    }
    return std::max(dq / sq, dp / sp);
}

inline void classical_gates(Recorder& rec, const OscillatorSpec& spec, const RunConfig& cfg) {
    const Family f = spec.family();
    const auto grid = grid_for(spec, 2000);
    const Trajectory numeric = integrate_eom(spec, 1.0, 0.0, grid, cfg.tol.trajectory_ode);
    const Trajectory closed = closed_form_trajectory(spec, 1.0, 0.0, grid);
    rec.add("trajectory_numeric_vs_closed_form", f, sup_relative(numeric, closed), cfg.tol.trajectory,
            "relative sup error of (q, p) over [t0, 100 t0]");

    if (f == Family::CaseA) {
        const PinneySolution sol = analytic_rho(spec);
        const CoherentStateParams alpha = calibrate_coherent(spec, sol, 1.0, 0.0);
        double worst = 0.0;
        for (double t : grid) {
            const auto qp = coherent_expectations(alpha, spec, sol, t);
            const auto cl = closed_form_state(spec, t);
            worst = std::max({worst, std::abs(qp.q - cl.q), std::abs(qp.p - cl.p) / (spec.m0() * spec.omega0())});
        }
        rec.add("coherent_vs_classical", f, worst, cfg.tol.coherent, "max |<q> - q_cl|, |<p> - p_cl|/(m0 w0)");

        const Trajectory orbit = phase_diagram(spec, 1.0, 0.0, 100.0 * spec.t0(),
                                               static_cast<std::size_t>(cfg.samples), cfg.tol.trajectory_ode);
        double dev = 0.0;
        const double scale = spec.m0() * spec.omega0();
        for (std::size_t i = 0; i < orbit.times.size(); ++i) {
            const double r = orbit.q[i] * orbit.q[i] + std::pow(orbit.p[i] / scale, 2);
            dev = std::max(dev, std::abs(r - 1.0));
        }
        rec.add("closed_orbit", f, dev, cfg.tol.orbit, "max |q^2 + (p/(m0 w0))^2 - 1| on the phase diagram");

        const double w0t0 = spec.omega0() * spec.t0();
        const double t_end = spec.t0() * std::exp(21.5 * std::numbers::pi / w0t0);
        const ClassicalFlow flow = integrate_flow(spec, 1.0, 0.0, t_end, std::min(cfg.tol.trajectory_ode, 1e-12));
        const auto roots = zero_crossings(flow, spec.t0(), t_end);
        double err = roots.size() >= 21 ? 0.0 : std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < std::min<std::size_t>(roots.size(), 21); ++k) {
            const double expected = (k + 0.5) * std::numbers::pi / w0t0;
            err = std::max(err, std::abs(std::log(roots[k] / spec.t0()) - expected));
        }
        rec.add("zero_crossing_log_period", f, err, cfg.tol.crossing, "max |ln(t_k/t0) - (k+1/2) pi/(w0 t0)|, k <= 20");
    }

    if (f == Family::CaseB || f == Family::CaseC) {
        const Trajectory dense = integrate_eom(spec, 1.0, 0.0, log_grid(spec.t0(), 100.0 * spec.t0(), 20000),
                                               cfg.tol.trajectory_ode);
        const PowerLawFit fit = fit_power_law(oscillation_peaks(dense.times, dense.q));
        const double target = f == Family::CaseB ? 0.5 : -0.5;
        rec.add("envelope_exponent", f, std::abs(fit.exponent - target), cfg.tol.envelope,
                "|fitted exponent - (" + csv::format_number(target) + ")|, fitted " +
                    csv::format_number(fit.exponent));
    }
}

}  // namespace verify_detail

/// Runs every gate for the configured families. Physical parameters come from
/// `cfg`; probe points and orders are fixed by the suite.
inline VerifyReport run_verify(const RunConfig& cfg) {
    const auto started = std::chrono::steady_clock::now();
    VerifyReport report;
    verify_detail::Recorder rec(report.gates);
    for (Family f : cfg.families()) {
        const OscillatorSpec spec = cfg.spec(f);
        if (f == Family::CaseB || f == Family::CaseC) spec.require_positive_discriminant();
        verify_detail::pinney_gates(rec, spec, cfg);
        verify_detail::wavefunction_gates(rec, spec, cfg);
        verify_detail::observable_gates(rec, spec, cfg);
        verify_detail::classical_gates(rec, spec, cfg);
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

}  // namespace logosc
