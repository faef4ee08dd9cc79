#pragma once

/**
 * @file observables.hpp
 * @brief Fluctuations, uncertainty products and q–p correlations.
 *
 * C_{1,1} = ½⟨qp + pq⟩ − ⟨q⟩⟨p⟩ and C_{2,2} = ½⟨q²p² + p²q²⟩ − ⟨q²⟩⟨p²⟩.
 * Closed forms are paired with a brute-force moments oracle that integrates
 * the wavefunction and its analytic q-derivative.
 */

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>

#include "error.hpp"
#include "oscillator.hpp"
#include "pinney.hpp"
#include "quadrature.hpp"
#include "quantum_states.hpp"

namespace logosc {

/// Expectation values of one state; p = −iħ∂/∂q.
struct Moments {
    double norm = 0.0;
    double q = 0.0;
    double q2 = 0.0;
    double p = 0.0;
    double p2 = 0.0;
    double qp_sym = 0.0;    ///< ½⟨qp + pq⟩
    double q2p2_sym = 0.0;  ///< ½⟨q²p² + p²q²⟩

    [[nodiscard]] double dq() const { return std::sqrt(std::max(q2 - q * q, 0.0)); }
    [[nodiscard]] double dp() const { return std::sqrt(std::max(p2 - p * p, 0.0)); }
    [[nodiscard]] double product() const { return dq() * dp(); }
    [[nodiscard]] double c11() const { return qp_sym - q * p; }
    [[nodiscard]] double c22() const { return q2p2_sym - q2 * p2; }
};

/**
 * Moments of an arbitrary wavefunction given ψ and ∂ψ/∂q. The integral runs
 * over q ∈ center + scale·[−half_window, half_window]; `scale` should be the
 * state's width so every integrand is O(1). Second-order momentum moments use
 * integration by parts, so only first derivatives are needed:
 *   ⟨p²⟩ = ħ²∫|ψ'|²,  ½⟨q²p² + p²q²⟩ = ħ²∫(q²|ψ'|² + 2q·Re ψ'*ψ).
 * Results are divided by ∫|ψ|².
 */
inline Moments wavefunction_moments(const std::function<cplx(double)>& psi,
                                    const std::function<cplx(double)>& dpsi, double hbar,
                                    double center, double scale, double half_window,
                                    double abs_tol = kStateQuadratureTol) {
    const double s = scale;
    auto integrand = [&](double sigma) {
        const double q = center + s * sigma;
        const cplx f = psi(q);
        const cplx d = dpsi(q);
        const double dens = std::norm(f);
        const double flux = std::imag(std::conj(f) * d);
        const double grad2 = std::norm(d);
        const double mixed = q * q * grad2 + 2.0 * q * std::real(std::conj(d) * f);
        // Each entry is rescaled to be dimensionless in units of the width.
        return std::array<double, 7>{dens * s,         q * dens,         q * q * dens / s,
                                     flux * s * s,     q * flux * s,     grad2 * s * s * s,
                                     mixed * s};
    };
    quad::Options opt;
    opt.abs_tol = abs_tol;
    opt.max_intervals = 20000;
    const auto r = quad::integrate(integrand, -half_window, half_window, opt).value;
    Moments m;
    m.norm = r[0];
    m.q = s * r[1] / r[0];
    m.q2 = s * s * r[2] / r[0];
    m.p = hbar * r[3] / (s * r[0]);
    m.qp_sym = hbar * r[4] / r[0];
    m.p2 = hbar * hbar * r[5] / (s * s * r[0]);
    m.q2p2_sym = hbar * hbar * r[6] / r[0];
    return m;
}

/// Quadrature moments of the eigenstate ψ_n at time t.
inline Moments moments_oracle(const OscillatorSpec& spec, const PinneySolution& solution, int n,
                              double t) {
    if (n < 0 || n > 10) throw Error(ErrorCode::InvalidParameter, "moments oracle covers n <= 10");
    const EigenstateSlice slice(spec, solution, n, t);
    return wavefunction_moments([&](double q) { return slice.value(q); },
                                [&](double q) { return slice.derivative(q); }, spec.hbar(), 0.0,
                                slice.width(), EigenstateSlice::window_sigma(n));
}

struct Fluctuations {
    double dq;
    double dp;
    double product;
};

/// Δq, Δp and ΔqΔp in the coherent state |α, t⟩ (independent of α).
inline Fluctuations coherent_fluctuations(const OscillatorSpec& spec,
                                          const PinneySolution& solution, double t) {
    const double hbar = spec.hbar();
    const double r = solution.rho(t);
    const double x = mass(spec, t) * solution.rho_dot(t) * r;
    const double stretch = std::sqrt(1.0 + x * x);
    const double dq = std::sqrt(hbar / 2.0) * r;
    const double dp = std::sqrt(hbar / 2.0) * stretch / r;
    return {dq, dp, 0.5 * hbar * stretch};
}

struct FockUncertainty {
    double product;
    double c11;
    double c22;
    bool c22_from_oracle;
};

/**
 * ΔqΔp, C_{1,1} and C_{2,2} in ψ_n. With x = m ρ ρ̇ the Fock-state moments give
 * ΔqΔp = (n+½)ħ√(1+x²) and C_{1,1} = (n+½)ħ·x; for the B/C families x = ±1/√(4ω0²t0²−1)
 * (+ for B where ρ grows, − for C). C_{2,2} is closed-form for ρ̇ = 0,
 * −(n² + n + 1)ħ²/2, and taken from the moments oracle otherwise.
 */
inline FockUncertainty fock_uncertainty(const OscillatorSpec& spec, const PinneySolution& solution,
                                        int n, double t) {
    if (n < 0) throw Error(ErrorCode::InvalidParameter, "n must be >= 0");
    const double hbar = spec.hbar();
    const double level = (n + 0.5) * hbar;
    const double nn = static_cast<double>(n);
    const bool closed = solution.kind() == PinneySolution::Kind::ClosedForm;
    if (closed && (spec.family() == Family::CaseA || spec.family() == Family::ConstantBaseline)) {
        return {level, 0.0, -0.5 * (nn * nn + nn + 1.0) * hbar * hbar, false};
    }
    if (closed && (spec.family() == Family::CaseB || spec.family() == Family::CaseC)) {
        spec.require_positive_discriminant();
        const double root = std::sqrt(spec.discriminant());
        const double wt = spec.omega0() * spec.t0();
        const double sign = spec.family() == Family::CaseB ? 1.0 : -1.0;
        const double c22 = moments_oracle(spec, solution, n, t).c22();
        return {2.0 * wt / root * level, sign * level / root, c22, true};
    }
    const double x = mass(spec, t) * solution.rho(t) * solution.rho_dot(t);
    return {level * std::sqrt(1.0 + x * x), level * x, moments_oracle(spec, solution, n, t).c22(),
            true};
}

/// ΔqΔp − (ħ/2)√(1 + (2C_{1,1}/ħ)²); zero for Gaussian pure states.
inline double correlation_identity_residual(double product, double c11, double hbar) {
    const double y = 2.0 * c11 / hbar;
    return product - 0.5 * hbar * std::sqrt(1.0 + y * y);
}

struct ObservableReport {
    enum class State { Coherent, Fock };
    State state = State::Fock;
    int n = 0;
    cplx alpha{};  ///< α(t) for coherent states
    double t = 0.0;
    double dq = 0.0;
    double dp = 0.0;
    double product = 0.0;
    double c11 = 0.0;
    double c22 = 0.0;
    double relation39_residual = 0.0;
};

/// Report for ψ_n built from the moments oracle.
inline ObservableReport fock_report(const OscillatorSpec& spec, const PinneySolution& solution,
                                    int n, double t) {
    const Moments m = moments_oracle(spec, solution, n, t);
    ObservableReport r;
    r.state = ObservableReport::State::Fock;
    r.n = n;
    r.t = t;
    r.dq = m.dq();
    r.dp = m.dp();
    r.product = m.product();
    r.c11 = m.c11();
    r.c22 = m.c22();
    r.relation39_residual = correlation_identity_residual(r.product, r.c11, spec.hbar());
    return r;
}

/**
 * Moments of |α, t⟩, evaluated as the phase-space displaced ground state
 * ψ_α(q) ∝ e^{i p̄ q/ħ} ψ_0(q − q̄) with (q̄, p̄) = (⟨q⟩, ⟨p⟩).
 */
inline Moments coherent_moments(const CoherentStateParams& params, const OscillatorSpec& spec,
                                const PinneySolution& solution, double t) {
    const PhaseSpacePoint centre = coherent_expectations(params, spec, solution, t);
    const EigenstateSlice ground(spec, solution, 0, t);
    const double hbar = spec.hbar();
    const double kick = centre.p / hbar;
    auto psi = [&](double q) { return std::polar(1.0, kick * q) * ground.value(q - centre.q); };
    auto dpsi = [&](double q) {
        return std::polar(1.0, kick * q) *
               (ground.derivative(q - centre.q) + cplx(0.0, kick) * ground.value(q - centre.q));
    };
    return wavefunction_moments(psi, dpsi, hbar, centre.q, ground.width(),
                                EigenstateSlice::window_sigma(0));
}

/// Report for |α, t⟩: fluctuations from the closed form, correlations from quadrature.
inline ObservableReport coherent_report(const CoherentStateParams& params,
                                        const OscillatorSpec& spec, const PinneySolution& solution,
                                        double t) {
    const Fluctuations f = coherent_fluctuations(spec, solution, t);
    const Moments m = coherent_moments(params, spec, solution, t);
    ObservableReport r;
    r.state = ObservableReport::State::Coherent;
    r.alpha = alpha_t(params, spec, solution, t);
    r.t = t;
    r.dq = f.dq;
    r.dp = f.dp;
    r.product = f.product;
    r.c11 = m.c11();
    r.c22 = m.c22();
    r.relation39_residual = correlation_identity_residual(r.product, r.c11, spec.hbar());
    return r;
}

}  // namespace logosc
