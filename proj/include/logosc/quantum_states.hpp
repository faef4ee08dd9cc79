#pragma once

/**
 * @file quantum_states.hpp
 * @brief Exact Schrödinger solutions built from a Pinney solution ρ(t).
 *
 *   ψ_n(q,t) = e^{iθ_n(t)} [1/(√π √ħ n! 2ⁿ ρ)]^{1/2}
 *              · exp[(i m / 2ħ)(ρ̇/ρ + i/(mρ²)) q²] · H_n(q / (√ħ ρ)),
 *   θ_n(t)   = −(n + ½) ∫_{t0}^{t} dt' / (m ρ²).
 *
 * Coherent states are parameterised by α(t0) = u + iv; the eigenvalue of the
 * time-dependent annihilation operator rotates as α(t) = α(t0)·e^{2iθ_0(t)}.
 */

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "error.hpp"
#include "hermite.hpp"
#include "oscillator.hpp"
#include "pinney.hpp"
#include "quadrature.hpp"

namespace logosc {

using cplx = std::complex<double>;

struct WaveFunctionSample {
    cplx value;
    double lewis_phase;       ///< θ_n(t) in radians
    cplx gaussian_exponent;   ///< (i m / 2ħ)(ρ̇/ρ + i/(mρ²))·q²
    double hermite_factor;    ///< H_n(q / √ħρ)
    double norm_prefactor;    ///< [1/(√π √ħ n! 2ⁿ ρ)]^{1/2}
};

struct CoherentStateParams {
    double u = 0.0;
    double v = 0.0;

    [[nodiscard]] cplx alpha0() const { return {u, v}; }
};

struct PhaseSpacePoint {
    double q;
    double p;
};

namespace detail {

inline void require_phase_domain(const OscillatorSpec& spec, const PinneySolution& solution,
                                 double t) {
    if (!(t >= spec.t0())) {
        throw Error(ErrorCode::OutOfDomain,
                    "phase needs t >= t0 (t = " + std::to_string(t) + ")");
    }
    if (!solution.in_domain(spec.t0()) || !solution.in_domain(t)) {
        throw Error(ErrorCode::OutOfDomain, "solution does not cover [t0, t]");
    }
}

}  // namespace detail

/// ∫_{t0}^{t} dt'/(m ρ²) by adaptive quadrature in ln t'.
inline double phase_integral_quadrature(const OscillatorSpec& spec, const PinneySolution& solution,
                                        double t, double abs_tol = 1e-11) {
    detail::require_phase_domain(spec, solution, t);
    if (t == spec.t0()) return 0.0;
    auto integrand = [&](double u) {
        const double tt = std::exp(u);
        const double r = solution.rho(tt);
        return tt / (mass(spec, tt) * r * r);
    };
    quad::Options opt;
    opt.abs_tol = abs_tol;
    opt.max_intervals = 20000;
    return quad::integrate(integrand, std::log(spec.t0()), std::log(t), opt).value;
}

/// ∫_{t0}^{t} dt'/(m ρ²), closed form when the solution is.
inline double phase_integral(const OscillatorSpec& spec, const PinneySolution& solution, double t) {
    detail::require_phase_domain(spec, solution, t);
    if (solution.kind() == PinneySolution::Kind::ClosedForm) {
        const double log_ratio = std::log(t / spec.t0());
        switch (spec.family()) {
        case Family::CaseA: return spec.omega0() * spec.t0() * log_ratio;
        case Family::CaseB:
        case Family::CaseC: return 0.5 * std::sqrt(spec.discriminant()) * log_ratio;
        case Family::ConstantBaseline: return spec.omega0() * (t - spec.t0());
        case Family::UserDefined: break;
        }
    }
    return phase_integral_quadrature(spec, solution, t);
}

/// θ_n(t).
inline double lewis_phase(const OscillatorSpec& spec, const PinneySolution& solution, int n,
                          double t) {
    if (n < 0) throw Error(ErrorCode::InvalidParameter, "n must be >= 0");
    return -(n + 0.5) * phase_integral(spec, solution, t);
}

/// ψ_n(·, t) with every t-dependent factor evaluated once.
class EigenstateSlice {
public:
    EigenstateSlice(const OscillatorSpec& spec, const PinneySolution& solution, int n, double t)
        : n_(n), t_(t) {
        check_hermite_order(n);
        hbar_ = spec.hbar();
        m_ = logosc::mass(spec, t);
        rho_ = solution.rho(t);
        rho_dot_ = solution.rho_dot(t);
        phase_ = lewis_phase(spec, solution, n, t);
        double fact2n = 1.0;
        for (int k = 1; k <= n; ++k) fact2n *= 2.0 * k;
        prefactor_ = std::sqrt(1.0 / (std::sqrt(std::numbers::pi) * std::sqrt(hbar_) * fact2n * rho_));
        beta_ = cplx(0.0, m_ / (2.0 * hbar_)) * cplx(rho_dot_ / rho_, 1.0 / (m_ * rho_ * rho_));
        width_ = std::sqrt(hbar_) * rho_;
    }

    [[nodiscard]] WaveFunctionSample sample(double q) const {
        const double h = hermite(n_, q / width_);
        const cplx g = beta_ * (q * q);
        const cplx value = prefactor_ * std::polar(1.0, phase_) * std::exp(g) * h;
        return {value, phase_, g, h, prefactor_};
    }

    [[nodiscard]] cplx value(double q) const { return sample(q).value; }

    /// ∂ψ/∂q from the Gaussian exponent and H_n' = 2n H_{n−1}.
    [[nodiscard]] cplx derivative(double q) const {
        const double x = q / width_;
        const auto [h, hm1] = hermite_pair(n_, x);
        const cplx envelope = prefactor_ * std::polar(1.0, phase_) * std::exp(beta_ * (q * q));
        return envelope * (2.0 * beta_ * q * h + 2.0 * n_ * hm1 / width_);
    }

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] double t() const { return t_; }
    [[nodiscard]] double width() const { return width_; }  ///< √ħ ρ
    [[nodiscard]] double mass() const { return m_; }
    [[nodiscard]] double rho() const { return rho_; }
    [[nodiscard]] double rho_dot() const { return rho_dot_; }
    [[nodiscard]] double phase() const { return phase_; }

    /// Quadrature half-window in σ = q/(√ħρ): turning point plus 8 widths.
    [[nodiscard]] static double window_sigma(int n) { return std::sqrt(2.0 * n + 1.0) + 8.0; }

private:
    int n_;
    double t_;
    double hbar_ = 1.0;
    double m_ = 0.0;
    double rho_ = 0.0;
    double rho_dot_ = 0.0;
    double phase_ = 0.0;
    double prefactor_ = 0.0;
    double width_ = 0.0;
    cplx beta_;
};

inline WaveFunctionSample psi_n(const OscillatorSpec& spec, const PinneySolution& solution, int n,
                                double q, double t) {
    return EigenstateSlice(spec, solution, n, t).sample(q);
}

inline constexpr double kStateQuadratureTol = 1e-12;

/// ∫ ψ_n*(q,t) ψ_m(q,t) dq over the window of the higher order state.
inline cplx overlap(const OscillatorSpec& spec, const PinneySolution& solution, int n, int m,
                    double t) {
    const EigenstateSlice a(spec, solution, n, t);
    const EigenstateSlice b(spec, solution, m, t);
    const double s = a.width();
    const double L = EigenstateSlice::window_sigma(std::max(n, m));
    auto integrand = [&](double sigma) {
        const double q = sigma * s;
        return std::conj(a.value(q)) * b.value(q) * s;
    };
    quad::Options opt;
    opt.abs_tol = kStateQuadratureTol;
    return quad::integrate(integrand, -L, L, opt).value;
}

/// ∫|ψ_n|² dq over q ∈ [−L, L], L = (√(2n+1) + 8)·√ħρ.
inline double normalization(const OscillatorSpec& spec, const PinneySolution& solution, int n,
                            double t) {
    const EigenstateSlice slice(spec, solution, n, t);
    const double s = slice.width();
    const double L = EigenstateSlice::window_sigma(n);
    auto integrand = [&](double sigma) { return std::norm(slice.value(sigma * s)) * s; };
    quad::Options opt;
    opt.abs_tol = kStateQuadratureTol;
    return quad::integrate(integrand, -L, L, opt).value;
}

/// iħ∂ψ/∂t + (ħ²/2m)∂²ψ/∂q² − ½mω²q²ψ by central differences.
inline cplx schrodinger_residual(const OscillatorSpec& spec, const PinneySolution& solution, int n,
                                 double q, double t, double h_t, double h_q) {
    if (!(h_t > 0.0) || !(h_q > 0.0)) {
        throw Error(ErrorCode::InvalidParameter, "finite-difference steps must be positive");
    }
    if (!(t - h_t >= spec.t0())) {
        throw Error(ErrorCode::OutOfDomain, "t - h_t must stay >= t0");
    }
    const EigenstateSlice now(spec, solution, n, t);
    const EigenstateSlice before(spec, solution, n, t - h_t);
    const EigenstateSlice after(spec, solution, n, t + h_t);
    const double hbar = spec.hbar();
    const double m = now.mass();
    const double w2 = omega_squared(spec, t);
    const cplx psi = now.value(q);
    const cplx dpsi_dt = (after.value(q) - before.value(q)) / (2.0 * h_t);
    const cplx d2psi_dq2 = (now.value(q + h_q) - 2.0 * psi + now.value(q - h_q)) / (h_q * h_q);
    return cplx(0.0, hbar) * dpsi_dt + (hbar * hbar / (2.0 * m)) * d2psi_dq2 -
           0.5 * m * w2 * q * q * psi;
}

/// Initial eigenvalue α(t0) = u + iv reproducing ⟨q⟩(t0) = q0, ⟨p⟩(t0) = m(t0)·v0.
inline CoherentStateParams calibrate_coherent(const OscillatorSpec& spec,
                                              const PinneySolution& solution, double q0,
                                              double v0) {
    const double t0 = spec.t0();
    const double r = solution.rho(t0);
    const double rd = solution.rho_dot(t0);
    const double m = mass(spec, t0);
    const double p0 = m * v0;
    const double root = std::sqrt(2.0 * spec.hbar());
    return {q0 / (root * r), (r * p0 - m * rd * q0) / root};
}

inline cplx alpha_t(const CoherentStateParams& params, const OscillatorSpec& spec,
                    const PinneySolution& solution, double t) {
    const double theta0 = lewis_phase(spec, solution, 0, t);
    return params.alpha0() * std::polar(1.0, 2.0 * theta0);
}

/// ⟨q⟩ and ⟨p⟩ in the coherent state |α, t⟩.
inline PhaseSpacePoint coherent_expectations(const CoherentStateParams& params,
                                             const OscillatorSpec& spec,
                                             const PinneySolution& solution, double t) {
    const double angle = 2.0 * lewis_phase(spec, solution, 0, t);
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double r = solution.rho(t);
    const double mrd = mass(spec, t) * solution.rho_dot(t);
    const double root = std::sqrt(2.0 * spec.hbar());
    const double u = params.u;
    const double v = params.v;
    const double q = root * r * (u * c - v * s);
    const double p = root * ((v / r + u * mrd) * c + (u / r - v * mrd) * s);
    return {q, p};
}

}  // namespace logosc
