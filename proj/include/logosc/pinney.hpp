#pragma once

/**
 * @file pinney.hpp
 * @brief Solutions ρ(t) of the generalized Milne–Pinney equation
 *
 *     ρ̈ + γ(t)ρ̇ + ω²(t)ρ = 1 / (m²(t)ρ³),
 *
 * either as closed forms (cases A/B/C and the constant oscillator) or as a
 * dense numeric trajectory from the adaptive integrator.
 */

#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "error.hpp"
#include "ode.hpp"
#include "oscillator.hpp"

namespace logosc {

class PinneySolution {
public:
    enum class Kind { ClosedForm, Numeric };

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] const OscillatorSpec& spec() const noexcept { return spec_; }

    /// Closed forms cover t > 0 (all t for the constant oscillator); numeric
    /// solutions cover [t_start, t_end] of the integration.
    [[nodiscard]] bool in_domain(double t) const {
        if (!std::isfinite(t)) return false;
        if (kind_ == Kind::Numeric) return dense_->contains(t);
        return spec_.family() == Family::ConstantBaseline || t > 0.0;
    }

    [[nodiscard]] double t_min() const {
        return kind_ == Kind::Numeric ? dense_->t_start() : 0.0;
    }
    [[nodiscard]] double t_max() const {
        return kind_ == Kind::Numeric ? dense_->t_end() : std::numeric_limits<double>::infinity();
    }

    [[nodiscard]] double rho(double t) const {
        require(t);
        if (kind_ == Kind::Numeric) return (*dense_)(t)[0];
        return closed_rho(t);
    }

    [[nodiscard]] double rho_dot(double t) const {
        require(t);
        if (kind_ == Kind::Numeric) return (*dense_)(t)[1];
        switch (spec_.family()) {
        case Family::CaseB: return closed_rho(t) / (2.0 * t);
        case Family::CaseC: return -closed_rho(t) / (2.0 * t);
        default: return 0.0;
        }
    }

    /// Exact second derivative for closed forms; the equation's right-hand
    /// side evaluated on the interpolated state for numeric solutions.
    [[nodiscard]] double rho_ddot(double t) const {
        require(t);
        if (kind_ == Kind::Numeric) {
            const auto y = (*dense_)(t);
            return rhs(spec_, t, y)[1];
        }
        switch (spec_.family()) {
        case Family::CaseB: return -closed_rho(t) / (4.0 * t * t);
        case Family::CaseC: return 3.0 * closed_rho(t) / (4.0 * t * t);
        default: return 0.0;
        }
    }

    /// Number of accepted integrator steps (0 for closed forms).
    [[nodiscard]] std::size_t steps() const { return dense_ ? dense_->steps() : 0; }

    static ode::State<2> rhs(const OscillatorSpec& spec, double t, const ode::State<2>& y) {
        const double m = mass(spec, t);
        const double r = y[0];
        const double r3 = r * r * r;
        return {y[1], -gamma(spec, t) * y[1] - omega_squared(spec, t) * r + 1.0 / (m * m * r3)};
    }

    static PinneySolution closed_form(OscillatorSpec spec, double scale) {
        PinneySolution s(std::move(spec));
        s.kind_ = Kind::ClosedForm;
        s.scale_ = scale;
        return s;
    }

    static PinneySolution numeric(OscillatorSpec spec, ode::DenseSolution<2> dense) {
        PinneySolution s(std::move(spec));
        s.kind_ = Kind::Numeric;
        s.dense_ = std::make_shared<const ode::DenseSolution<2>>(std::move(dense));
        return s;
    }

private:
    explicit PinneySolution(OscillatorSpec spec) : spec_(std::move(spec)) {}

    void require(double t) const {
        if (!in_domain(t)) {
            throw Error(ErrorCode::OutOfDomain,
                        "t = " + std::to_string(t) + " is outside the solution's domain");
        }
    }

    // scale_ holds the t-independent factor: ρ = scale (A, constant),
    // scale·√t (B), scale/√t (C).
    [[nodiscard]] double closed_rho(double t) const {
        switch (spec_.family()) {
        case Family::CaseB: return scale_ * std::sqrt(t);
        case Family::CaseC: return scale_ / std::sqrt(t);
        default: return scale_;
        }
    }

    OscillatorSpec spec_;
    Kind kind_ = Kind::ClosedForm;
    double scale_ = 0.0;
    std::shared_ptr<const ode::DenseSolution<2>> dense_;
};

/// Closed-form ρ for the families that have one.
inline PinneySolution analytic_rho(const OscillatorSpec& spec) {
    const double m0 = spec.m0();
    const double w0 = spec.omega0();
    switch (spec.family()) {
    case Family::CaseA:
    case Family::ConstantBaseline:
        return PinneySolution::closed_form(spec, 1.0 / std::sqrt(m0 * w0));
    case Family::CaseB: {
        spec.require_positive_discriminant();
        const double c = std::sqrt(2.0 / m0) / std::pow(spec.discriminant(), 0.25);
        return PinneySolution::closed_form(spec, c);
    }
    case Family::CaseC: {
        spec.require_positive_discriminant();
        const double c = std::sqrt(2.0 / m0) * spec.t0() / std::pow(spec.discriminant(), 0.25);
        return PinneySolution::closed_form(spec, c);
    }
    case Family::UserDefined: break;
    }
    throw Error(ErrorCode::UnsupportedFamily, "no closed-form rho for user-defined coefficients");
}

inline constexpr double kDefaultPinneyTol = 1e-9;

/// Integrates the Pinney equation from (rho_init, rho_dot_init) at t_start.
/// `tol` bounds the relative local error and must lie in [1e-12, 1e-3].
inline PinneySolution solve_pinney_numeric(const OscillatorSpec& spec, double rho_init,
                                           double rho_dot_init, double t_start, double t_end,
                                           double tol = kDefaultPinneyTol) {
    if (!(t_start > 0.0)) throw Error(ErrorCode::NonPositiveTime, "t_start must be > 0");
    if (!(rho_init > 0.0)) throw Error(ErrorCode::InvalidParameter, "rho_init must be > 0");
    if (!(tol >= 1e-12 && tol <= 1e-3)) {
        throw Error(ErrorCode::InvalidParameter, "tol must lie in [1e-12, 1e-3]");
    }
    if (!(t_end > t_start)) throw Error(ErrorCode::InvalidParameter, "t_end must exceed t_start");

    // Absolute floors scale with the initial data so the control stays
    // relative when ρ̇ passes through zero.
    ode::Tolerances tolerances;
    tolerances.rtol = tol;
    tolerances.atol = 0.1 * tol * rho_init;

    ode::Rhs<2> f = [&spec](double t, const ode::State<2>& y) {
        return PinneySolution::rhs(spec, t, y);
    };
    ode::Admissible<2> positive = [](const ode::State<2>& y) { return y[0] > 0.0; };
    auto dense = ode::integrate<2>(f, {rho_init, rho_dot_init}, t_start, t_end, tolerances, positive);
    return PinneySolution::numeric(spec, std::move(dense));
}

/// ρ̈ + γρ̇ + ω²ρ − 1/(m²ρ³) at t.
inline double pinney_residual(const OscillatorSpec& spec, const PinneySolution& solution, double t) {
    if (!solution.in_domain(t)) {
        throw Error(ErrorCode::OutOfDomain, "t = " + std::to_string(t) + " is outside the solution");
    }
    const double r = solution.rho(t);
    const double m = mass(spec, t);
    return solution.rho_ddot(t) + gamma(spec, t) * solution.rho_dot(t) +
           omega_squared(spec, t) * r - 1.0 / (m * m * r * r * r);
}

/// Residual divided by ω²(t)ρ(t).
inline double pinney_residual_normalized(const OscillatorSpec& spec, const PinneySolution& solution,
                                         double t) {
    const double res = pinney_residual(spec, solution, t);
    return std::abs(res) / std::abs(omega_squared(spec, t) * solution.rho(t));
}

}  // namespace logosc
