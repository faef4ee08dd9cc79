#pragma once

/**
 * @file oscillator.hpp
 * @brief Time-dependent harmonic oscillator families H = p²/2m(t) + m(t)ω²(t)q²/2.
 *
 * The three log-periodic families share ω(t) = ω0·t0/t:
 *   CaseA  m = m0·t/t0,     k = k0·t0/t
 *   CaseB  m = m0,          k = k0·(t0/t)²
 *   CaseC  m = m0·(t/t0)²,  k = k0
 * ConstantBaseline is the ordinary oscillator, UserDefined takes arbitrary
 * coefficient callbacks.
 */

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "error.hpp"

namespace logosc {

enum class Family { CaseA, CaseB, CaseC, ConstantBaseline, UserDefined };

inline constexpr std::string_view to_string(Family f) {
    switch (f) {
    case Family::CaseA: return "caseA";
    case Family::CaseB: return "caseB";
    case Family::CaseC: return "caseC";
    case Family::ConstantBaseline: return "constant";
    case Family::UserDefined: return "user";
    }
    return "unknown";
}

/// Accepts the canonical names ("caseA", "constant", ...) case-insensitively,
/// plus the single letters "A", "B", "C".
inline std::optional<Family> parse_family(std::string_view name) {
    std::string s;
    for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (s == "casea" || s == "a") return Family::CaseA;
    if (s == "caseb" || s == "b") return Family::CaseB;
    if (s == "casec" || s == "c") return Family::CaseC;
    if (s == "constant" || s == "constantbaseline" || s == "baseline") return Family::ConstantBaseline;
    if (s == "user" || s == "userdefined") return Family::UserDefined;
    return std::nullopt;
}

/// True for the families whose coefficients are singular at t = 0.
inline constexpr bool is_log_periodic(Family f) {
    return f == Family::CaseA || f == Family::CaseB || f == Family::CaseC;
}

using Coefficient = std::function<double(double)>;

/// Immutable description of one oscillator. Construct through the factories;
/// they validate the parameter domain.
class OscillatorSpec {
public:
    static OscillatorSpec make(Family family, double m0, double k0, double t0, double hbar = 1.0) {
        if (family == Family::UserDefined) {
            throw Error(ErrorCode::UnsupportedFamily, "user-defined specs need coefficient callbacks");
        }
        return OscillatorSpec(family, m0, k0, t0, hbar, {}, {});
    }

    static OscillatorSpec from_omega(Family family, double m0, double omega0, double t0,
                                     double hbar = 1.0) {
        if (!(omega0 > 0.0)) throw Error(ErrorCode::InvalidParameter, "omega0 must be positive");
        return make(family, m0, m0 * omega0 * omega0, t0, hbar);
    }

    /// m0 and k0 only set the reference scales here; the dynamics come from the callbacks.
    static OscillatorSpec user_defined(Coefficient mass, Coefficient stiffness, double m0, double k0,
                                       double t0, double hbar = 1.0) {
        if (!mass || !stiffness) {
            throw Error(ErrorCode::InvalidParameter, "user-defined coefficients must be callable");
        }
        return OscillatorSpec(Family::UserDefined, m0, k0, t0, hbar, std::move(mass),
                              std::move(stiffness));
    }

    [[nodiscard]] Family family() const noexcept { return family_; }
    [[nodiscard]] double m0() const noexcept { return m0_; }
    [[nodiscard]] double k0() const noexcept { return k0_; }
    [[nodiscard]] double t0() const noexcept { return t0_; }
    [[nodiscard]] double hbar() const noexcept { return hbar_; }
    [[nodiscard]] double omega0() const noexcept { return omega0_; }

    /// 4ω0²t0² − 1; the B/C closed forms need it positive.
    [[nodiscard]] double discriminant() const noexcept {
        return 4.0 * omega0_ * omega0_ * t0_ * t0_ - 1.0;
    }

    void require_positive_discriminant() const {
        if (!(discriminant() > 0.0)) {
            throw Error(ErrorCode::NonPositiveDiscriminant,
                        "4*omega0^2*t0^2 - 1 = " + std::to_string(discriminant()) +
                            " (closed forms need omega0*t0 > 1/2)");
        }
    }

    void check_time(double t) const {
        if (is_log_periodic(family_) && !(t > 0.0)) {
            throw Error(ErrorCode::NonPositiveTime, "t = " + std::to_string(t) + " must be > 0");
        }
        if (!std::isfinite(t)) throw Error(ErrorCode::InvalidParameter, "non-finite time");
    }

    [[nodiscard]] const Coefficient& user_mass() const noexcept { return user_mass_; }
    [[nodiscard]] const Coefficient& user_stiffness() const noexcept { return user_stiffness_; }

private:
    OscillatorSpec(Family family, double m0, double k0, double t0, double hbar, Coefficient mass,
                   Coefficient stiffness)
        : family_(family), m0_(m0), k0_(k0), t0_(t0), hbar_(hbar), user_mass_(std::move(mass)),
          user_stiffness_(std::move(stiffness)) {
        if (!(m0 > 0.0) || !std::isfinite(m0)) throw Error(ErrorCode::InvalidParameter, "m0 must be > 0");
        if (!(k0 > 0.0) || !std::isfinite(k0)) throw Error(ErrorCode::InvalidParameter, "k0 must be > 0");
        if (!(t0 > 0.0) || !std::isfinite(t0)) throw Error(ErrorCode::InvalidParameter, "t0 must be > 0");
        if (!(hbar > 0.0) || !std::isfinite(hbar)) {
            throw Error(ErrorCode::InvalidParameter, "hbar must be > 0");
        }
        omega0_ = std::sqrt(k0 / m0);
    }

    Family family_;
    double m0_;
    double k0_;
    double t0_;
    double hbar_;
    double omega0_ = 0.0;
    Coefficient user_mass_;
    Coefficient user_stiffness_;
};

inline double mass(const OscillatorSpec& spec, double t) {
    spec.check_time(t);
    const double r = t / spec.t0();
    switch (spec.family()) {
    case Family::CaseA: return spec.m0() * r;
    case Family::CaseB: return spec.m0();
    case Family::CaseC: return spec.m0() * r * r;
    case Family::ConstantBaseline: return spec.m0();
    case Family::UserDefined: break;
    }
    const double m = spec.user_mass()(t);
    if (!(m > 0.0)) throw Error(ErrorCode::InvalidParameter, "user mass must stay positive");
    return m;
}

inline double stiffness(const OscillatorSpec& spec, double t) {
    spec.check_time(t);
    const double r = spec.t0() / t;
    switch (spec.family()) {
    case Family::CaseA: return spec.k0() * r;
    case Family::CaseB: return spec.k0() * r * r;
    case Family::CaseC: return spec.k0();
    case Family::ConstantBaseline: return spec.k0();
    case Family::UserDefined: break;
    }
    return spec.user_stiffness()(t);
}

inline double omega(const OscillatorSpec& spec, double t) {
    spec.check_time(t);
    if (is_log_periodic(spec.family())) return spec.omega0() * spec.t0() / t;
    if (spec.family() == Family::ConstantBaseline) return spec.omega0();
    const double k = stiffness(spec, t);
    if (k < 0.0) throw Error(ErrorCode::InvalidParameter, "negative stiffness has no real frequency");
    return std::sqrt(k / mass(spec, t));
}

/// ω²(t) without the square root; valid for inverted user-defined potentials too.
inline double omega_squared(const OscillatorSpec& spec, double t) {
    if (spec.family() == Family::UserDefined) return stiffness(spec, t) / mass(spec, t);
    const double w = omega(spec, t);
    return w * w;
}

/// Central difference of ln m(t) with step max(1e-6·t, 1e-9).
inline double gamma_numeric(const OscillatorSpec& spec, double t) {
    spec.check_time(t);
    const double h = std::max(1e-6 * std::abs(t), 1e-9);
    double lo = t - h;
    double hi = t + h;
    if (is_log_periodic(spec.family()) && lo <= 0.0) lo = 0.5 * t;
    return (std::log(mass(spec, hi)) - std::log(mass(spec, lo))) / (hi - lo);
}

/// γ(t) = d ln m / dt.
inline double gamma(const OscillatorSpec& spec, double t) {
    spec.check_time(t);
    switch (spec.family()) {
    case Family::CaseA: return 1.0 / t;
    case Family::CaseB: return 0.0;
    case Family::CaseC: return 2.0 / t;
    case Family::ConstantBaseline: return 0.0;
    case Family::UserDefined: break;
    }
    return gamma_numeric(spec, t);
}

}  // namespace logosc
