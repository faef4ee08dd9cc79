#pragma once

/**
 * @file classical.hpp
 * @brief Classical trajectories of q̈ + γ(t)q̇ + ω²(t)q = 0, energies, amplitude
 * envelopes and phase-diagram series. The momentum is canonical, p = m(t)q̇.
 */

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "ode.hpp"
#include "oscillator.hpp"

namespace logosc {

struct Trajectory {
    enum class Source { ClosedForm, Numeric };
    std::vector<double> times;
    std::vector<double> q;
    std::vector<double> p;
    Source source = Source::Numeric;
};

/// `count` points from start to end, equally spaced in ln t.
inline std::vector<double> log_grid(double start, double end, std::size_t count) {
    if (!(start > 0.0) || !(end > start)) {
        throw Error(ErrorCode::InvalidParameter, "log grid needs 0 < start < end");
    }
    if (count < 2) throw Error(ErrorCode::InvalidParameter, "grid needs at least two points");
    std::vector<double> g(count);
    const double a = std::log(start);
    const double b = std::log(end);
    for (std::size_t i = 0; i < count; ++i) {
        g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    g.front() = start;
    g.back() = end;
    return g;
}

inline std::vector<double> linear_grid(double start, double end, std::size_t count) {
    if (!(end > start)) throw Error(ErrorCode::InvalidParameter, "grid needs start < end");
    if (count < 2) throw Error(ErrorCode::InvalidParameter, "grid needs at least two points");
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i) {
        g[i] = start + (end - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    g.back() = end;
    return g;
}

namespace detail {

inline void require_grid(const OscillatorSpec& spec, const std::vector<double>& grid) {
    if (grid.empty()) throw Error(ErrorCode::InvalidParameter, "empty time grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        spec.check_time(grid[i]);
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw Error(ErrorCode::InvalidParameter, "time grid must be strictly increasing");
        }
    }
    if (grid.front() < spec.t0()) {
        throw Error(ErrorCode::OutOfDomain, "trajectories start at t0; grid begins earlier");
    }
}

}  // namespace detail

struct PhaseSpaceState {
    double q;
    double p;
};

/**
 * Closed-form state for release at q(t0) = 1 with zero velocity.
 * With L = ln(t/t0), Ω = √(4ω0²t0² − 1):
 *   A: q = cos(ω0t0 L),                    p = −m0ω0 sin(ω0t0 L)
 *   B: q = √(t/t0)[cos(ΩL/2) − sin(ΩL/2)/Ω], p = −√(t0/t)(2m0ω0²t0/Ω) sin(ΩL/2)
 *   C: q = √(t0/t)[cos(ΩL/2) + sin(ΩL/2)/Ω], p = −√(t/t0)(2m0ω0²t0/Ω) sin(ΩL/2)
 *   constant: q = cos(ω0(t − t0)),          p = −m0ω0 sin(ω0(t − t0))
 */
inline PhaseSpaceState closed_form_state(const OscillatorSpec& spec, double t) {
    spec.check_time(t);
    const double m0 = spec.m0();
    const double w0 = spec.omega0();
    const double t0 = spec.t0();
    const double L = std::log(t / t0);
    switch (spec.family()) {
    case Family::CaseA: {
        const double phi = w0 * t0 * L;
        return {std::cos(phi), -m0 * w0 * std::sin(phi)};
    }
    case Family::CaseB:
    case Family::CaseC: {
        spec.require_positive_discriminant();
        const double big = std::sqrt(spec.discriminant());
        const double phi = 0.5 * big * L;
        const double c = std::cos(phi);
        const double s = std::sin(phi);
        const double amp_p = 2.0 * m0 * w0 * w0 * t0 / big;
        if (spec.family() == Family::CaseB) {
            return {std::sqrt(t / t0) * (c - s / big), -std::sqrt(t0 / t) * amp_p * s};
        }
        return {std::sqrt(t0 / t) * (c + s / big), -std::sqrt(t / t0) * amp_p * s};
    }
    case Family::ConstantBaseline: {
        const double phi = w0 * (t - t0);
        return {std::cos(phi), -m0 * w0 * std::sin(phi)};
    }
    case Family::UserDefined: break;
    }
    throw Error(ErrorCode::UnsupportedFamily, "no closed-form trajectory for user-defined coefficients");
}

/// Closed forms exist only for release from rest at unit displacement.
inline Trajectory closed_form_trajectory(const OscillatorSpec& spec, double q0, double v0,
                                         const std::vector<double>& grid) {
    if (spec.family() == Family::UserDefined) {
        throw Error(ErrorCode::UnsupportedFamily, "no closed-form trajectory for user-defined coefficients");
    }
    if (q0 != 1.0 || v0 != 0.0) {
        throw Error(ErrorCode::UnsupportedInitialConditions,
                    "closed forms assume q0 = 1, v0 = 0; use the numeric path");
    }
    if (spec.family() == Family::CaseB || spec.family() == Family::CaseC) {
        spec.require_positive_discriminant();
    }
    detail::require_grid(spec, grid);
    Trajectory tr;
    tr.source = Trajectory::Source::ClosedForm;
    tr.times = grid;
    tr.q.reserve(grid.size());
    tr.p.reserve(grid.size());
    for (double t : grid) {
        const auto s = closed_form_state(spec, t);
        tr.q.push_back(s.q);
        tr.p.push_back(s.p);
    }
    return tr;
}

inline constexpr double kDefaultTrajectoryTol = 1e-10;

/// Dense numeric solution of the equation of motion started at t0.
class ClassicalFlow {
public:
    ClassicalFlow(OscillatorSpec spec, ode::DenseSolution<2> dense)
        : spec_(std::move(spec)), dense_(std::make_shared<const ode::DenseSolution<2>>(std::move(dense))) {}

    [[nodiscard]] double q(double t) const { return (*dense_)(t)[0]; }
    [[nodiscard]] double velocity(double t) const { return (*dense_)(t)[1]; }
    [[nodiscard]] double p(double t) const { return mass(spec_, t) * velocity(t); }
    [[nodiscard]] PhaseSpaceState state(double t) const {
        const auto y = (*dense_)(t);
        return {y[0], mass(spec_, t) * y[1]};
    }
    [[nodiscard]] double t_start() const { return dense_->t_start(); }
    [[nodiscard]] double t_end() const { return dense_->t_end(); }
    [[nodiscard]] const OscillatorSpec& spec() const { return spec_; }

private:
    OscillatorSpec spec_;
    std::shared_ptr<const ode::DenseSolution<2>> dense_;
};

/// Integrates from (q0, v0) at t0 up to t_end.
inline ClassicalFlow integrate_flow(const OscillatorSpec& spec, double q0, double v0, double t_end,
                                    double tol = kDefaultTrajectoryTol) {
    const double t0 = spec.t0();
    if (!(tol > 0.0 && tol <= 1e-3)) throw Error(ErrorCode::InvalidParameter, "tol must lie in (0, 1e-3]");
    if (!(t_end > t0)) throw Error(ErrorCode::InvalidParameter, "t_end must exceed t0");
    ode::Tolerances tolerances;
    tolerances.rtol = tol;
    const double w = std::max(omega(spec, t0), 1e-300);
    tolerances.atol = tol * std::max({std::abs(q0), std::abs(v0) / w, 1e-300});
    ode::Rhs<2> f = [&spec](double t, const ode::State<2>& y) -> ode::State<2> {
        return {y[1], -gamma(spec, t) * y[1] - omega_squared(spec, t) * y[0]};
    };
    return ClassicalFlow(spec, ode::integrate<2>(f, {q0, v0}, t0, t_end, tolerances));
}

inline Trajectory integrate_eom(const OscillatorSpec& spec, double q0, double v0,
                                const std::vector<double>& grid, double tol = kDefaultTrajectoryTol) {
    detail::require_grid(spec, grid);
    Trajectory tr;
    tr.source = Trajectory::Source::Numeric;
    tr.times = grid;
    if (grid.back() == spec.t0()) {
        // Only the release point was requested.
        tr.q.assign(grid.size(), q0);
        tr.p.assign(grid.size(), mass(spec, spec.t0()) * v0);
        return tr;
    }
    const ClassicalFlow flow = integrate_flow(spec, q0, v0, grid.back(), tol);
    for (double t : grid) {
        const auto s = flow.state(t);
        tr.q.push_back(s.q);
        tr.p.push_back(s.p);
    }
    return tr;
}

/// E = p²/(2m) + k q²/2.
inline double energy(const OscillatorSpec& spec, double q, double p, double t) {
    spec.check_time(t);
    return p * p / (2.0 * mass(spec, t)) + 0.5 * stiffness(spec, t) * q * q;
}

/// Trajectory sampled on `samples` log-spaced points over [t0, t_end].
inline Trajectory phase_diagram(const OscillatorSpec& spec, double q0, double v0, double t_end,
                                std::size_t samples, double tol = kDefaultTrajectoryTol) {
    if (samples < 2) throw Error(ErrorCode::InvalidParameter, "phase diagram needs >= 2 samples");
    return integrate_eom(spec, q0, v0, log_grid(spec.t0(), t_end, samples), tol);
}

/// Sign changes of q on a log-spaced scan, refined by bisection on the dense output.
inline std::vector<double> zero_crossings(const ClassicalFlow& flow, double t_a, double t_b,
                                          std::size_t scan_points = 20000) {
    std::vector<double> roots;
    const auto grid = log_grid(t_a, t_b, scan_points);
    double prev_t = grid.front();
    double prev_q = flow.q(prev_t);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double t = grid[i];
        const double q = flow.q(t);
        if (prev_q == 0.0) {
            roots.push_back(prev_t);
        } else if ((prev_q < 0.0) != (q < 0.0) && q != 0.0) {
            double lo = prev_t;
            double hi = t;
            double q_lo = prev_q;
            for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double q_mid = flow.q(mid);
                if ((q_mid < 0.0) == (q_lo < 0.0)) {
                    lo = mid;
                    q_lo = q_mid;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_t = t;
        prev_q = q;
    }
    return roots;
}

struct Peak {
    double t;
    double amplitude;
};

/// Largest |q| between consecutive sign changes; the partial half-cycles at
/// either end of the record are dropped.
inline std::vector<Peak> oscillation_peaks(const std::vector<double>& times,
                                           const std::vector<double>& q) {
    std::vector<Peak> peaks;
    if (times.size() != q.size()) throw Error(ErrorCode::InvalidParameter, "series length mismatch");
    bool open = false;
    Peak best{0.0, -1.0};
    for (std::size_t i = 1; i < q.size(); ++i) {
        const bool crossed = (q[i - 1] < 0.0) != (q[i] < 0.0);
        if (crossed) {
            if (open) peaks.push_back(best);
            open = true;
            best = {times[i], std::abs(q[i])};
        } else if (open && std::abs(q[i]) > best.amplitude) {
            best = {times[i], std::abs(q[i])};
        }
    }
    return peaks;
}

struct PowerLawFit {
    double exponent;
    double log_prefactor;
};

/// Least-squares line through (ln t, ln A).
inline PowerLawFit fit_power_law(const std::vector<Peak>& peaks) {
    if (peaks.size() < 2) throw Error(ErrorCode::InvalidParameter, "power-law fit needs >= 2 peaks");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(peaks.size());
    for (const auto& pk : peaks) {
        const double x = std::log(pk.t);
        const double y = std::log(pk.amplitude);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {slope, (sy - slope * sx) / n};
}

}  // namespace logosc
