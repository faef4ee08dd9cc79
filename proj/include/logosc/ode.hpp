#pragma once

/**
 * @file ode.hpp
 * @brief Dormand–Prince 5(4) integrator with continuous (dense) output.
 *
 * Local error per component is measured against atol + rtol·max(|y_old|, |y_new|)
 * and the step is accepted when the RMS of the scaled error is ≤ 1. Every
 * accepted step keeps its five interpolation coefficients, so the returned
 * DenseSolution can be evaluated anywhere on [t_start, t_end] with the
 * fourth-order continuous extension.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace logosc::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Tolerances {
    double rtol = 1e-9;
    double atol = 1e-9;
    std::size_t max_steps = 1'000'000;
    /// Step sizes below min_step_factor·|t| count as a controller failure.
    double min_step_factor = 1e-14;
};

template <std::size_t N>
class DenseSolution {
public:
    struct Segment {
        double t;
        double h;
        std::array<State<N>, 5> coeff;
    };

    DenseSolution() = default;
    explicit DenseSolution(std::vector<Segment> segments) : segments_(std::move(segments)) {}

    [[nodiscard]] double t_start() const { return segments_.front().t; }
    [[nodiscard]] double t_end() const { return segments_.back().t + segments_.back().h; }
    [[nodiscard]] std::size_t steps() const { return segments_.size(); }
    [[nodiscard]] bool empty() const { return segments_.empty(); }

    [[nodiscard]] bool contains(double t) const {
        if (segments_.empty()) return false;
        const double slack = 1e-12 * std::max(std::abs(t_start()), std::abs(t_end()));
        return t >= t_start() - slack && t <= t_end() + slack;
    }

    [[nodiscard]] State<N> operator()(double t) const {
        if (!contains(t)) {
            throw Error(ErrorCode::OutOfDomain, "t = " + std::to_string(t) + " outside [" +
                                                    std::to_string(t_start()) + ", " +
                                                    std::to_string(t_end()) + "]");
        }
        auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                                   [](double value, const Segment& s) { return value < s.t; });
        const Segment& seg = (it == segments_.begin()) ? segments_.front() : *std::prev(it);
        const double theta = std::clamp((t - seg.t) / seg.h, 0.0, 1.0);
        const double theta1 = 1.0 - theta;
        State<N> y{};
        for (std::size_t i = 0; i < N; ++i) {
            const auto& c = seg.coeff;
            y[i] = c[0][i] +
                   theta * (c[1][i] + theta1 * (c[2][i] + theta * (c[3][i] + theta1 * c[4][i])));
        }
        return y;
    }

private:
    std::vector<Segment> segments_;
};

namespace detail {

// Dormand & Prince (1980) tableau with Shampine's dense-output weights.
inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                        a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                        a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                        a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                        e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

template <std::size_t N>
bool all_finite(const State<N>& y) {
    return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace detail

/// Right-hand side f(t, y) -> dy/dt.
template <std::size_t N>
using Rhs = std::function<State<N>(double, const State<N>&)>;

/// Predicate applied to every accepted state; returning false raises BlowUp.
template <std::size_t N>
using Admissible = std::function<bool(const State<N>&)>;

template <std::size_t N>
DenseSolution<N> integrate(const Rhs<N>& f, State<N> y, double t_start, double t_end,
                           const Tolerances& tol, const Admissible<N>& admissible = {}) {
    using namespace detail;
    if (!(t_end > t_start)) throw Error(ErrorCode::InvalidParameter, "t_end must exceed t_start");
    if (!(tol.rtol > 0.0) || !(tol.atol >= 0.0)) {
        throw Error(ErrorCode::InvalidParameter, "tolerances must be positive");
    }

    auto scaled_norm = [&](const State<N>& v, const State<N>& y0, const State<N>& y1) {
        double sum = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = tol.atol + tol.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
            const double r = v[i] / sc;
            sum += r * r;
        }
        return std::sqrt(sum / static_cast<double>(N));
    };
    auto axpy = [](const State<N>& base, double h, std::initializer_list<std::pair<double, const State<N>*>> terms) {
        State<N> out = base;
        for (const auto& [coef, k] : terms) {
            if (coef == 0.0) continue;
            for (std::size_t i = 0; i < N; ++i) out[i] += h * coef * (*k)[i];
        }
        return out;
    };

    State<N> k1 = f(t_start, y);
    if (!all_finite(k1)) throw BlowUpError(t_start, "non-finite derivative at the initial point");

    // Initial step from the magnitudes of y and y' (Hairer, Nørsett & Wanner II.4).
    double h;
    {
        const State<N> zero{};
        const double d0 = scaled_norm(y, y, zero);
        const double d1n = scaled_norm(k1, y, zero);
        double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
        h0 = std::min(h0, t_end - t_start);
        const State<N> y1 = axpy(y, h0, {{1.0, &k1}});
        const State<N> f1 = f(t_start + h0, y1);
        State<N> diff{};
        for (std::size_t i = 0; i < N; ++i) diff[i] = f1[i] - k1[i];
        const double d2 = all_finite(f1) ? scaled_norm(diff, y, zero) / h0 : 0.0;
        const double dmax = std::max(d1n, d2);
        const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
        h = std::min({100.0 * h0, h1, t_end - t_start});
    }

    std::vector<typename DenseSolution<N>::Segment> segments;
    double t = t_start;
    std::size_t steps = 0;
    constexpr double safety = 0.9, fac_min = 0.2, fac_max = 10.0;
    bool last_rejected = false;

    while (t < t_end) {
        if (++steps > tol.max_steps) {
            throw Error(ErrorCode::StepFailure, "step budget exhausted at t = " + std::to_string(t));
        }
        if (h < tol.min_step_factor * std::max(std::abs(t), 1.0)) {
            throw Error(ErrorCode::StepFailure, "step size underflow at t = " + std::to_string(t));
        }
        bool final_step = false;
        if (t + h >= t_end || t + 1.01 * h >= t_end) {
            h = t_end - t;
            final_step = true;
        }

        const State<N> k2 = f(t + c2 * h, axpy(y, h, {{a21, &k1}}));
        const State<N> k3 = f(t + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
        const State<N> k4 = f(t + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const State<N> k5 =
            f(t + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const State<N> k6 =
            f(t + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const State<N> y_new =
            axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
        const bool new_ok = all_finite(y_new) && (!admissible || admissible(y_new));
        State<N> k7{};
        if (new_ok) k7 = f(t + h, y_new);

        double err;
        if (!new_ok || !all_finite(k7)) {
            err = std::numeric_limits<double>::infinity();
        } else {
            State<N> e{};
            for (std::size_t i = 0; i < N; ++i) {
                e[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
            }
            err = scaled_norm(e, y, y_new);
        }

        if (err <= 1.0) {
            typename DenseSolution<N>::Segment seg{t, h, {}};
            for (std::size_t i = 0; i < N; ++i) {
                const double dy = y_new[i] - y[i];
                const double bspl = h * k1[i] - dy;
                seg.coeff[0][i] = y[i];
                seg.coeff[1][i] = dy;
                seg.coeff[2][i] = bspl;
                seg.coeff[3][i] = dy - h * k7[i] - bspl;
                seg.coeff[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                       d6 * k6[i] + d7 * k7[i]);
            }
            segments.push_back(seg);
            t = final_step ? t_end : t + h;
            y = y_new;
            k1 = k7;
            double fac = err == 0.0 ? fac_max : safety * std::pow(err, -0.2);
            fac = std::clamp(fac, fac_min, last_rejected ? 1.0 : fac_max);
            h *= fac;
            last_rejected = false;
        } else {
            if (!new_ok && h < 1e3 * tol.min_step_factor * std::max(std::abs(t), 1.0)) {
                throw BlowUpError(t, "solution left its admissible region after t = " +
                                         std::to_string(t));
            }
            const double fac = std::isfinite(err) ? std::max(fac_min, safety * std::pow(err, -0.2))
                                                  : fac_min;
            h *= fac;
            last_rejected = true;
        }
    }
    return DenseSolution<N>(std::move(segments));
}

}  // namespace logosc::ode
