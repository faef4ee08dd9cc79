#pragma once

/**
 * @file quadrature.hpp
 * @brief Globally adaptive 15-point Gauss–Kronrod integration.
 *
 * Works for any value type closed under + and scalar ·, given a
 * `magnitude()` overload (double, std::complex<double> and std::array<double, N>
 * are provided). The interval with the largest error estimate is bisected
 * until the summed estimate drops below max(abs_tol, rel_tol·|I|).
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <string>
#include <type_traits>
#include <vector>

#include "error.hpp"

namespace logosc::quad {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }
template <std::size_t N>
double magnitude(const std::array<double, N>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

template <std::size_t N>
std::array<double, N> operator+(std::array<double, N> a, const std::array<double, N>& b) {
    for (std::size_t i = 0; i < N; ++i) a[i] += b[i];
    return a;
}
template <std::size_t N>
std::array<double, N> operator-(std::array<double, N> a, const std::array<double, N>& b) {
    for (std::size_t i = 0; i < N; ++i) a[i] -= b[i];
    return a;
}
template <std::size_t N>
std::array<double, N> operator*(double s, std::array<double, N> a) {
    for (double& x : a) x *= s;
    return a;
}

struct Options {
    double abs_tol = 1e-10;
    double rel_tol = 0.0;
    std::size_t max_intervals = 4000;
};

template <typename T>
struct Result {
    T value;
    double error;
    std::size_t intervals;
};

namespace detail {

// Kronrod abscissae; odd indices are the 7-point Gauss nodes.
inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T>
struct Panel {
    double a;
    double b;
    T value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

template <typename T, typename F>
Panel<T> gauss_kronrod_15(const F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const T fc = f(center);
    T kronrod = wgk[7] * fc;
    T gauss = wg[3] * fc;
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * xgk[j];
        const T sum = f(center - dx) + f(center + dx);
        kronrod = kronrod + wgk[j] * sum;
        if (j % 2 == 1) gauss = gauss + wg[j / 2] * sum;
    }
    T value = half * kronrod;
    const double error = magnitude(half * (kronrod - gauss));
    return {a, b, value, error};
}

}  // namespace detail

/// Integrates f over [a, b]. Throws QuadratureFailure if the interval budget
/// runs out before the error estimate meets the tolerance.
template <typename F, typename T = std::invoke_result_t<F, double>>
Result<T> integrate(const F& f, double a, double b, const Options& opt = {}) {
    if (a == b) return {T{}, 0.0, 0};
    if (!(std::isfinite(a) && std::isfinite(b))) {
        throw Error(ErrorCode::QuadratureFailure, "integration limits must be finite");
    }
    if (b < a) {
        auto r = integrate<F, T>(f, b, a, opt);
        return {-1.0 * r.value, r.error, r.intervals};
    }
    std::priority_queue<detail::Panel<T>> panels;
    auto first = detail::gauss_kronrod_15<T>(f, a, b);
    T total = first.value;
    double total_error = first.error;
    panels.push(first);

    auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * magnitude(total)); };
    while (total_error > target()) {
        if (panels.size() >= opt.max_intervals) {
            throw Error(ErrorCode::QuadratureFailure,
                        "interval budget exhausted, error estimate " + std::to_string(total_error));
        }
        const auto worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw Error(ErrorCode::QuadratureFailure, "interval cannot be bisected further");
        }
        auto left = detail::gauss_kronrod_15<T>(f, worst.a, mid);
        auto right = detail::gauss_kronrod_15<T>(f, mid, worst.b);
        total = total - worst.value + left.value + right.value;
        total_error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }

    // Re-sum from the panels to shed the drift of the running updates.
    T resummed = T{};
    double err = 0.0;
    const std::size_t count = panels.size();
    while (!panels.empty()) {
        resummed = resummed + panels.top().value;
        err += panels.top().error;
        panels.pop();
    }
    return {resummed, err, count};
}

}  // namespace logosc::quad
