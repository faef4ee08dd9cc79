#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "error.hpp"

namespace logosc {

/// Highest order evaluated in double precision.
inline constexpr int kMaxHermiteOrder = 64;

inline void check_hermite_order(int n) {
    if (n < 0) throw Error(ErrorCode::InvalidParameter, "Hermite order must be >= 0");
    if (n > kMaxHermiteOrder) {
        throw Error(ErrorCode::OrderTooLarge,
                    "order " + std::to_string(n) + " exceeds " + std::to_string(kMaxHermiteOrder));
    }
}

/// Physicists' Hermite polynomials H_n(x) and H_{n-1}(x) via
/// H_{k+1} = 2x H_k − 2k H_{k−1}. For n = 0 the second value is 0.
inline std::pair<double, double> hermite_pair(int n, double x) {
    check_hermite_order(n);
    double prev = 0.0;
    double cur = 1.0;
    for (int k = 0; k < n; ++k) {
        const double next = 2.0 * x * cur - 2.0 * k * prev;
        prev = cur;
        cur = next;
    }
    return {cur, prev};
}

inline double hermite(int n, double x) { return hermite_pair(n, x).first; }

/// dH_n/dx = 2n H_{n−1}(x).
inline double hermite_derivative(int n, double x) {
    const auto [h, hm1] = hermite_pair(n, x);
    (void)h;
    return 2.0 * n * hm1;
}

}  // namespace logosc
