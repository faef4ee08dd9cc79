#include "test_support.hpp"

#include <cmath>

#include "logosc/classical.hpp"
#include "logosc/pinney.hpp"

using namespace logosc;
using test::abs;
using test::rel;

namespace {

OscillatorSpec paper_spec(Family f) { return OscillatorSpec::from_omega(f, 1.0, 10.0, 1.0); }

// Closed forms written out independently of the library.
double rho_oracle(Family f, double m0, double w0, double t0, double t) {
    const double D = 4.0 * w0 * w0 * t0 * t0 - 1.0;
    switch (f) {
    case Family::CaseA:
    case Family::ConstantBaseline: return 1.0 / std::sqrt(m0 * w0);
    case Family::CaseB: return std::sqrt(2.0 * t / m0) / std::pow(D, 0.25);
    case Family::CaseC: return std::sqrt(2.0 / m0) * t0 / (std::pow(D, 0.25) * std::sqrt(t));
    default: return 0.0;
    }
}

}  // namespace

TEST_CASE("closed-form amplitudes at the plot parameters", "[pinney]") {
    CHECK_THAT(analytic_rho(paper_spec(Family::CaseA)).rho(7.0), rel(0.316227766016838, 1e-12));
    CHECK_THAT(analytic_rho(paper_spec(Family::CaseB)).rho(1.0), rel(std::sqrt(2.0) / std::pow(399.0, 0.25), 1e-14));
    // Quoted decimals are good to about four significant digits.
    CHECK_THAT(analytic_rho(paper_spec(Family::CaseB)).rho(1.0), rel(0.316434, 1e-4));
    CHECK_THAT(analytic_rho(paper_spec(Family::CaseC)).rho(4.0), rel(0.158217, 1e-4));
    CHECK_THAT(analytic_rho(paper_spec(Family::CaseC)).rho(4.0),
               rel(0.5 * analytic_rho(paper_spec(Family::CaseB)).rho(1.0), 1e-14));
}

TEST_CASE("closed forms agree with the independent oracle over parameters", "[pinney][property]") {
    for (Family f : {Family::CaseA, Family::CaseB, Family::CaseC, Family::ConstantBaseline}) {
        for (double m0 : {0.5, 2.0}) {
            for (double w0 : {1.0, 10.0, 37.0}) {
                for (double t0 : {0.5, 1.0, 3.0}) {
                    const auto spec = OscillatorSpec::from_omega(f, m0, w0, t0);
                    if (spec.discriminant() <= 0.0 && (f == Family::CaseB || f == Family::CaseC)) continue;
                    const auto sol = analytic_rho(spec);
                    for (double s : {1.0, 2.5, 40.0}) {
                        const double t = s * t0;
                        CHECK_THAT(sol.rho(t), rel(rho_oracle(f, m0, w0, t0, t), 1e-13));
                        // Derivatives against central differences of the oracle.
                        const double h = 1e-5 * t;
                        const double d1 = (rho_oracle(f, m0, w0, t0, t + h) - rho_oracle(f, m0, w0, t0, t - h)) / (2 * h);
                        CHECK_THAT(sol.rho_dot(t), abs(d1, 1e-8 * sol.rho(t) / t));
                        CHECK(pinney_residual_normalized(spec, sol, t) < 1e-10);
                    }
                }
            }
        }
    }
}

TEST_CASE("closed-form residuals at t = 10", "[pinney]") {
    CHECK_THAT(pinney_residual(paper_spec(Family::CaseA), analytic_rho(paper_spec(Family::CaseA)), 3.3), abs(0.0, 1e-12));
    CHECK(pinney_residual_normalized(paper_spec(Family::CaseB), analytic_rho(paper_spec(Family::CaseB)), 10.0) < 1e-10);
    CHECK(pinney_residual_normalized(paper_spec(Family::CaseC), analytic_rho(paper_spec(Family::CaseC)), 10.0) < 1e-10);
}

TEST_CASE("sqrt(t) scaling of the B and C amplitudes", "[pinney][property]") {
    const auto b = analytic_rho(paper_spec(Family::CaseB));
    const auto c = analytic_rho(paper_spec(Family::CaseC));
    for (double t : {1.0, 2.0, 7.5, 30.0}) {
        CHECK_THAT(b.rho(4.0 * t), rel(2.0 * b.rho(t), 1e-14));
        CHECK_THAT(c.rho(4.0 * t), rel(0.5 * c.rho(t), 1e-14));
    }
    CHECK_THAT(b.rho(100.0) / b.rho(1.0), rel(10.0, 1e-9));
}

TEST_CASE("numeric solution seeded with closed-form data tracks the closed form", "[pinney]") {
    for (Family f : {Family::CaseA, Family::CaseB, Family::CaseC, Family::ConstantBaseline}) {
        const auto spec = paper_spec(f);
        const auto closed = analytic_rho(spec);
        const auto numeric = solve_pinney_numeric(spec, closed.rho(1.0), closed.rho_dot(1.0), 1.0, 100.0);
        const auto grid = f == Family::ConstantBaseline ? linear_grid(1.0, 100.0, 3000) : log_grid(1.0, 100.0, 3000);
        for (double t : grid) CHECK_THAT(numeric.rho(t), rel(closed.rho(t), 1e-6));
    }
    const auto spec = paper_spec(Family::CaseB);
    const auto closed = analytic_rho(spec);
    const auto numeric = solve_pinney_numeric(spec, closed.rho(1.0), closed.rho_dot(1.0), 1.0, 10.0);
    CHECK_THAT(numeric.rho(4.0), rel(2.0 * closed.rho(1.0), 1e-8));
    CHECK_THAT(numeric.rho(4.0), rel(0.632868, 1e-4));
}

TEST_CASE("perturbed constant-baseline amplitude stays bounded and positive", "[pinney]") {
    const auto spec = paper_spec(Family::ConstantBaseline);
    const double rho_eq = 1.0 / std::sqrt(10.0);
    const auto sol = solve_pinney_numeric(spec, 1.1 * rho_eq, 0.0, 1.0, 50.0);
    double lo = 1e300, hi = 0.0;
    for (double t : linear_grid(1.0, 50.0, 20000)) {
        lo = std::min(lo, sol.rho(t));
        hi = std::max(hi, sol.rho(t));
    }
    CHECK(lo > 0.0);
    CHECK(lo < rho_eq);
    CHECK(hi > rho_eq);
    CHECK_THAT(hi, rel(1.1 * rho_eq, 1e-6));
    // ρ oscillates between the turning points 1.1 ρ* and ρ*/1.1.
    CHECK_THAT(lo, rel(rho_eq / 1.1, 1e-6));
}

TEST_CASE("Pinney domain errors", "[pinney]") {
    REQUIRE_LOGOSC_ERROR(analytic_rho(OscillatorSpec::from_omega(Family::CaseB, 1.0, 0.4, 1.0)),
                         ErrorCode::NonPositiveDiscriminant);
    const auto spec = paper_spec(Family::CaseA);
    REQUIRE_LOGOSC_ERROR(solve_pinney_numeric(spec, 0.3, 0.0, 1.0, 10.0, 1e-13), ErrorCode::InvalidParameter);
    REQUIRE_LOGOSC_ERROR(solve_pinney_numeric(spec, -0.3, 0.0, 1.0, 10.0), ErrorCode::InvalidParameter);
    REQUIRE_LOGOSC_ERROR(solve_pinney_numeric(spec, 0.3, 0.0, 0.0, 10.0), ErrorCode::NonPositiveTime);
    const auto numeric = solve_pinney_numeric(spec, 0.3, 0.0, 1.0, 10.0);
    REQUIRE_LOGOSC_ERROR(numeric.rho(20.0), ErrorCode::OutOfDomain);
    auto m = [](double t) { return t; };
    auto k = [](double t) { return 1.0 / t; };
    REQUIRE_LOGOSC_ERROR(analytic_rho(OscillatorSpec::user_defined(m, k, 1.0, 1.0, 1.0)), ErrorCode::UnsupportedFamily);
}
