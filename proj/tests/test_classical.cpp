#include "test_support.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "logosc/classical.hpp"
#include "logosc/pinney.hpp"
#include "logosc/quantum_states.hpp"

using namespace logosc;
using test::abs;
using test::rel;

namespace {

OscillatorSpec paper_spec(Family f) { return OscillatorSpec::from_omega(f, 1.0, 10.0, 1.0); }

// Euler-type equation q'' + (a/t) q' + (w t0/t)^2 q = 0 solved by t^s with
// s^2 + (a - 1) s + (w t0)^2 = 0; q(t0) = 1, q'(t0) = 0 fixes the real combination.
std::pair<double, double> euler_oracle(double a, double w0t0, double m0, double t) {
    using C = std::complex<double>;
    const C disc = std::sqrt(C((a - 1.0) * (a - 1.0) - 4.0 * w0t0 * w0t0, 0.0));
    const C s1 = 0.5 * (-(a - 1.0) + disc);
    const C s2 = 0.5 * (-(a - 1.0) - disc);
    // c1 + c2 = 1, c1 s1 + c2 s2 = 0.
    const C c1 = -s2 / (s1 - s2);
    const C c2 = s1 / (s1 - s2);
    const C q = c1 * std::pow(C(t), s1) + c2 * std::pow(C(t), s2);
    const C qd = (c1 * s1 * std::pow(C(t), s1) + c2 * s2 * std::pow(C(t), s2)) / t;
    const double m = a == 1.0 ? m0 * t : (a == 2.0 ? m0 * t * t : m0);
    return {q.real(), m * qd.real()};
}

}  // namespace

TEST_CASE("closed forms start from rest at unit displacement", "[classical]") {
    for (Family f : {Family::CaseA, Family::CaseB, Family::CaseC, Family::ConstantBaseline}) {
        const auto s = closed_form_state(paper_spec(f), 1.0);
        CHECK_THAT(s.q, abs(1.0, 1e-15));
        CHECK_THAT(s.p, abs(0.0, 1e-15));
    }
    const auto half = closed_form_state(paper_spec(Family::CaseA), std::exp(std::numbers::pi / 10.0));
    CHECK_THAT(half.q, abs(-1.0, 1e-14));
    CHECK_THAT(half.p, abs(0.0, 1e-13));
}

TEST_CASE("closed forms match the Euler-equation oracle", "[classical][oracle]") {
    const double damping[] = {1.0, 0.0, 2.0};
    const Family fams[] = {Family::CaseA, Family::CaseB, Family::CaseC};
    for (int i = 0; i < 3; ++i) {
        const auto spec = paper_spec(fams[i]);
        for (double t : log_grid(1.0, 100.0, 97)) {
            const auto s = closed_form_state(spec, t);
            const auto [q, p] = euler_oracle(damping[i], 10.0, 1.0, t);
            CHECK_THAT(s.q, abs(q, 1e-11 * std::max(1.0, std::abs(q) + 10.0)));
            CHECK_THAT(s.p, abs(p, 1e-10 * std::max(1.0, std::abs(p) + 100.0)));
        }
    }
}

TEST_CASE("numeric trajectories agree with the closed forms", "[classical]") {
    for (Family f : {Family::CaseA, Family::CaseB, Family::CaseC, Family::ConstantBaseline}) {
        const auto spec = paper_spec(f);
        const auto grid = f == Family::ConstantBaseline ? linear_grid(1.0, 100.0, 3001) : log_grid(1.0, 100.0, 3001);
        const auto num = integrate_eom(spec, 1.0, 0.0, grid);
        const auto cf = closed_form_trajectory(spec, 1.0, 0.0, grid);
        double sq = 0.0, sp = 0.0, dq = 0.0, dp = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            sq = std::max(sq, std::abs(cf.q[i]));
            sp = std::max(sp, std::abs(cf.p[i]));
            dq = std::max(dq, std::abs(num.q[i] - cf.q[i]));
            dp = std::max(dp, std::abs(num.p[i] - cf.p[i]));
        }
        CHECK(dq / sq < 1e-6);
        CHECK(dp / sp < 1e-6);
    }
    const auto base = paper_spec(Family::ConstantBaseline);
    const auto tr = integrate_eom(base, 1.0, 0.0, linear_grid(1.0, 20.0, 500));
    for (std::size_t i = 0; i < tr.times.size(); ++i) CHECK_THAT(tr.q[i], abs(std::cos(10.0 * (tr.times[i] - 1.0)), 1e-6));
}

TEST_CASE("zero crossings are equally spaced in ln t", "[classical]") {
    const auto spec = paper_spec(Family::CaseA);
    const double t_end = std::exp(21.5 * std::numbers::pi / 10.0);
    const auto flow = integrate_flow(spec, 1.0, 0.0, t_end, 1e-12);
    const auto roots = zero_crossings(flow, 1.0, t_end);
    REQUIRE(roots.size() >= 21);
    for (int k = 0; k <= 20; ++k) {
        CHECK_THAT(std::log(roots[k]), abs((k + 0.5) * std::numbers::pi / 10.0, 1e-8));
    }
}

TEST_CASE("E t is constant at the turning points of case A", "[classical]") {
    const auto spec = paper_spec(Family::CaseA);
    const auto tr = integrate_eom(spec, 1.0, 0.0, log_grid(1.0, 100.0, 40000));
    std::vector<double> et;
    for (std::size_t i = 1; i + 1 < tr.q.size(); ++i) {
        const double a = std::abs(tr.q[i]);
        if (a >= std::abs(tr.q[i - 1]) && a >= std::abs(tr.q[i + 1])) {
            et.push_back(energy(spec, tr.q[i], tr.p[i], tr.times[i]) * tr.times[i]);
        }
    }
    REQUIRE(et.size() > 10);
    for (double v : et) CHECK_THAT(v, rel(et.front(), 1e-3));
}

TEST_CASE("envelopes grow as sqrt(t) in case B and decay as 1/sqrt(t) in case C", "[classical]") {
    for (auto [f, target] : {std::pair{Family::CaseB, 0.5}, std::pair{Family::CaseC, -0.5}}) {
        const auto tr = integrate_eom(paper_spec(f), 1.0, 0.0, log_grid(1.0, 100.0, 20000));
        const auto fit = fit_power_law(oscillation_peaks(tr.times, tr.q));
        CHECK_THAT(fit.exponent, abs(target, 0.02));
    }
}

TEST_CASE("the case A phase diagram is a closed ellipse", "[classical]") {
    const auto spec = paper_spec(Family::CaseA);
    const auto tr = phase_diagram(spec, 1.0, 0.0, 100.0, 2000);
    for (std::size_t i = 0; i < tr.q.size(); ++i) {
        CHECK_THAT(tr.q[i] * tr.q[i] + std::pow(tr.p[i] / 10.0, 2), abs(1.0, 1e-6));
    }
}

TEST_CASE("Ehrenfest agreement for the case A coherent state", "[classical]") {
    const auto spec = paper_spec(Family::CaseA);
    const auto sol = analytic_rho(spec);
    const auto alpha = calibrate_coherent(spec, sol, 1.0, 0.0);
    for (double t : log_grid(1.0, 100.0, 300)) {
        const auto qp = coherent_expectations(alpha, spec, sol, t);
        const auto cl = closed_form_state(spec, t);
        CHECK_THAT(qp.q, abs(cl.q, 1e-9));
        CHECK_THAT(qp.p, abs(cl.p, 1e-8));
    }
}

TEST_CASE("classical domain errors", "[classical]") {
    const auto spec = paper_spec(Family::CaseB);
    const auto grid = log_grid(1.0, 10.0, 10);
    REQUIRE_LOGOSC_ERROR(closed_form_trajectory(spec, 0.5, 0.0, grid), ErrorCode::UnsupportedInitialConditions);
    REQUIRE_LOGOSC_ERROR(integrate_eom(spec, 1.0, 0.0, {1.0, 0.5}), ErrorCode::InvalidParameter);
    REQUIRE_LOGOSC_ERROR(integrate_eom(spec, 1.0, 0.0, {0.5, 2.0}), ErrorCode::OutOfDomain);
    REQUIRE_LOGOSC_ERROR(closed_form_state(spec, 0.0), ErrorCode::NonPositiveTime);
    REQUIRE_LOGOSC_ERROR(phase_diagram(spec, 1.0, 0.0, 10.0, 1), ErrorCode::InvalidParameter);
}
