#include "test_support.hpp"

#include <cmath>

#include "logosc/observables.hpp"

using namespace logosc;
using test::abs;
using test::rel;

namespace {

OscillatorSpec paper_spec(Family f) { return OscillatorSpec::from_omega(f, 1.0, 10.0, 1.0); }

}  // namespace

TEST_CASE("coherent fluctuations", "[observables]") {
    const auto a = paper_spec(Family::CaseA);
    for (double t : {1.0, 4.0, 80.0}) CHECK_THAT(coherent_fluctuations(a, analytic_rho(a), t).product, rel(0.5, 1e-15));
    const auto b = paper_spec(Family::CaseB);
    const auto c = paper_spec(Family::CaseC);
    const double expected = 0.5 * std::sqrt(1.0 + 1.0 / 399.0);
    for (double t : {1.0, 4.0, 80.0}) {
        CHECK_THAT(coherent_fluctuations(b, analytic_rho(b), t).product, rel(expected, 1e-14));
        CHECK_THAT(coherent_fluctuations(c, analytic_rho(c), t).product, rel(expected, 1e-14));
    }
}

TEST_CASE("Fock-state closed forms", "[observables]") {
    const auto a = paper_spec(Family::CaseA);
    const auto f0 = fock_uncertainty(a, analytic_rho(a), 0, 2.0);
    CHECK(f0.product == 0.5);
    CHECK(f0.c11 == 0.0);
    CHECK(f0.c22 == -0.5);

    const auto b = paper_spec(Family::CaseB);
    const auto fb = fock_uncertainty(b, analytic_rho(b), 0, 3.0);
    CHECK_THAT(fb.product, rel(0.500627, 2e-6));
    CHECK_THAT(fb.product, rel(20.0 / std::sqrt(399.0) * 0.5, 1e-14));
    // Positive chirp for the growing amplitude.
    CHECK_THAT(fb.c11, rel(0.0250313, 2e-6));
    CHECK_THAT(fb.c11, rel(0.5 / std::sqrt(399.0), 1e-14));

    const auto c = paper_spec(Family::CaseC);
    const auto fc = fock_uncertainty(c, analytic_rho(c), 2, 3.0);
    CHECK_THAT(fc.product, rel(2.503133, 2e-6));
    CHECK_THAT(fc.c11, rel(-0.1251566, 2e-6));
}

TEST_CASE("moments oracle matches the closed forms", "[observables][oracle]") {
    for (Family f : {Family::CaseA, Family::CaseB, Family::CaseC, Family::ConstantBaseline}) {
        const auto spec = paper_spec(f);
        const auto sol = analytic_rho(spec);
        for (int n = 0; n <= 6; ++n) {
            for (double t : {1.0, 3.0, 30.0}) {
                const Moments m = moments_oracle(spec, sol, n, t);
                const auto closed = fock_uncertainty(spec, sol, n, t);
                CHECK_THAT(m.norm, abs(1.0, 1e-10));
                CHECK_THAT(m.q, abs(0.0, 1e-10 * sol.rho(t)));
                CHECK_THAT(m.product(), rel(closed.product, 1e-7));
                CHECK_THAT(m.c11(), abs(closed.c11, 1e-9));
                // Fock-state C22 from ladder algebra with x = m rho rho_dot.
                const double x = mass(spec, t) * sol.rho(t) * sol.rho_dot(t);
                const double nn = n;
                CHECK_THAT(m.c22(), rel(-0.5 * (nn * nn + nn + 1.0) * (1.0 - x * x), 1e-8));
            }
        }
    }
}

TEST_CASE("|C11| coincides for cases B and C, with opposite sign", "[observables]") {
    const auto b = paper_spec(Family::CaseB);
    const auto c = paper_spec(Family::CaseC);
    for (int n = 0; n <= 4; ++n) {
        const auto fb = fock_uncertainty(b, analytic_rho(b), n, 5.0);
        const auto fc = fock_uncertainty(c, analytic_rho(c), n, 5.0);
        CHECK_THAT(fb.c11, rel(-fc.c11, 1e-14));
        CHECK_THAT(fb.product, rel(fc.product, 1e-14));
    }
}

TEST_CASE("correlation identity holds for Gaussian states", "[observables]") {
    for (Family f : {Family::CaseA, Family::CaseB, Family::CaseC}) {
        const auto spec = paper_spec(f);
        const auto sol = analytic_rho(spec);
        const auto alpha = calibrate_coherent(spec, sol, 1.0, 0.0);
        for (double t : {1.0, 3.0, 30.0}) {
            CHECK(std::abs(fock_report(spec, sol, 0, t).relation39_residual) < 1e-9);
            const auto rep = coherent_report(alpha, spec, sol, t);
            CHECK(std::abs(rep.relation39_residual) < 1e-9);
            const Moments m = coherent_moments(alpha, spec, sol, t);
            CHECK_THAT(m.product(), rel(rep.product, 1e-9));
            const auto e = coherent_expectations(alpha, spec, sol, t);
            CHECK_THAT(m.q, abs(e.q, 1e-10));
            CHECK_THAT(m.p, abs(e.p, 1e-9));
        }
    }
}

TEST_CASE("excited Fock states sit strictly above the Gaussian bound when correlated", "[observables]") {
    const auto b = paper_spec(Family::CaseB);
    const auto sol = analytic_rho(b);
    for (int n = 1; n <= 6; ++n) {
        const auto rep = fock_report(b, sol, n, 3.0);
        CHECK(rep.relation39_residual > 0.0);
    }
    const auto a = paper_spec(Family::CaseA);
    for (int n = 1; n <= 6; ++n) CHECK(fock_report(a, analytic_rho(a), n, 3.0).relation39_residual > 0.0);
}

TEST_CASE("oracle order limit", "[observables]") {
    const auto a = paper_spec(Family::CaseA);
    REQUIRE_LOGOSC_ERROR(moments_oracle(a, analytic_rho(a), 11, 1.0), ErrorCode::InvalidParameter);
    REQUIRE_LOGOSC_ERROR(fock_uncertainty(a, analytic_rho(a), -1, 1.0), ErrorCode::InvalidParameter);
}
