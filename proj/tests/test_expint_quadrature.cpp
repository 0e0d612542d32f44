#include <doctest.h>

#include <cmath>

#include "tsl/expint.hpp"
#include "tsl/quadrature.hpp"

using namespace tsl;

namespace {

// Independent oracle: E1(z) = int_z^{z+70} e^{-t}/t dt by adaptive
// quadrature (the remaining tail is below 1e-30 relative), so
// Ei(x) = -E1(-x) for x < 0 without touching the series or the continued
// fraction used by the implementation.
double ei_oracle(double x) {
    const double z = -x;
    QuadratureOptions opt;
    opt.rel_tol = 1e-13;
    opt.max_intervals = 40000;
    const auto r = integrate_adaptive([](double t) { return std::exp(-t) / t; }, z, z + 70.0, opt);
    return -r.value;
}

} // namespace

TEST_CASE("adaptive quadrature on knowns") {
    QuadratureOptions opt;
    opt.rel_tol = 1e-12;
    const auto cubic = integrate_adaptive([](double x) { return x * x * x; }, 0.0, 1.0, opt);
    CHECK(cubic.value == doctest::Approx(0.25).epsilon(1e-13));

    const auto sine = integrate_adaptive([](double x) { return std::sin(x); }, 0.0,
                                         std::acos(-1.0), opt);
    CHECK(sine.value == doctest::Approx(2.0).epsilon(1e-12));

    // steep but integrable: resolves under refinement
    const auto steep =
        integrate_adaptive([](double t) { return 1.0 / std::sqrt(t); }, 1e-12, 1.0, opt);
    CHECK(steep.value == doctest::Approx(2.0 - 2e-6).epsilon(1e-9));
}

TEST_CASE("quadrature budget exhaustion is reported") {
    QuadratureOptions opt;
    opt.rel_tol = 1e-15;
    opt.max_intervals = 8;
    CHECK_THROWS_AS(
        integrate_adaptive([](double x) { return std::sin(50.0 * x) / (1e-9 + x * x); }, 0.0,
                           1.0, opt),
        QuadratureNonConvergent);
}

TEST_CASE("Ei at tabulated points") {
    CHECK(std::abs(exponential_integral_ei(-1.0) - (-0.21938393439552027)) < 1e-12);
    CHECK(std::abs(exponential_integral_ei(-2.0) - (-0.04890051070806112)) < 1e-12);
}

TEST_CASE("Ei agrees with the defining-integral oracle to 1e-12") {
    for (double x : {-50.0, -20.0, -10.5, -10.0, -9.9, -5.0, -1.0, -0.1, -1e-3, -1e-6})
        CHECK(std::abs(exponential_integral_ei(x) - ei_oracle(x)) < 1e-12);
}

TEST_CASE("Ei diverges logarithmically toward zero") {
    CHECK(exponential_integral_ei(-1e-8) < -17.0);
}

TEST_CASE("Ei rejects nonnegative arguments") {
    CHECK_THROWS_AS(exponential_integral_ei(0.0), InvalidArgument);
    CHECK_THROWS_AS(exponential_integral_ei(1.0), InvalidArgument);
}
