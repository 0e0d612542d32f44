#include <doctest.h>

#include <cmath>
#include <random>

#include "tsl/analysis.hpp"
#include "test_helpers.hpp"

using namespace tsl;

TEST_CASE("winding_number on analytic beams") {
    const TransverseGrid g = make_grid(64, 64, 16.0, 16.0);
    const Field2D gauss = lg_field({0, 1.0, 3.0, 1.0}, g);
    const Field2D vortex = lg_field({1, 1.0, 3.0, 1.0}, g);
    const Field2D conj_vortex = map_field(vortex, [](Complex v) { return std::conj(v); });

    CHECK(winding_number(gauss) == 0);
    CHECK(winding_number(vortex) == 1);
    CHECK(winding_number(vortex, 3.0) == 1);
    CHECK(winding_number(conj_vortex) == -1);

    // invariant under a global phase and a positive radial envelope
    const Field2D rotated = map_field(vortex, [](Complex v) { return v * std::polar(1.0, 2.1); });
    CHECK(winding_number(rotated) == 1);
    const Field2D enveloped = Field2D::from_function(g, [&](double x, double y) {
        const double rho2 = x * x + y * y;
        return Complex(x, y) * std::exp(-rho2 / 9.0) / (1.0 + 0.3 * rho2);
    });
    CHECK(winding_number(enveloped) == 1);
}

TEST_CASE("winding_number failure modes") {
    const TransverseGrid g = make_grid(32, 32, 16.0, 16.0);
    const Field2D vortex = lg_field({1, 1.0, 3.0, 1.0}, g);
    CHECK_THROWS_AS(winding_number(vortex, 100.0), InvalidArgument);  // circle off the grid
    CHECK_THROWS_AS(winding_number(vortex, -1.0), InvalidArgument);

    // amplitude below the noise floor on the circle
    Field2D hollow = vortex;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double r = std::hypot(g.x(i), g.y(j));
            if (r > 2.0) hollow.at(i, j) = 0.0;
        }
    CHECK_THROWS_AS(winding_number(hollow, 5.0), AmplitudeTooSmall);

    // even incoherent noise reads as an integer charge: bilinear sampling is
    // continuous around the ring, so the pre-rounding residual stays small
    // (the residual gate inside winding_number guards numerical corruption,
    // not any state reachable from well-formed fields)
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Field2D noise(g);
    for (Complex& v : noise.values) v = Complex(uni(rng), uni(rng));
    CHECK_NOTHROW(winding_number(noise, 5.0));
}

TEST_CASE("loss_ratio_analytic endpoints and shape") {
    CHECK(loss_ratio_analytic({0.0, 10.0, 20.0, 20.0, 20.0}) == 1.0);
    CHECK_THROWS_AS(loss_ratio_analytic({1.0, 10.0, 20.0, 21.0, 20.0}), WidthMismatch);
    CHECK_THROWS_AS(loss_ratio_analytic({-1.0, 10.0, 20.0, 20.0, 20.0}), InvalidArgument);
    CHECK_THROWS_AS(loss_ratio_analytic({1.0, 0.0, 20.0, 20.0, 20.0}), InvalidArgument);

    // 1 + 2 e^2 Ei(-2) at b=10, sigma_p=10 (u = 2)
    const double u2 = 1.0 + 2.0 * std::exp(2.0) * exponential_integral_ei(-2.0);
    CHECK(loss_ratio_analytic({10.0, 10.0, 20.0, 20.0, 20.0}) ==
          doctest::Approx(u2).epsilon(1e-14));
    CHECK(u2 == doctest::Approx(0.2773).epsilon(2e-4));

    double prev = 2.0;
    for (double b = 0.0; b <= 60.0; b += 1.0) {
        const double r = loss_ratio_analytic({b, 10.0, 20.0, 20.0, 20.0});
        CHECK(r > 0.0);
        CHECK(r <= 1.0);
        CHECK(r < prev);
        prev = r;
    }
}

TEST_CASE("loss_ratio_numeric agrees with the closed form and extends past it") {
    for (double b : {0.0, 0.5, 3.0, 10.0, 30.0, 100.0}) {
        const LossQuery q{b, 10.0, 20.0, 20.0, 20.0};
        const double numeric = loss_ratio_numeric(q);
        const double analytic = loss_ratio_analytic(q);
        CHECK(std::abs(numeric - analytic) <= 1e-8 * analytic);
    }

    // unequal retrieval widths: still a valid ratio, monotone in b
    double prev = 2.0;
    for (double b : {0.0, 1.0, 3.0, 10.0}) {
        const double r = loss_ratio_numeric({b, 10.0, 20.0, 26.0, 20.0});
        CHECK(r > 0.0);
        CHECK(r <= 1.0 + 1e-12);
        CHECK(r < prev);
        prev = r;
    }
}

TEST_CASE("loss_ratio_from_fields guards its resolution") {
    const TransverseGrid g = make_grid(32, 32, 16.0, 16.0);
    RetrievalResult r;
    r.energy_in = 1.0;
    r.energy_out = 0.5;
    // retrieved power pushed to the grid edge
    r.probe = Field2D::from_function(g, [&](double x, double y) {
        return std::exp(-(x * x + y * y) / 400.0);  // sigma much wider than the box
    });
    r.frozen_phiD = Field2D(g);
    CHECK_THROWS_AS(loss_ratio_from_fields(r), GridTooCoarse);

    r.probe = Field2D::from_function(
        g, [&](double x, double y) { return std::exp(-(x * x + y * y)); });
    CHECK(loss_ratio_from_fields(r) == doctest::Approx(0.5));

    r.energy_in = 0.0;
    CHECK_THROWS_AS(loss_ratio_from_fields(r), InvalidArgument);
}
