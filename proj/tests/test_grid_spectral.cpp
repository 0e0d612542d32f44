#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "tsl/fft.hpp"
#include "tsl/grid.hpp"
#include "tsl/io.hpp"
#include "test_helpers.hpp"

using namespace tsl;

TEST_CASE("make_grid spacing and centering") {
    const TransverseGrid g = make_grid(64, 64, 40.0, 40.0);
    CHECK(g.dx() == doctest::Approx(0.625).epsilon(1e-15));
    CHECK(g.dy() == doctest::Approx(0.625).epsilon(1e-15));

    // the origin is an actual sample
    const TransverseGrid s = make_grid(8, 8, 8.0, 8.0);
    CHECK(s.x(4) == 0.0);
    CHECK(s.y(4) == 0.0);
}

TEST_CASE("make_grid rejects bad dimensions") {
    CHECK_THROWS_AS(make_grid(7, 8, 8.0, 8.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid(8, 10, 8.0, -1.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid(6, 8, 8.0, 8.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid(8, 8, 0.0, 8.0), InvalidArgument);
}

TEST_CASE("constant field transforms to a pure DC spectrum") {
    const TransverseGrid g = make_grid(16, 16, 4.0, 4.0);
    const Field2D f = Field2D::from_function(g, [](double, double) { return 2.0; });
    const Field2D s = transverse_spectrum(f);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (i == g.nx / 2 && j == g.ny / 2)
                CHECK(std::abs(s.at(i, j)) == doctest::Approx(2.0 * 16.0).epsilon(1e-12));
            else
                CHECK(std::abs(s.at(i, j)) < 1e-12);
        }
}

TEST_CASE("grid-aligned plane wave occupies a single spectral sample") {
    const TransverseGrid g = make_grid(16, 16, 8.0, 8.0);
    const int m = 3;
    const Field2D f = Field2D::from_function(g, [&](double x, double) {
        const double phase = 2.0 * std::numbers::pi * m * x / g.lx;
        return Complex(std::cos(phase), std::sin(phase));
    });
    const Field2D s = transverse_spectrum(f);
    int nonzero = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (std::abs(s.at(i, j)) > 1e-9) {
                ++nonzero;
                CHECK(i == g.nx / 2 + m);
                CHECK(j == g.ny / 2);
            }
    CHECK(nonzero == 1);
}

TEST_CASE("spectral round trip and Parseval hold to 1e-12 on random fields") {
    std::mt19937_64 rng(7);
    // 12 and 20 exercise the non-power-of-two path
    for (auto [nx, ny] : {std::pair{16, 16}, std::pair{12, 20}, std::pair{64, 32}}) {
        const TransverseGrid g = make_grid(nx, ny, 5.0, 7.0);
        for (int trial = 0; trial < 5; ++trial) {
            const Field2D f = testing::random_field(g, rng);
            const Field2D s = transverse_spectrum(f);
            const Field2D back = inverse_spectrum(s);
            double ref = std::sqrt(field_power(f));
            double err = 0.0;
            for (std::size_t k = 0; k < f.values.size(); ++k)
                err += std::norm(back.values[k] - f.values[k]);
            err = std::sqrt(err * g.dx() * g.dy());
            CHECK(err / ref < 1e-12);
            CHECK(field_power(s) == doctest::Approx(field_power(f)).epsilon(1e-12));
        }
    }
}

TEST_CASE("field_power") {
    const TransverseGrid g = make_grid(16, 16, 10.0, 10.0);
    CHECK(field_power(Field2D(g)) == 0.0);

    // unit amplitude over a 10x10 extent
    const Field2D ones = Field2D::from_function(g, [](double, double) { return 1.0; });
    CHECK(field_power(ones) == doctest::Approx(100.0).epsilon(1e-14));

    // Gaussian quadrature: (pi/2)|E0|^2 sigma^2 once the tails fit the box
    const double sigma = 3.0, e0 = 1.7;
    const TransverseGrid gg = make_grid(128, 128, 8.0 * sigma, 8.0 * sigma);
    const Field2D gauss = Field2D::from_function(gg, [&](double x, double y) {
        return e0 * std::exp(-(x * x + y * y) / (sigma * sigma));
    });
    const double expected = 0.5 * std::numbers::pi * e0 * e0 * sigma * sigma;
    CHECK(field_power(gauss) == doctest::Approx(expected).epsilon(1e-3));

    // invariant under a global phase
    const Field2D rotated = map_field(gauss, [](Complex v) {
        return v * Complex(std::cos(0.7), std::sin(0.7));
    });
    CHECK(field_power(rotated) == doctest::Approx(field_power(gauss)).epsilon(1e-14));
}

TEST_CASE("finite-value guard") {
    const TransverseGrid g = make_grid(8, 8, 1.0, 1.0);
    Field2D f(g);
    f.values[3] = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    CHECK_THROWS_AS(transverse_spectrum(f), InvalidArgument);
}

TEST_CASE("tsl dump round trip is bit exact") {
    std::mt19937_64 rng(11);
    const TransverseGrid g = make_grid(12, 8, 3.0, 2.0);
    const Field2D f = testing::random_field(g, rng);
    const auto path = std::filesystem::temp_directory_path() / "tsl_io_test.tsl";
    write_field_tsl(path, f);
    const Field2D back = read_field_tsl(path);
    CHECK(back.grid == f.grid);
    REQUIRE(back.values.size() == f.values.size());
    for (std::size_t k = 0; k < f.values.size(); ++k) CHECK(back.values[k] == f.values[k]);
    std::filesystem::remove(path);
}

TEST_CASE("tsl reader rejects foreign files") {
    const auto path = std::filesystem::temp_directory_path() / "tsl_io_bad.tsl";
    std::ofstream(path) << "not a field dump";
    CHECK_THROWS_AS(read_field_tsl(path), Error);
    std::filesystem::remove(path);
}

TEST_CASE("csv export shape") {
    const TransverseGrid g = make_grid(8, 8, 1.0, 1.0);
    const Field2D f = Field2D::from_function(g, [](double x, double y) { return x + y; });
    const auto path = std::filesystem::temp_directory_path() / "tsl_io_test.csv";
    write_field_csv(path, f);
    std::ifstream in(path);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 1 + 8 * 8);
    std::filesystem::remove(path);
}
