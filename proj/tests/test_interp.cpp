#include <doctest.h>

#include <cmath>
#include <random>

#include <axibouss/interp.hpp>

using namespace axibouss;

TEST_SUITE("interp") {

TEST_CASE("nodes are reproduced") {
    const MeridionalGrid g(12, 15, 2.0, 1.5);
    const auto f = ScalarField2D::sample(g, Parity::Even, [](double r, double z) { return std::cos(r * z) + r; });
    for (std::size_t i = 0; i < g.nr(); ++i)
        for (std::size_t j = 0; j < g.nz(); ++j) CHECK(sample_bicubic(f, g.r(i), g.z(j)) == doctest::Approx(f(i, j)).epsilon(1e-14));
}

TEST_CASE("bilinear fields are exact off the axis, including the outer edges") {
    const MeridionalGrid g(10, 10, 1.0, 1.0);
    auto lin = [](double r, double z) { return 0.5 + 2.0 * z - 0.25 * r * z; };
    const auto f = ScalarField2D::sample(g, Parity::Even, lin);
    std::mt19937 rng(3);
    // the first cell reflects through the axis, which only even profiles survive
    std::uniform_real_distribution<double> ur(g.dr(), 1.0), uz(-1.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const double r = ur(rng), z = uz(rng);
        CHECK(sample_bicubic(f, r, z) == doctest::Approx(lin(r, z)).epsilon(1e-12));
    }
}

TEST_CASE("reflection through the axis follows parity") {
    const MeridionalGrid g(16, 16, 1.0, 1.0);
    const auto odd = ScalarField2D::sample(g, Parity::Odd, [](double r, double z) { return std::sin(2 * r) * (1 + z); });
    const auto even = ScalarField2D::sample(g, Parity::Even, [](double r, double z) { return std::cos(2 * r) * (1 + z); });
    for (double r : {0.01, 0.07, 0.3}) {
        CHECK(sample_bicubic(odd, -r, 0.2) == doctest::Approx(-sample_bicubic(odd, r, 0.2)).epsilon(1e-14));
        CHECK(sample_bicubic(even, -r, 0.2) == doctest::Approx(sample_bicubic(even, r, 0.2)).epsilon(1e-14));
    }
    // odd samples vanish on the axis
    CHECK(sample_bicubic(odd, 0.0, 0.37) == 0.0);
}

TEST_CASE("smooth data converge at fourth order inside the domain") {
    auto f = [](double r, double z) { return std::cos(3 * r) * std::sin(2 * z); };
    double prev = 0.0;
    for (std::size_t n : {17u, 33u, 65u}) {
        const MeridionalGrid g(n, n, 2.0, 1.0);
        const auto s = ScalarField2D::sample(g, Parity::Even, f);
        double e = 0.0;
        for (double r = 0.3; r < 1.7; r += 0.0731)
            for (double z = -0.7; z < 0.7; z += 0.0577) e = std::max(e, std::abs(sample_bicubic(s, r, z) - f(r, z)));
        if (prev > 0.0) CHECK(std::log2(prev / e) > 2.8);
        prev = e;
    }
}

TEST_CASE("containing cell") {
    const MeridionalGrid g(11, 21, 1.0, 1.0);
    auto c = containing_cell(g, 0.25, 0.0);
    CHECK(c.i0 == 2);
    CHECK(c.j0 == 10);
    c = containing_cell(g, -0.25, -5.0); // reflected, clamped
    CHECK(c.i0 == 2);
    CHECK(c.j0 == 0);
    c = containing_cell(g, 1.0, 1.0); // top-right corner stays inside the grid
    CHECK(c.i0 == 9);
    CHECK(c.j0 == 19);
}

}
