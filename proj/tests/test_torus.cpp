#include "cshv/errors.hpp"
#include "cshv/torus.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace cshv;

namespace {

constexpr double kPi = std::numbers::pi;

Field random_smooth(const TorusGrid& g, unsigned seed, double amp = 0.5) {
    // low-order trigonometric polynomial with random coefficients
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> coef(-amp, amp);
    struct Mode {
        int m1, m2;
        double cc, cs;
    };
    std::vector<Mode> modes;
    for (int m1 = -3; m1 <= 3; ++m1)
        for (int m2 = 0; m2 <= 3; ++m2) {
            if (m1 == 0 && m2 == 0) continue;
            modes.push_back({m1, m2, coef(rng), coef(rng)});
        }
    Field f(g);
    for (int i = 0; i < g.M1; ++i)
        for (int j = 0; j < g.M2; ++j) {
            double x = i * g.h1(), y = j * g.h2();
            double s = 0.0;
            for (const auto& m : modes) {
                double phase = 2.0 * kPi * (m.m1 * x / g.L1 + m.m2 * y / g.L2);
                s += m.cc * std::cos(phase) + m.cs * std::sin(phase);
            }
            f.at(i, j) = s;
        }
    subtract_mean(f);
    return f;
}

}  // namespace

TEST_CASE("grid validation") {
    TorusGrid g{1.0, 2.0, 64, 32};
    CHECK_NOTHROW(g.check());
    CHECK(g.area() == doctest::Approx(2.0));
    CHECK_THROWS_AS((TorusGrid{1.0, 1.0, 63, 64}.check()), ConfigError);
    CHECK_THROWS_AS((TorusGrid{-1.0, 1.0, 64, 64}.check()), ConfigError);
    CHECK_THROWS_AS((TorusGrid{1.0, 1.0, 0, 64}.check()), ConfigError);
}

TEST_CASE("quadrature and mean of constants") {
    TorusGrid g{1.5, 2.0, 32, 64};
    Field f(g, 3.0);
    CHECK(quadrature(f) == doctest::Approx(3.0 * g.area()).epsilon(1e-14));
    CHECK(mean(f) == doctest::Approx(3.0).epsilon(1e-14));
    subtract_mean(f);
    CHECK(max_abs(f) < 1e-14);
}

TEST_CASE("laplacian eigenfunction oracle") {
    // f = cos(2 pi (m1 x / L1 + m2 y / L2)) is an exact eigenfunction with
    // eigenvalue -|k|^2, k = 2 pi (m1/L1, m2/L2).
    TorusGrid g{1.0, 1.5, 64, 96};
    const int m1 = 3, m2 = 2;
    Field f(g);
    for (int i = 0; i < g.M1; ++i)
        for (int j = 0; j < g.M2; ++j)
            f.at(i, j) =
                std::cos(2.0 * kPi * (m1 * i * g.h1() / g.L1 + m2 * j * g.h2() / g.L2));
    double k1 = 2.0 * kPi * m1 / g.L1, k2 = 2.0 * kPi * m2 / g.L2;
    double ev = -(k1 * k1 + k2 * k2);
    Field lap = laplacian(f);
    double worst = 0.0;
    for (std::size_t s = 0; s < f.values.size(); ++s)
        worst = std::max(worst, std::abs(lap.values[s] - ev * f.values[s]));
    CHECK(worst < 1e-10 * std::abs(ev));
}

TEST_CASE("laplacian of a constant is zero") {
    TorusGrid g{2.0, 1.0, 32, 32};
    Field f(g, 7.5);
    CHECK(max_abs(laplacian(f)) < 1e-12);
}

TEST_CASE("inverse laplacian roundtrip") {
    TorusGrid g{1.0, 1.0, 64, 64};
    Field f = random_smooth(g, 11);
    Field back = laplacian(inverse_laplacian(f));
    double worst = 0.0;
    for (std::size_t s = 0; s < f.values.size(); ++s)
        worst = std::max(worst, std::abs(back.values[s] - f.values[s]));
    CHECK(worst < 1e-10);
    CHECK(std::abs(mean(inverse_laplacian(f))) < 1e-12);
}

TEST_CASE("background field invariants") {
    TorusGrid g{1.0, 1.0, 128, 128};
    VortexConfiguration vc;
    vc.points = {{{0.3, 0.4, 2}, {0.8, 0.1, 1}}, {{0.5, 0.5, 1}}};
    BackgroundField bg = background(g, vc, 2.0 * g.h1());

    REQUIRE(bg.u0.size() == 2);
    CHECK(bg.N == std::vector<int>{3, 1});

    for (int i = 0; i < 2; ++i) {
        CHECK(std::abs(mean(bg.u0[i])) < 1e-12);
        // the source has mean zero on the torus, pointwise
        Field lap = laplacian(bg.u0[i]);
        CHECK(std::abs(quadrature(lap)) < 1e-9);
        // total positive mass of lap + 4 pi N / |Omega| equals 4 pi N
        Field src = lap;
        for (double& v : src.values) v += 4.0 * kPi * bg.N[i] / g.area();
        CHECK(quadrature(src) == doctest::Approx(4.0 * kPi * bg.N[i]).epsilon(1e-9));
    }
}

TEST_CASE("background matches direct Fourier summation at the center") {
    // one unit vortex at the cell center; independently evaluate
    // u0(x) = sum_k 4pi/|Omega| e^{-sigma^2|k|^2/2} e^{ik(x-p)} / (-|k|^2)
    TorusGrid g{1.0, 1.0, 128, 128};
    const double sigma = 2.0 * g.h1();
    VortexConfiguration vc;
    vc.points = {{{0.5, 0.5, 1}}};
    BackgroundField bg = background(g, vc, sigma);

    auto direct = [&](double x, double y) {
        double s = 0.0;
        for (int m1 = -g.M1 / 2; m1 < g.M1 / 2; ++m1)
            for (int m2 = -g.M2 / 2; m2 < g.M2 / 2; ++m2) {
                if (m1 == 0 && m2 == 0) continue;
                double k1 = 2.0 * kPi * m1 / g.L1, k2 = 2.0 * kPi * m2 / g.L2;
                double k2norm = k1 * k1 + k2 * k2;
                double re = std::cos(k1 * (x - 0.5) + k2 * (y - 0.5));
                s += 4.0 * kPi / g.area() * std::exp(-0.5 * sigma * sigma * k2norm) * re /
                     (-k2norm);
            }
        return s;
    };

    CHECK(bg.u0[0].at(64, 64) == doctest::Approx(direct(0.5, 0.5)).epsilon(1e-9));
    CHECK(bg.u0[0].at(32, 16) == doctest::Approx(direct(0.25, 0.125)).epsilon(1e-9));
    // minimum sits at the vortex point
    double mn = bg.u0[0].values[0];
    std::size_t arg = 0;
    for (std::size_t s = 0; s < bg.u0[0].values.size(); ++s)
        if (bg.u0[0].values[s] < mn) {
            mn = bg.u0[0].values[s];
            arg = s;
        }
    CHECK(arg == static_cast<std::size_t>(64) * g.M2 + 64);
}

TEST_CASE("background rejects unresolvable sigma") {
    TorusGrid g{1.0, 1.0, 32, 32};
    VortexConfiguration vc;
    vc.points = {{{0.5, 0.5, 1}}};
    CHECK_THROWS_AS(background(g, vc, 0.25 * g.h1()), ResolutionError);
}

TEST_CASE("vortex reduction to the fundamental cell") {
    TorusGrid g{1.0, 2.0, 32, 32};
    VortexConfiguration vc;
    vc.points = {{{1.25, -0.5, 1}, {-0.75, 4.1, 2}}};
    vc.reduce_to_cell(g);
    CHECK(vc.points[0][0].x == doctest::Approx(0.25));
    CHECK(vc.points[0][0].y == doctest::Approx(1.5));
    CHECK(vc.points[0][1].x == doctest::Approx(0.25));
    CHECK(vc.points[0][1].y == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(vc.counts() == std::vector<int>{3});
}

TEST_CASE("integral coefficients: structural inequalities") {
    TorusGrid g{1.0, 1.0, 64, 64};
    VortexConfiguration vc;
    vc.points = {{{0.3, 0.3, 1}}, {{0.6, 0.7, 1}}};
    BackgroundField bg = background(g, vc, 2.0 * g.h1());

    std::vector<Field> w{random_smooth(g, 3), random_smooth(g, 4)};
    IntegralCoefficients c = coefficients_a(bg, w);

    for (int i = 0; i < 2; ++i) {
        CHECK(c.a[i] > 0.0);
        // Cauchy-Schwarz: a_i^2 <= |Omega| a_ii
        CHECK(c.a[i] * c.a[i] <= g.area() * c.aM[i][i] * (1.0 + 1e-13));
        // Jensen with mean-zero exponent: a_i >= |Omega|
        CHECK(c.a[i] >= g.area() * (1.0 - 1e-13));
    }
    CHECK(c.aM[0][1] == c.aM[1][0]);
    // aM_ij^2 <= aM_ii aM_jj
    CHECK(c.aM[0][1] * c.aM[0][1] <= c.aM[0][0] * c.aM[1][1] * (1.0 + 1e-13));
}

TEST_CASE("integral coefficients: exponent range guard") {
    TorusGrid g{1.0, 1.0, 32, 32};
    VortexConfiguration vc;
    vc.points = {{{0.5, 0.5, 1}}};
    BackgroundField bg = background(g, vc, 2.0 * g.h1());
    std::vector<Field> w{Field(g, 800.0)};
    CHECK_THROWS_AS(coefficients_a(bg, w), RangeError);
    // pair exponent can overflow even when singles are fine
    std::vector<Field> w2{Field(g, 400.0)};
    CHECK_THROWS_AS(coefficients_a(bg, w2), RangeError);
}
