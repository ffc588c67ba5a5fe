#include "cshv/diagnostics.hpp"

#include "cshv/cartan.hpp"
#include "cshv/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace cshv;

namespace {

constexpr double kPi = std::numbers::pi;

struct Solved {
    CartanData data;
    ProblemSetup p;
    MinimizeResult res;
};

const Solved& rank1_solution() {
    static Solved s = [] {
        Solved out;
        out.data = make_cartan_data(AlgebraSpec::of(Family::A, 1));
        TorusGrid g{1.0, 1.0, 64, 64};
        VortexConfiguration vc;
        vc.points = {{{0.5, 0.5, 1}}};
        out.p = make_problem(out.data, g, vc, 2.0 * g.h1());
        SolverConfig cfg;
        cfg.lambda = 800.0;
        out.res = minimize(out.p, cfg);
        return out;
    }();
    return s;
}

}  // namespace

TEST_CASE("necessary condition check is strict") {
    CartanData data = make_cartan_data(AlgebraSpec::of(Family::A, 1));
    double l0 = 16.0 * kPi;
    CHECK_FALSE(check_necessary(l0, data, {1}, 1.0).pass);
    CHECK_FALSE(check_necessary(l0 * 0.5, data, {1}, 1.0).pass);
    CHECK(check_necessary(l0 * 1.000001, data, {1}, 1.0).pass);
    CHECK(check_necessary(l0, data, {1}, 1.0).lambda0 == doctest::Approx(l0).epsilon(1e-15));
}

TEST_CASE("quantized integrals vanish with the vortex number") {
    CartanData data = make_cartan_data(AlgebraSpec::of(Family::A, 1));
    TorusGrid g{1.0, 1.0, 32, 32};
    VortexConfiguration vc;
    vc.points = {{}};
    ProblemSetup p = make_problem(data, g, vc, 2.0 * g.h1());
    SolverConfig cfg;
    cfg.lambda = 50.0;
    MinimizeResult res = minimize(p, cfg);
    REQUIRE(res.status == MinimizeStatus::converged);
    auto q = quantized_integrals(p, res);
    CHECK(q[0].target == 0.0);
    CHECK(std::abs(q[0].value) < 1e-12);
}

TEST_CASE("quantized integral at a converged rank-1 solve") {
    const Solved& s = rank1_solution();
    REQUIRE(s.res.status == MinimizeStatus::converged);
    auto q = quantized_integrals(s.p, s.res);
    CHECK(q[0].target == doctest::Approx(4.0 * kPi / 800.0).epsilon(1e-15));
    CHECK(q[0].rel_error < 1e-8);
}

TEST_CASE("asymptotic distances are positive and finite") {
    const Solved& s = rank1_solution();
    auto d = asymptotic_distances(s.p, s.res);
    REQUIRE(d.size() == 1);
    CHECK(d[0] > 0.0);
    CHECK(d[0] < s.data.R_d[0] * s.data.R_d[0] * s.p.grid.area());
}

TEST_CASE("interpolation inequality margin") {
    const Solved& s = rank1_solution();
    for (double exp_s : {0.3, 0.5, 0.7, 0.9})
        CHECK(interpolation_check(s.p, s.res.lambda, s.res.w, exp_s, 0) >= 0.0);
    CHECK_THROWS_AS(interpolation_check(s.p, s.res.lambda, s.res.w, 1.5, 0), ConfigError);
}

TEST_CASE("report fields and formatting") {
    const Solved& s = rank1_solution();
    SolveReport rep = make_report(s.p, s.res);
    CHECK(rep.lambda == doctest::Approx(800.0));
    CHECK(rep.alpha0 > 0.0);
    CHECK(rep.beta0 > 0.0);
    CHECK(rep.quantized.size() == 1);
    std::string text = rep.to_text();
    CHECK(text.find("lambda = 800") != std::string::npos);
    CHECK(text.find("status = converged") != std::string::npos);
    CHECK(text.find("quantized") != std::string::npos);
}

TEST_CASE("sweep solves each coupling and reports monotone decay") {
    CartanData data = make_cartan_data(AlgebraSpec::of(Family::A, 1));
    TorusGrid g{1.0, 1.0, 64, 64};
    VortexConfiguration vc;
    vc.points = {{{0.5, 0.5, 1}}};
    ProblemSetup p = make_problem(data, g, vc, 2.0 * g.h1());
    SolverConfig base;
    auto sweep = asymptotic_sweep(p, {400.0, 200.0, 800.0}, base);
    REQUIRE(sweep.size() == 3);
    // sorted ascending internally
    CHECK(sweep[0].lambda == doctest::Approx(200.0));
    CHECK(sweep[2].lambda == doctest::Approx(800.0));
    for (const auto& pt : sweep) CHECK(pt.status == MinimizeStatus::converged);
    CHECK(sweep[0].distances[0] > sweep[1].distances[0]);
    CHECK(sweep[1].distances[0] > sweep[2].distances[0]);

    std::string csv = sweep_csv(sweep, 1);
    CHECK(csv.find("lambda") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 rows
}
