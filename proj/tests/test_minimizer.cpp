#include "cshv/minimize.hpp"

#include "cshv/cartan.hpp"
#include "cshv/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace cshv;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Field> random_state(const TorusGrid& g, int n, unsigned seed, double amp = 0.1) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> nd(0.0, amp);
    std::vector<Field> w(n, Field(g));
    for (auto& f : w) {
        for (double& v : f.values) v = nd(rng);
        // keep it smooth enough for honest finite differences
        f = inverse_laplacian(laplacian(f));
        subtract_mean(f);
    }
    return w;
}

}  // namespace

TEST_CASE("zero vortex number yields the trivial solution") {
    CartanData data = make_cartan_data(AlgebraSpec::of(Family::A, 2));
    TorusGrid g{1.0, 1.0, 32, 32};
    VortexConfiguration vc;
    vc.points = {{}, {}};
    ProblemSetup p = make_problem(data, g, vc, 2.0 * g.h1());

    SolverConfig cfg;
    cfg.lambda = 100.0;
    MinimizeResult res = minimize(p, cfg);
    CHECK(res.status == MinimizeStatus::converged);
    CHECK(res.iterations == 0);
    for (const auto& v : res.v) CHECK(max_abs(v) < 1e-12);
    for (double t : res.constraint.t) CHECK(t == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("necessary condition is refused, not attempted") {
    CartanData data = make_cartan_data(AlgebraSpec::of(Family::A, 1));
    TorusGrid g{1.0, 1.0, 32, 32};
    VortexConfiguration vc;
    vc.points = {{{0.5, 0.5, 1}}};
    ProblemSetup p = make_problem(data, g, vc, 2.0 * g.h1());

    SolverConfig cfg;
    cfg.lambda = 16.0 * kPi;  // equals lambda0, strict inequality required
    MinimizeResult res = minimize(p, cfg);
    CHECK(res.status == MinimizeStatus::necessary_condition_violated);
    CHECK(res.iterations == 0);
    CHECK(res.lambda0 == doctest::Approx(16.0 * kPi).epsilon(1e-14));
}

TEST_CASE("reduced and unreduced functional agree at v = w + c") {
    CartanData data = make_cartan_data(AlgebraSpec::of(Family::A, 2));
    TorusGrid g{1.0, 1.0, 32, 32};
    VortexConfiguration vc;
    vc.points = {{{0.4, 0.4, 1}}, {{0.6, 0.7, 1}}};
    ProblemSetup p = make_problem(data, g, vc, 2.0 * g.h1());
    const double lambda = 900.0;

    auto w = random_state(g, 2, 5);
    FunctionalState st = functional_J(p, lambda, w);
    REQUIRE(st.admissible);

    std::vector<Field> v = w;
    for (int i = 0; i < 2; ++i)
        for (double& x : v[i].values) x += st.constraint.c[i];
    double I = functional_I(p, lambda, v);
    CHECK(st.J == doctest::Approx(I).epsilon(1e-10));

    // the resolved c is a stationary direction of I (envelope property)
    for (int i = 0; i < 2; ++i) {
        const double eps = 1e-6;
        std::vector<Field> vp = v, vm = v;
        for (double& x : vp[i].values) x += eps;
        for (double& x : vm[i].values) x -= eps;
        double dIdc = (functional_I(p, lambda, vp) - functional_I(p, lambda, vm)) / (2 * eps);
        CHECK(std::abs(dIdc) < 1e-6 * std::max(1.0, std::abs(I)));
    }
}

TEST_CASE("gradient matches central finite differences") {
    CartanData data = make_cartan_data(AlgebraSpec::of(Family::A, 3));
    TorusGrid g{1.0, 1.0, 32, 32};
    VortexConfiguration vc;
    vc.points = {{{0.3, 0.3, 1}}, {{0.7, 0.4, 1}}, {{0.5, 0.8, 1}}};
    ProblemSetup p = make_problem(data, g, vc, 2.0 * g.h1());
    const double lambda = 2000.0;

    std::mt19937 rng(17);
    std::normal_distribution<double> nd(0.0, 0.05);
    auto w = random_state(g, 3, 23);
    FunctionalState st = functional_J(p, lambda, w);
    REQUIRE(st.admissible);
    auto grad = gradient_J(p, lambda, st, w);

    for (int trial = 0; trial < 3; ++trial) {
        std::vector<Field> dir(3, Field(g));
        for (auto& f : dir) {
            for (double& v : f.values) v = nd(rng);
            subtract_mean(f);
        }
        double analytic = 0.0;
        for (int i = 0; i < 3; ++i)
            for (std::size_t k = 0; k < dir[i].values.size(); ++k)
                analytic += grad[i].values[k] * dir[i].values[k];
        analytic *= g.h1() * g.h2();

        const double eps = 1e-5;
        std::vector<Field> wp = w, wm = w;
        for (int i = 0; i < 3; ++i)
            for (std::size_t k = 0; k < dir[i].values.size(); ++k) {
                wp[i].values[k] += eps * dir[i].values[k];
                wm[i].values[k] -= eps * dir[i].values[k];
            }
        double fd =
            (functional_J(p, lambda, wp).J - functional_J(p, lambda, wm).J) / (2.0 * eps);
        CHECK(std::abs(fd - analytic) <= 1e-5 * std::max(1.0, std::abs(analytic)));
    }
}

TEST_CASE("rank 1 solve certifies all residuals") {
    CartanData data = make_cartan_data(AlgebraSpec::of(Family::A, 1));
    TorusGrid g{1.0, 1.0, 64, 64};
    VortexConfiguration vc;
    vc.points = {{{0.25, 0.75, 1}}};
    ProblemSetup p = make_problem(data, g, vc, 2.0 * g.h1());

    SolverConfig cfg;
    cfg.lambda = 800.0;
    MinimizeResult res = minimize(p, cfg);
    REQUIRE(res.status == MinimizeStatus::converged);
    CHECK(res.grad_norm <= cfg.g_tol * std::sqrt(g.area()));
    CHECK(res.constraint.residual < 1e-10);
    CHECK(res.pde_residual_scaled < 1e-6);
    CHECK(res.identity_residual < 1e-8);
    CHECK(res.envelope_residual < 1e-8);
    for (std::size_t i = 0; i < res.margins.size(); ++i) CHECK(res.margins[i] >= 0.0);
}

TEST_CASE("tarantello seed hits the interior membership target") {
    CartanData data = make_cartan_data(AlgebraSpec::of(Family::A, 2));
    TorusGrid g{1.0, 1.0, 64, 64};
    VortexConfiguration vc;
    vc.points = {{{0.3, 0.5, 1}}, {{0.7, 0.5, 1}}};
    ProblemSetup p = make_problem(data, g, vc, 2.0 * g.h1());

    std::vector<Field> w = tarantello_seed(p, 0.0);
    REQUIRE(w.size() == 2);
    for (const auto& f : w) CHECK(std::abs(mean(f)) < 1e-10);
    auto coeffs = coefficients_a(p.bg, w);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(coeffs.aM[i][j] < 2.0 * g.area());

    // seeded minimize still converges
    SolverConfig cfg;
    cfg.lambda = 1000.0;
    cfg.use_tarantello_seed = true;
    MinimizeResult res = minimize(p, cfg);
    CHECK(res.status == MinimizeStatus::converged);
}
