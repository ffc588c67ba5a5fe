#include "cshv/minimize.hpp"

#include "cshv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iostream>
#include <numbers>

namespace cshv {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

double dot_fields(const std::vector<Field>& a, const std::vector<Field>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double partial = 0.0;
        for (std::size_t k = 0; k < a[i].values.size(); ++k)
            partial += a[i].values[k] * b[i].values[k];
        s += partial * a[i].grid.h1() * a[i].grid.h2();
    }
    return s;
}

double grad_norm_l2(const std::vector<Field>& g) { return std::sqrt(dot_fields(g, g)); }

// exp(u0_i + w_i) with the documented range guard
std::vector<Field> exp_fields(const ProblemSetup& p, const std::vector<Field>& w) {
    std::vector<Field> out;
    out.reserve(p.n());
    for (int i = 0; i < p.n(); ++i) {
        Field e(p.grid);
        for (std::size_t k = 0; k < e.values.size(); ++k) {
            double x = p.bg.u0[i].values[k] + w[i].values[k];
            if (std::abs(x) > 700.0) throw RangeError("exponent out of range in functional");
            e.values[k] = std::exp(x);
        }
        out.push_back(std::move(e));
    }
    return out;
}

IntegralCoefficients coefficients_from_exp(const ProblemSetup& p, const std::vector<Field>& ex) {
    const int n = p.n();
    const double cell = p.grid.h1() * p.grid.h2();
    IntegralCoefficients c;
    c.a.assign(n, 0.0);
    c.aM.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) c.a[i] = quadrature(ex[i]);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < ex[i].values.size(); ++k)
                s += ex[i].values[k] * ex[j].values[k];
            c.aM[i][j] = c.aM[j][i] = s * cell;
        }
    return c;
}

// fields U_i = t_i exp(u0_i + w_i)
std::vector<Field> u_fields(const FunctionalState& st) {
    std::vector<Field> U = st.exp_uw;
    for (std::size_t i = 0; i < U.size(); ++i)
        for (double& v : U[i].values) v *= st.constraint.t[i];
    return U;
}

// nonlinearity of the unreduced system: (Ktilde U Ktilde (U - 1))_i
std::vector<Field> nonlinearity(const ProblemSetup& p, const std::vector<Field>& U) {
    const int n = p.n();
    const auto& d = *p.data;
    auto kt = [&](int i, int j) { return d.K_d[j][i] * d.R_d[j]; };  // Ktilde = K^tau R

    std::vector<Field> inner(n, Field(p.grid));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double c = kt(j, k);
            if (c == 0.0) continue;
            for (std::size_t s = 0; s < inner[j].values.size(); ++s)
                inner[j].values[s] += c * (U[k].values[s] - 1.0);
        }
    std::vector<Field> out(n, Field(p.grid));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double c = kt(i, j);
            if (c == 0.0) continue;
            for (std::size_t s = 0; s < out[i].values.size(); ++s)
                out[i].values[s] += c * U[j].values[s] * inner[j].values[s];
        }
    return out;
}

}  // namespace

ProblemSetup make_problem(const CartanData& data, const TorusGrid& grid,
                          VortexConfiguration vortices, double sigma) {
    grid.check();
    if (vortices.n() != data.n) throw ConfigError("vortex list count must equal the rank");
    ProblemSetup p;
    p.data = &data;
    p.grid = grid;
    p.vortices = std::move(vortices);
    p.vortices.reduce_to_cell(grid);
    p.bg = background(grid, p.vortices, sigma);
    p.N = p.vortices.counts();
    p.b_pi = vortex_vector_b(data, p.N);
    p.b.resize(p.b_pi.size());
    for (std::size_t i = 0; i < p.b.size(); ++i)
        p.b[i] = to_double(p.b_pi[i]) * std::numbers::pi;
    return p;
}

double functional_I(const ProblemSetup& p, double lambda, const std::vector<Field>& v) {
    const int n = p.n();
    const auto& d = *p.data;
    std::vector<Field> U = exp_fields(p, v);

    std::vector<Field> lap(n);
    for (int i = 0; i < n; ++i) lap[i] = laplacian(v[i]);

    double kin = 0.0;
    const double cell = p.grid.h1() * p.grid.h2();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (d.A_d[i][j] == 0.0) continue;
            double s = 0.0;
            for (std::size_t k = 0; k < v[i].values.size(); ++k)
                s += v[i].values[k] * lap[j].values[k];
            kin -= 0.5 * d.A_d[i][j] * s * cell;
        }

    double pot = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < U[i].values.size(); ++k)
                s += (U[i].values[k] - 1.0) * (U[j].values[k] - 1.0);
            pot += d.Q_d[i][j] * s * cell;
        }
    pot *= 0.5 * lambda;

    double lin = 0.0;
    for (int i = 0; i < n; ++i) lin += p.b[i] * mean(v[i]);
    return kin + pot + lin;
}

FunctionalState functional_J(const ProblemSetup& p, double lambda, const std::vector<Field>& w,
                             double m_min) {
    const int n = p.n();
    const auto& d = *p.data;
    FunctionalState st;
    st.exp_uw = exp_fields(p, w);
    st.coeffs = coefficients_from_exp(p, st.exp_uw);

    ConstraintInput in = make_constraint_input(d, st.coeffs, p.b_pi, lambda, p.grid.area());
    st.margins = admissible_margins(in);
    for (double m : st.margins)
        if (m < m_min) return st;  // boundary signal
    st.admissible = true;

    st.constraint = solve_homotopy(in);

    st.lap_w.resize(n);
    for (int i = 0; i < n; ++i) st.lap_w[i] = laplacian(w[i]);
    double kin = 0.0;
    const double cell = p.grid.h1() * p.grid.h2();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (d.A_d[i][j] == 0.0) continue;
            double s = 0.0;
            for (std::size_t k = 0; k < w[i].values.size(); ++k)
                s += w[i].values[k] * st.lap_w[j].values[k];
            kin -= 0.5 * d.A_d[i][j] * s * cell;
        }

    double pot = 0.0, bc = 0.0, bsum = 0.0;
    for (int i = 0; i < n; ++i) {
        pot += d.R_d[i] / d.P_d[i] * (p.grid.area() - st.constraint.t[i] * st.coeffs.a[i]);
        bc += p.b[i] * st.constraint.c[i];
        bsum += p.b[i];
    }
    st.J = kin + 0.5 * lambda * pot + bc - 0.5 * bsum;
    return st;
}

std::vector<Field> gradient_J(const ProblemSetup& p, double lambda, const FunctionalState& state,
                              const std::vector<Field>& /*w*/) {
    const int n = p.n();
    const auto& d = *p.data;
    std::vector<Field> U = u_fields(state);

    std::vector<Field> grad(n, Field(p.grid));
    for (int i = 0; i < n; ++i) {
        // lambda U_i sum_j Q_ij (U_j - 1)
        Field acc(p.grid);
        for (int j = 0; j < n; ++j) {
            double q = d.Q_d[i][j];
            if (q == 0.0) continue;
            for (std::size_t k = 0; k < acc.values.size(); ++k)
                acc.values[k] += q * (U[j].values[k] - 1.0);
        }
        const double bterm = p.b[i] / p.grid.area();
        for (std::size_t k = 0; k < grad[i].values.size(); ++k) {
            double lap_term = 0.0;
            for (int j = 0; j < n; ++j)
                if (d.A_d[i][j] != 0.0) lap_term += d.A_d[i][j] * state.lap_w[j].values[k];
            grad[i].values[k] = -lap_term + lambda * U[i].values[k] * acc.values[k] + bterm;
        }
        subtract_mean(grad[i]);
    }
    return grad;
}

std::vector<Field> tarantello_seed(const ProblemSetup& p, double mu) {
    static const CartanData rank1 = make_cartan_data(AlgebraSpec::of(Family::A, 1));
    std::vector<Field> w;
    for (int i = 0; i < p.n(); ++i) {
        if (p.N[i] == 0) {
            w.emplace_back(p.grid);
            continue;
        }
        VortexConfiguration single;
        single.points.push_back(p.vortices.points[i]);
        ProblemSetup scalar = make_problem(rank1, p.grid, single, p.bg.sigma);

        SolverConfig cfg;
        cfg.lambda = mu > 0.0 ? mu
                              : 100.0 * 16.0 * std::numbers::pi * p.N[i] / p.grid.area();
        MinimizeResult res = minimize(scalar, cfg);
        if (res.status != MinimizeStatus::converged)
            throw SolverError("scalar seed solve failed for index " + std::to_string(i));
        Field wi = res.v[0];
        subtract_mean(wi);
        w.push_back(std::move(wi));
    }
    // interior-membership target: a_ij(w) < 2 |Omega|
    auto coeffs = coefficients_a(p.bg, w);
    for (int i = 0; i < p.n(); ++i)
        for (int j = 0; j < p.n(); ++j)
            if (coeffs.aM[i][j] >= 2.0 * p.grid.area())
                throw SolverError("seed misses the interior membership target");
    return w;
}

std::string to_string(MinimizeStatus s) {
    switch (s) {
        case MinimizeStatus::converged: return "converged";
        case MinimizeStatus::necessary_condition_violated: return "necessary-condition-violated";
        case MinimizeStatus::lambda_too_small: return "lambda-too-small";
        case MinimizeStatus::iteration_cap: return "iteration-cap";
        case MinimizeStatus::seed_failed: return "seed-failed";
    }
    return "unknown";
}

MinimizeResult minimize(const ProblemSetup& p, const SolverConfig& cfg) {
    const int n = p.n();
    const double area = p.grid.area();
    MinimizeResult res;
    res.lambda = cfg.lambda;
    res.lambda0 = lambda_threshold(*p.data, p.N, area);

    if (cfg.lambda <= res.lambda0) {
        res.status = MinimizeStatus::necessary_condition_violated;
        return res;
    }

    std::vector<Field> w(n, Field(p.grid));
    if (cfg.use_tarantello_seed) {
        try {
            w = tarantello_seed(p, cfg.seed_mu);
        } catch (const SolverError& e) {
            if (cfg.verbose) std::cerr << "seed fallback to w = 0: " << e.what() << "\n";
            w.assign(n, Field(p.grid));
        }
    }

    FunctionalState st = functional_J(p, cfg.lambda, w, cfg.m_min);
    if (!st.admissible) {
        res.status = MinimizeStatus::lambda_too_small;
        res.margins = st.margins;
        return res;
    }
    std::vector<Field> grad = gradient_J(p, cfg.lambda, st, w);
    double gnorm = grad_norm_l2(grad);

    double step = 1.0 / std::max(cfg.lambda, 1.0);
    long iter = 0;
    bool boundary_blocked = false;
    const double gtol = cfg.g_tol * std::sqrt(area);

    // Nonmonotone (windowed) acceptance: J is a difference of large
    // quadratures and carries an absolute noise floor around 1e-12 |J|,
    // so strict descent stalls long before the gradient tolerance.
    std::deque<double> window{st.J};

    for (; iter < cfg.max_iterations && gnorm > gtol; ++iter) {
        double alpha = std::clamp(step, 1e-16, 1e16);
        bool accepted = false;
        bool saw_inadmissible = false;
        FunctionalState trial_st;
        std::vector<Field> trial(n, Field(p.grid));
        const double j_ref = *std::max_element(window.begin(), window.end());
        const double slack = 1e-11 * std::max(1.0, std::abs(j_ref));
        for (int bt = 0; bt < kMaxBacktracks; ++bt, alpha *= 0.5) {
            for (int i = 0; i < n; ++i) {
                for (std::size_t k = 0; k < trial[i].values.size(); ++k)
                    trial[i].values[k] = w[i].values[k] - alpha * grad[i].values[k];
                subtract_mean(trial[i]);
            }
            trial_st = functional_J(p, cfg.lambda, trial, cfg.m_min);
            if (!trial_st.admissible) {
                saw_inadmissible = true;
                continue;
            }
            if (trial_st.J <= j_ref - kArmijo * alpha * gnorm * gnorm + slack) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            boundary_blocked = saw_inadmissible;
            break;
        }

        std::vector<Field> new_grad = gradient_J(p, cfg.lambda, trial_st, trial);

        // Barzilai-Borwein step from the accepted move
        double ss = 0.0, sy = 0.0;
        {
            std::vector<Field> s_vec(n, Field(p.grid)), y_vec(n, Field(p.grid));
            for (int i = 0; i < n; ++i)
                for (std::size_t k = 0; k < s_vec[i].values.size(); ++k) {
                    s_vec[i].values[k] = trial[i].values[k] - w[i].values[k];
                    y_vec[i].values[k] = new_grad[i].values[k] - grad[i].values[k];
                }
            ss = dot_fields(s_vec, s_vec);
            sy = dot_fields(s_vec, y_vec);
        }
        if (sy > 0.0 && ss > 0.0) step = ss / sy;

        w = std::move(trial);
        st = std::move(trial_st);
        grad = std::move(new_grad);
        gnorm = grad_norm_l2(grad);
        window.push_back(st.J);
        if (window.size() > 10) window.pop_front();
        if (cfg.verbose && iter % 100 == 0)
            std::cerr << "iter " << iter << "  J=" << st.J << "  |g|=" << gnorm << "\n";
    }

    res.w = w;
    res.margins = st.margins;
    res.constraint = st.constraint;
    res.J = st.J;
    res.iterations = iter;
    res.grad_norm = gnorm;

    if (gnorm <= gtol) {
        res.status = MinimizeStatus::converged;
    } else {
        res.status = boundary_blocked ? MinimizeStatus::lambda_too_small
                                      : MinimizeStatus::iteration_cap;
        return res;
    }

    // v = w + c, and the certification diagnostics
    res.v.clear();
    for (int i = 0; i < n; ++i) {
        Field vi = w[i];
        for (double& x : vi.values) x += st.constraint.c[i];
        res.v.push_back(std::move(vi));
    }

    std::vector<Field> U = u_fields(st);
    std::vector<Field> nl = nonlinearity(p, U);
    double res2 = 0.0, nl2 = 0.0, lap2 = 0.0, src2 = 0.0;
    for (int i = 0; i < n; ++i) {
        Field lap_v = laplacian(res.v[i]);
        const double source = 4.0 * std::numbers::pi * p.N[i] / area;
        double s = 0.0;
        for (std::size_t k = 0; k < lap_v.values.size(); ++k) {
            double r = lap_v.values[k] - cfg.lambda * nl[i].values[k] - source;
            s += r * r;
        }
        res2 += s * p.grid.h1() * p.grid.h2();
        nl2 += norm_l2(nl[i]) * norm_l2(nl[i]);
        lap2 += norm_l2(lap_v) * norm_l2(lap_v);
        src2 += source * source * area;
    }
    res.pde_residual_l2 = std::sqrt(res2);
    double scale = cfg.lambda * std::sqrt(nl2) + std::sqrt(lap2) + std::sqrt(src2);
    res.pde_residual_scaled = res.pde_residual_l2 / std::max(scale, 1e-300);

    // integral identity: int (U - 1/2)^tau Q (U - 1/2)
    {
        const auto& d = *p.data;
        double lhs = 0.0;
        const double cell = p.grid.h1() * p.grid.h2();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (d.Q_d[i][j] == 0.0) continue;
                double s = 0.0;
                for (std::size_t k = 0; k < U[i].values.size(); ++k)
                    s += (U[i].values[k] - 0.5) * (U[j].values[k] - 0.5);
                lhs += d.Q_d[i][j] * s * cell;
            }
        double traceQ = 0.0, bn = 0.0;
        for (int i = 0; i < n; ++i) {
            traceQ += d.R_d[i] / d.P_d[i];
            for (int j = 0; j < n; ++j)
                bn += to_double(d.S_inv(i, j) / (d.P[i] * d.P[j])) * p.N[j];
        }
        double rhs = area / 4.0 * traceQ - 4.0 * std::numbers::pi / cfg.lambda * bn;
        res.identity_residual = std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
    }

    // natural constraint, evaluated from the fields
    {
        const auto& d = *p.data;
        double worst = 0.0;
        const double cell = p.grid.h1() * p.grid.h2();
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < U[i].values.size(); ++k) {
                double acc = 0.0;
                for (int j = 0; j < n; ++j) acc += d.Q_d[i][j] * (U[j].values[k] - 1.0);
                s += U[i].values[k] * acc;
            }
            double defect = std::abs(cfg.lambda * s * cell + p.b[i]);
            worst = std::max(worst, defect / std::max(1.0, p.b[i]));
        }
        res.envelope_residual = worst;
    }
    return res;
}

}  // namespace cshv
