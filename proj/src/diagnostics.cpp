#include "cshv/diagnostics.hpp"

#include "cshv/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>

namespace cshv {

namespace {

// e^{u_i} in the original (untranslated) variables: R_i t_i e^{u0_i + w_i}
std::vector<Field> original_exponentials(const ProblemSetup& p, const MinimizeResult& sol) {
    std::vector<Field> E;
    for (int i = 0; i < p.n(); ++i) {
        Field e(p.grid);
        for (std::size_t k = 0; k < e.values.size(); ++k)
            e.values[k] =
                p.data->R_d[i] * std::exp(p.bg.u0[i].values[k] + sol.v[i].values[k]);
        E.push_back(std::move(e));
    }
    return E;
}

double smallest_eigenvalue(const std::vector<std::vector<double>>& m) {
    const int n = static_cast<int>(m.size());
    Eigen::MatrixXd M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = m[i][j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    return es.eigenvalues().minCoeff();
}

}  // namespace

NecessaryCheck check_necessary(double lambda, const CartanData& data, const std::vector<int>& N,
                               double area) {
    NecessaryCheck c;
    c.lambda0 = lambda_threshold(data, N, area);
    c.pass = lambda > c.lambda0;
    return c;
}

std::vector<QuantizedIntegral> quantized_integrals(const ProblemSetup& p,
                                                   const MinimizeResult& sol) {
    const int n = p.n();
    const auto& K = p.data->K_d;
    std::vector<Field> E = original_exponentials(p, sol);

    std::vector<QuantizedIntegral> out(n);
    const double cell = p.grid.h1() * p.grid.h2();
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t x = 0; x < E[0].values.size(); ++x) {
            double lin = 0.0, quad = 0.0;
            for (int j = 0; j < n; ++j) {
                if (K[j][i] == 0.0) continue;
                lin += K[j][i] * E[j].values[x];
                double inner = 0.0;
                for (int k = 0; k < n; ++k) inner += K[k][j] * E[k].values[x];
                quad += K[j][i] * E[j].values[x] * inner;
            }
            s += lin - quad;
        }
        out[i].value = s * cell;
        out[i].target = 4.0 * std::numbers::pi * p.N[i] / sol.lambda;
        out[i].rel_error = p.N[i] > 0
                               ? std::abs(out[i].value - out[i].target) / out[i].target
                               : std::abs(out[i].value);
    }
    return out;
}

std::vector<double> asymptotic_distances(const ProblemSetup& p, const MinimizeResult& sol) {
    std::vector<Field> E = original_exponentials(p, sol);
    std::vector<double> d(p.n());
    const double cell = p.grid.h1() * p.grid.h2();
    for (int i = 0; i < p.n(); ++i) {
        double s = 0.0;
        for (double v : E[i].values) {
            double diff = v - p.data->R_d[i];
            s += diff * diff;
        }
        d[i] = s * cell;
    }
    return d;
}

double interpolation_check(const ProblemSetup& p, double lambda, const std::vector<Field>& w,
                           double s, int index) {
    if (s <= 0.0 || s >= 1.0) throw ConfigError("interpolation exponent must be in (0,1)");
    const int i = index;
    const double cell = p.grid.h1() * p.grid.h2();
    double lhs = 0.0, frac = 0.0;
    for (std::size_t k = 0; k < w[i].values.size(); ++k) {
        double e = p.bg.u0[i].values[k] + w[i].values[k];
        lhs += std::exp(e);
        frac += std::exp(s * e);
    }
    lhs *= cell;
    frac *= cell;
    const auto& d = *p.data;
    double prefactor = lambda / (4.0 * d.P_d[i] * d.P_d[i] * p.b[i] * d.alpha_d[i][i]);
    double rhs = std::pow(prefactor, (1.0 - s) / s) * std::pow(frac, 1.0 / s);
    return rhs - lhs;
}

std::string SolveReport::to_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "status = " << cshv::to_string(status) << "\n";
    os << "lambda = " << lambda << "\n";
    os << "lambda0 = " << lambda0 << "\n";
    os << "J = " << J << "\n";
    os << "iterations = " << iterations << "\n";
    os << "grad_norm = " << grad_norm << "\n";
    auto vec = [&](const char* name, const std::vector<double>& v) {
        os << name << " =";
        for (double x : v) os << " " << x;
        os << "\n";
    };
    vec("t", t);
    vec("c", c);
    vec("margins", margins);
    os << "constraint_residual = " << constraint_residual << "  (tol 1e-10)\n";
    os << "pde_residual_scaled = " << pde_residual_scaled << "  (tol 1e-6)\n";
    os << "identity_residual = " << identity_residual << "  (tol 1e-8)\n";
    os << "envelope_residual = " << envelope_residual << "  (tol 1e-8)\n";
    for (std::size_t i = 0; i < quantized.size(); ++i)
        os << "quantized[" << i << "] = " << quantized[i].value << "  target "
           << quantized[i].target << "  rel_err " << quantized[i].rel_error << "\n";
    vec("asymptotic_distance", distances);
    os << "alpha0 = " << alpha0 << "\n";
    os << "beta0 = " << beta0 << "\n";
    return os.str();
}

SolveReport make_report(const ProblemSetup& p, const MinimizeResult& sol) {
    SolveReport r;
    r.lambda = sol.lambda;
    r.lambda0 = sol.lambda0;
    r.status = sol.status;
    r.J = sol.J;
    r.iterations = sol.iterations;
    r.grad_norm = sol.grad_norm;
    r.t = sol.constraint.t;
    r.c = sol.constraint.c;
    r.margins = sol.margins;
    r.constraint_residual = sol.constraint.residual;
    r.pde_residual_scaled = sol.pde_residual_scaled;
    r.identity_residual = sol.identity_residual;
    r.envelope_residual = sol.envelope_residual;
    r.alpha0 = smallest_eigenvalue(p.data->A_d);
    r.beta0 = smallest_eigenvalue(p.data->Q_d);
    if (sol.status == MinimizeStatus::converged) {
        r.quantized = quantized_integrals(p, sol);
        r.distances = asymptotic_distances(p, sol);
    }
    return r;
}

std::vector<SweepPoint> asymptotic_sweep(const ProblemSetup& p, std::vector<double> lambdas,
                                         const SolverConfig& base) {
    std::sort(lambdas.begin(), lambdas.end());
    std::vector<SweepPoint> sweep;
    for (double lambda : lambdas) {
        SolverConfig cfg = base;
        cfg.lambda = lambda;
        SweepPoint pt;
        pt.lambda = lambda;
        try {
            MinimizeResult res = minimize(p, cfg);
            pt.status = res.status;
            pt.J = res.J;
            pt.iterations = res.iterations;
            if (res.status == MinimizeStatus::converged) {
                pt.distances = asymptotic_distances(p, res);
                for (const auto& q : quantized_integrals(p, res))
                    pt.quantized_rel_error.push_back(q.rel_error);
            }
        } catch (const std::exception&) {
            pt.status = MinimizeStatus::iteration_cap;
        }
        sweep.push_back(std::move(pt));
    }
    return sweep;
}

std::string sweep_csv(const std::vector<SweepPoint>& sweep, int n) {
    std::ostringstream os;
    os.precision(17);
    os << "lambda,converged,J,iterations";
    for (int i = 0; i < n; ++i) os << ",d_" << i + 1;
    for (int i = 0; i < n; ++i) os << ",qi_rel_err_" << i + 1;
    os << "\n";
    for (const auto& pt : sweep) {
        os << pt.lambda << "," << (pt.status == MinimizeStatus::converged ? 1 : 0) << ","
           << pt.J << "," << pt.iterations;
        for (int i = 0; i < n; ++i)
            os << "," << (i < static_cast<int>(pt.distances.size()) ? pt.distances[i] : 0.0);
        for (int i = 0; i < n; ++i)
            os << ","
               << (i < static_cast<int>(pt.quantized_rel_error.size())
                       ? pt.quantized_rel_error[i]
                       : 0.0);
        os << "\n";
    }
    return os.str();
}

double probe_lambda1(const ProblemSetup& p, const SolverConfig& base, double lo, double hi,
                     int steps) {
    auto converges = [&](double lambda) {
        SolverConfig cfg = base;
        cfg.lambda = lambda;
        try {
            return minimize(p, cfg).status == MinimizeStatus::converged;
        } catch (const std::exception&) {
            return false;
        }
    };
    if (!converges(hi)) return std::numeric_limits<double>::quiet_NaN();
    if (converges(lo)) return lo;
    for (int k = 0; k < steps; ++k) {
        double mid = 0.5 * (lo + hi);
        (converges(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace cshv
