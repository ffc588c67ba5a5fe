#include "cshv/constraints.hpp"

#include "cshv/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cshv {

namespace {

constexpr double kFixedPointTol = 1e-13;
constexpr double kResidualTol = 1e-10;
constexpr long kPicardCap = 200000;

// B_i(t) = R_i a_i / P_i + sum_{j != i} t_j R_i R_j alpha_ij a_ij
double linear_part(const ConstraintInput& in, int i, const std::vector<double>& t) {
    const auto& d = *in.data;
    double B = d.R_d[i] * in.a[i] / d.P_d[i];
    for (int j = 0; j < in.n(); ++j) {
        if (j == i) continue;
        B += t[j] * d.R_d[i] * d.R_d[j] * d.alpha_d[i][j] * in.aM[i][j];
    }
    return B;
}

double diag_coeff(const ConstraintInput& in, int i) {
    const auto& d = *in.data;
    return d.R_d[i] * d.R_d[i] * d.alpha_d[i][i] * in.aM[i][i];
}

Eigen::VectorXd solve_eps0(const ConstraintInput& in) {
    const int n = in.n();
    const auto qt = qtilde(in);
    Eigen::MatrixXd Q(n, n);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
        rhs(i) = in.data->R_d[i] * in.a[i] / in.data->P_d[i];
        for (int j = 0; j < n; ++j) Q(i, j) = qt[i][j];
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(Q);
    if (ldlt.info() != Eigen::Success)
        throw SolverError("Qtilde is not positive definite; coefficients inconsistent");
    return ldlt.solve(rhs);
}

void check_box_bounds(const ConstraintInput& in, const std::vector<double>& t) {
    const double slack = 1e-9;
    for (int i = 0; i < in.n(); ++i) {
        if (!(t[i] > 0.0) || t[i] > 1.0 + slack)
            throw SolverError("a-priori box bound 0 < t_i <= 1 violated at index " +
                              std::to_string(i) + " (t=" + std::to_string(t[i]) + ")");
        if (in.a[i] * t[i] > in.area * (1.0 + slack))
            throw SolverError("a-priori bound a_i t_i <= |Omega| violated at index " +
                              std::to_string(i));
    }
}

ConstraintSolution finish(const ConstraintInput& in, std::vector<double> t,
                          ConstraintMethod method, long iterations) {
    ConstraintSolution sol;
    sol.t = std::move(t);
    sol.c.resize(sol.t.size());
    for (std::size_t i = 0; i < sol.t.size(); ++i) sol.c[i] = std::log(sol.t[i]);
    sol.residual = constraint_residual(in, sol.t);
    sol.method = method;
    sol.iterations = iterations;
    if (sol.residual > kResidualTol)
        throw SolverError("constraint residual " + std::to_string(sol.residual) +
                          " above certification tolerance");
    check_box_bounds(in, sol.t);
    return sol;
}

// One Newton step on F(1, t) = t - f(1, t); returns false if the Jacobian
// solve fails or leaves the positive cone.
bool newton_step(const ConstraintInput& in, std::vector<double>& t) {
    const int n = in.n();
    const auto& d = *in.data;
    std::vector<double> f = f_map(in, 1.0, t);
    Eigen::MatrixXd J = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd F(n);
    for (int i = 0; i < n; ++i) {
        F(i) = t[i] - f[i];
        double B = linear_part(in, i, t);
        double disc = B * B - 4.0 * in.b[i] * diag_coeff(in, i) / in.lambda;
        double root = std::sqrt(std::max(disc, 0.0));
        if (root <= 0.0) return false;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            double dBdtj = d.R_d[i] * d.R_d[j] * d.alpha_d[i][j] * in.aM[i][j];
            J(i, j) -= dBdtj * (1.0 + B / root) / (2.0 * diag_coeff(in, i));
        }
    }
    Eigen::VectorXd step = J.partialPivLu().solve(F);
    if (!step.allFinite()) return false;
    for (int i = 0; i < n; ++i) {
        double next = t[i] - step(i);
        if (next <= 0.0) return false;
        t[i] = next;
    }
    return true;
}

double sup_distance(const std::vector<double>& x, const std::vector<double>& y) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

bool is_a3(const CartanData& d) {
    if (d.n != 3) return false;
    static const int a3[3][3] = {{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (d.K(i, j) != a3[i][j]) return false;
    return true;
}

}  // namespace

ConstraintInput make_constraint_input(const CartanData& data, const IntegralCoefficients& coeffs,
                                      const RatVector& b_pi_coeff, double lambda, double area) {
    if (lambda <= 0) throw ConfigError("lambda must be positive");
    ConstraintInput in;
    in.data = &data;
    in.a = coeffs.a;
    in.aM = coeffs.aM;
    in.b.resize(b_pi_coeff.size());
    for (std::size_t i = 0; i < b_pi_coeff.size(); ++i)
        in.b[i] = to_double(b_pi_coeff[i]) * std::numbers::pi;
    in.lambda = lambda;
    in.area = area;
    return in;
}

std::vector<double> admissible_margins(const ConstraintInput& in) {
    std::vector<double> m(in.n());
    for (int i = 0; i < in.n(); ++i) {
        const auto& d = *in.data;
        m[i] = in.a[i] * in.a[i] / in.aM[i][i] -
               4.0 * d.alpha_d[i][i] * d.P_d[i] * d.P_d[i] * in.b[i] / in.lambda;
    }
    return m;
}

bool admissible(const ConstraintInput& in) {
    for (double m : admissible_margins(in))
        if (m < 0.0) return false;
    return true;
}

std::vector<std::vector<double>> qtilde(const ConstraintInput& in) {
    const int n = in.n();
    const auto& d = *in.data;
    std::vector<std::vector<double>> Q(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double stilde = d.alpha_d[i][j] * in.aM[i][j];
            if (i != j) stilde = -stilde;
            Q[i][j] = d.R_d[i] * stilde * d.R_d[j];
        }
    return Q;
}

std::vector<double> f_map(const ConstraintInput& in, double eps, const std::vector<double>& t) {
    const int n = in.n();
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) {
        double B = linear_part(in, i, t);
        double D = diag_coeff(in, i);
        double disc = B * B - 4.0 * eps * in.b[i] * D / in.lambda;
        if (disc < -1e-14 * B * B)
            throw InfeasibilityError("negative discriminant at index " + std::to_string(i) +
                                     " (input not admissible)");
        f[i] = (B + std::sqrt(std::max(disc, 0.0))) / (2.0 * D);
    }
    return f;
}

double constraint_residual(const ConstraintInput& in, const std::vector<double>& t) {
    double worst = 0.0;
    for (int i = 0; i < in.n(); ++i) {
        double quad = t[i] * t[i] * diag_coeff(in, i);
        double lin = t[i] * linear_part(in, i, t);
        double cst = in.b[i] / in.lambda;
        double res = std::abs(quad - lin + cst) / std::max(1.0, quad + lin + cst);
        worst = std::max(worst, res);
    }
    return worst;
}

ConstraintSolution solve_homotopy(const ConstraintInput& in) {
    if (!admissible(in)) throw InfeasibilityError("input violates the admissibility margins");

    // eps = 0: the linear system Qtilde t = P^{-1} R a, unique solution.
    Eigen::VectorXd t0 = solve_eps0(in);
    std::vector<double> t(t0.data(), t0.data() + t0.size());

    // Monotone Picard at eps = 1 descending from t0. The lower floor
    // a_i / (2 P_i R_i alpha_ii a_ii) is the first term of the "+" branch.
    const auto& d = *in.data;
    std::vector<double> floor_i(in.n());
    for (int i = 0; i < in.n(); ++i)
        floor_i[i] = in.a[i] / (2.0 * d.P_d[i] * d.R_d[i] * d.alpha_d[i][i] * in.aM[i][i]);

    long iter = 0;
    bool converged = false;
    std::vector<double> prev = t;
    for (; iter < kPicardCap; ++iter) {
        std::vector<double> next = f_map(in, 1.0, t);
        for (int i = 0; i < in.n(); ++i) {
            if (next[i] > t[i] + 1e-12)
                throw SolverError("Picard iterate increased; monotonicity violated");
            if (next[i] < floor_i[i] - 1e-12 * std::max(1.0, floor_i[i]))
                throw SolverError("Picard iterate fell below the lower floor");
        }
        double gap = sup_distance(next, t);
        t = std::move(next);
        if (gap <= kFixedPointTol) {
            converged = true;
            break;
        }
    }

    if (converged) {
        // Newton polish to push the fixed-point error to round-off.
        std::vector<double> best = t;
        double best_res = constraint_residual(in, best);
        for (int k = 0; k < 8 && best_res > 1e-15; ++k) {
            if (!newton_step(in, t)) break;
            double res = constraint_residual(in, t);
            if (res < best_res) {
                best_res = res;
                best = t;
            } else {
                break;
            }
        }
        return finish(in, best, ConstraintMethod::homotopy, iter + 1);
    }

    // Fallback 1: Newton on F(1, t) from the current iterate.
    std::ostringstream trace;
    trace << "Picard stalled after " << kPicardCap << " iterations";
    {
        std::vector<double> tn = t;
        bool ok = true;
        for (int k = 0; k < 100 && ok; ++k) {
            ok = newton_step(in, tn);
            if (ok && sup_distance(tn, f_map(in, 1.0, tn)) <= kFixedPointTol)
                return finish(in, tn, ConstraintMethod::homotopy, iter + k + 1);
        }
        trace << "; Newton fallback failed";
    }

    // Fallback 2: eps-stepping, 10 Picard stages from eps = 0.1 to 1.
    {
        std::vector<double> ts(t0.data(), t0.data() + t0.size());
        for (int stage = 1; stage <= 10; ++stage) {
            double eps = stage / 10.0;
            for (long k = 0; k < kPicardCap; ++k) {
                std::vector<double> next = f_map(in, eps, ts);
                double gap = sup_distance(next, ts);
                ts = std::move(next);
                if (gap <= kFixedPointTol) break;
            }
        }
        if (sup_distance(ts, f_map(in, 1.0, ts)) <= 10 * kFixedPointTol)
            return finish(in, ts, ConstraintMethod::homotopy, iter);
        trace << "; eps-stepping failed";
    }
    throw SolverError("constraint solve did not converge: " + trace.str());
}

double squeeze_function(const ConstraintInput& in, double t) {
    // F(t) = t - f2(f1(t), f3(t)); f1, f3 depend only on t2 = t (alpha_13 = 0).
    std::vector<double> probe{0.0, t, 0.0};
    std::vector<double> f = f_map(in, 1.0, probe);
    std::vector<double> mid{f[0], 0.0, f[2]};
    return t - f_map(in, 1.0, mid)[1];
}

ConstraintSolution solve_squeeze(const ConstraintInput& in) {
    if (!is_a3(*in.data))
        throw ConfigError("squeeze route requires the A3 (SU(4)) Cartan matrix");
    if (!admissible(in)) throw InfeasibilityError("input violates the admissibility margins");

    const double r0 = 2.0;
    double lo = 0.0, hi = r0;
    double flo = squeeze_function(in, lo);
    double fhi = squeeze_function(in, hi);
    if (!(flo < 0.0) || !(fhi > 0.0))
        throw SolverError("squeeze bracket [0, 2] carries no sign change");

    long iter = 0;
    for (; iter < 200 && hi - lo > 1e-15; ++iter) {
        double mid = 0.5 * (lo + hi);
        double fm = squeeze_function(in, mid);
        if (fm < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    // secant polish inside the bracket
    double root = (flo != fhi) ? lo - flo * (hi - lo) / (fhi - flo) : 0.5 * (lo + hi);
    for (int k = 0; k < 4; ++k) {
        double h = 1e-8 * std::max(1.0, root);
        double f0 = squeeze_function(in, root);
        double df = (squeeze_function(in, root + h) - f0) / h;
        if (df == 0.0) break;
        double next = root - f0 / df;
        if (next <= lo - 1e-12 || next >= hi + 1e-12) break;
        root = next;
    }

    std::vector<double> probe{0.0, root, 0.0};
    std::vector<double> f = f_map(in, 1.0, probe);
    return finish(in, {f[0], root, f[2]}, ConstraintMethod::squeeze, iter);
}

ConstraintSolution scalar_closed_form(const ConstraintInput& in) {
    if (in.n() != 1) throw ConfigError("closed form requires rank 1");
    const auto& d = *in.data;
    double B = d.R_d[0] * in.a[0] / d.P_d[0];
    double D = diag_coeff(in, 0);
    double disc = B * B - 4.0 * in.b[0] * D / in.lambda;
    if (disc < -1e-14 * B * B)
        throw InfeasibilityError("negative discriminant; lambda below the admissible range");
    double t = (B + std::sqrt(std::max(disc, 0.0))) / (2.0 * D);
    return finish(in, {t}, ConstraintMethod::scalar_closed_form, 0);
}

}  // namespace cshv
