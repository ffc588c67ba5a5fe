#pragma once

#include "cshv/minimize.hpp"

#include <string>
#include <vector>

namespace cshv {

struct NecessaryCheck {
    bool pass = false;
    double lambda0 = 0.0;
};

// Theorem necessary condition: pass iff lambda > lambda0 strictly.
NecessaryCheck check_necessary(double lambda, const CartanData& data, const std::vector<int>& N,
                               double area);

struct QuantizedIntegral {
    double value = 0.0;
    double target = 0.0;   // 4 pi N_i / lambda
    double rel_error = 0.0;
};

// Flux-quantization integrals in the original variables e^{u_i} = R_i U_i.
std::vector<QuantizedIntegral> quantized_integrals(const ProblemSetup& p,
                                                   const MinimizeResult& solution);

// d_i = int (e^{u_i} - R_i)^2 dx, original variables.
std::vector<double> asymptotic_distances(const ProblemSetup& p, const MinimizeResult& solution);

// Margin of the interpolation inequality at exponent s for index i;
// nonnegative margin = inequality holds.
double interpolation_check(const ProblemSetup& p, double lambda, const std::vector<Field>& w,
                           double s, int index);

// One full verification record for a converged solve.
struct SolveReport {
    double lambda = 0.0;
    double lambda0 = 0.0;
    MinimizeStatus status = MinimizeStatus::iteration_cap;
    double J = 0.0;
    long iterations = 0;
    double grad_norm = 0.0;
    std::vector<double> t, c, margins;
    double constraint_residual = 0.0;      // tol 1e-10
    double pde_residual_scaled = 0.0;      // tol 1e-6
    double identity_residual = 0.0;        // tol 1e-8
    double envelope_residual = 0.0;        // tol 1e-8
    std::vector<QuantizedIntegral> quantized;
    std::vector<double> distances;
    double alpha0 = 0.0, beta0 = 0.0;      // smallest eigenvalues of A and Q

    std::string to_text() const;
};

SolveReport make_report(const ProblemSetup& p, const MinimizeResult& solution);

struct SweepPoint {
    double lambda = 0.0;
    MinimizeStatus status = MinimizeStatus::iteration_cap;
    double J = 0.0;
    long iterations = 0;
    std::vector<double> distances;
    std::vector<double> quantized_rel_error;
};

// Solve at each lambda (ascending); per-point failures are recorded and the
// sweep continues.
std::vector<SweepPoint> asymptotic_sweep(const ProblemSetup& p, std::vector<double> lambdas,
                                         const SolverConfig& base);

std::string sweep_csv(const std::vector<SweepPoint>& sweep, int n);

// Empirical probe for the sufficiency threshold: smallest lambda in
// [lo, hi] where minimize converges, located by bisection.
double probe_lambda1(const ProblemSetup& p, const SolverConfig& base, double lo, double hi,
                     int steps = 20);

}  // namespace cshv
