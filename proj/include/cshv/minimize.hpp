#pragma once

#include "cshv/cartan.hpp"
#include "cshv/constraints.hpp"
#include "cshv/torus.hpp"

#include <string>
#include <vector>

namespace cshv {

// Immutable per-problem data: algebra, grid, vortices, backgrounds, b.
struct ProblemSetup {
    const CartanData* data = nullptr;
    TorusGrid grid;
    VortexConfiguration vortices;
    BackgroundField bg;
    RatVector b_pi;          // rational coefficient of pi
    std::vector<double> b;   // floated
    std::vector<int> N;

    int n() const { return data ? data->n : 0; }
};

ProblemSetup make_problem(const CartanData& data, const TorusGrid& grid,
                          VortexConfiguration vortices, double sigma);

struct SolverConfig {
    double lambda = 0.0;
    double g_tol = 1e-8;             // gradient tolerance, scaled by sqrt(area)
    long max_iterations = 100000;
    double m_min = 0.0;              // admissibility safety margin
    bool use_tarantello_seed = false;
    double seed_mu = 0.0;            // 0 => 100 x per-index scalar threshold
    bool verbose = false;
};

// State of one functional evaluation at w (the reduced functional J).
struct FunctionalState {
    bool admissible = false;
    std::vector<double> margins;
    IntegralCoefficients coeffs;
    ConstraintSolution constraint;
    double J = 0.0;
    std::vector<Field> exp_uw;       // exp(u0_i + w_i)
    std::vector<Field> lap_w;
};

// Full functional I at v (unreduced form).
double functional_I(const ProblemSetup& p, double lambda, const std::vector<Field>& v);

// Reduced functional J(w) = I(w + c(w)); state.admissible = false is the
// boundary signal used by the line search (no exception).
FunctionalState functional_J(const ProblemSetup& p, double lambda, const std::vector<Field>& w,
                             double m_min = 0.0);

// Mean-zero Euler-Lagrange gradient of I at v = w + c(w).
std::vector<Field> gradient_J(const ProblemSetup& p, double lambda, const FunctionalState& state,
                              const std::vector<Field>& w);

// Per-index scalar solves of the rank-1 problem at coupling mu, mean removed.
// Throws SolverError if a scalar solve fails to converge.
std::vector<Field> tarantello_seed(const ProblemSetup& p, double mu);

enum class MinimizeStatus {
    converged,
    necessary_condition_violated,
    lambda_too_small,   // line search trapped at the admissibility boundary
    iteration_cap,
    seed_failed,
};

std::string to_string(MinimizeStatus s);

struct MinimizeResult {
    MinimizeStatus status = MinimizeStatus::iteration_cap;
    double lambda = 0.0;
    double lambda0 = 0.0;
    std::vector<Field> w;
    std::vector<Field> v;            // w + c
    ConstraintSolution constraint;
    std::vector<double> margins;
    double J = 0.0;
    long iterations = 0;
    double grad_norm = 0.0;
    double pde_residual_l2 = 0.0;        // residual of the unreduced system
    double pde_residual_scaled = 0.0;    // divided by the lambda-scaled norm
    double identity_residual = 0.0;      // quadratic-form integral identity
    double envelope_residual = 0.0;      // natural-constraint defect / b_i
};

MinimizeResult minimize(const ProblemSetup& p, const SolverConfig& cfg);

}  // namespace cshv
