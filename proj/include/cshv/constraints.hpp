#pragma once

#include "cshv/cartan.hpp"
#include "cshv/torus.hpp"

#include <string>
#include <vector>

namespace cshv {

// Everything the constraint equations
//   e^{2c_i} R_i^2 alpha_ii a_ii
//     - e^{c_i} ( R_i a_i / P_i + sum_{j != i} e^{c_j} R_i R_j alpha_ij a_ij )
//     + b_i / lambda = 0
// need: Cartan data, the integral coefficients, the floated vortex vector b,
// the coupling and the cell area.
struct ConstraintInput {
    const CartanData* data = nullptr;
    std::vector<double> a;
    std::vector<std::vector<double>> aM;
    std::vector<double> b;
    double lambda = 0.0;
    double area = 1.0;

    int n() const { return static_cast<int>(a.size()); }
};

ConstraintInput make_constraint_input(const CartanData& data, const IntegralCoefficients& coeffs,
                                      const RatVector& b_pi_coeff, double lambda, double area);

enum class ConstraintMethod { squeeze, homotopy, scalar_closed_form };

struct ConstraintSolution {
    std::vector<double> t;  // t_i = e^{c_i}
    std::vector<double> c;
    double residual = 0.0;  // max relative residual of the quadratic system
    ConstraintMethod method = ConstraintMethod::homotopy;
    long iterations = 0;
};

// Admissibility margins m_i = a_i^2 / a_ii - 4 alpha_ii P_i^2 b_i / lambda;
// the input is admissible iff all margins are >= 0.
std::vector<double> admissible_margins(const ConstraintInput& in);
bool admissible(const ConstraintInput& in);

// Qtilde = R Stilde R with Stilde_ij = +-alpha_ij a_ij (positive diagonal).
std::vector<std::vector<double>> qtilde(const ConstraintInput& in);

// The deformed fixed-point map ("+" branch of the quadratic), eps in [0,1].
// Throws InfeasibilityError if a discriminant is negative.
std::vector<double> f_map(const ConstraintInput& in, double eps, const std::vector<double>& t);

// Max relative residual of the quadratic constraint system at t.
double constraint_residual(const ConstraintInput& in, const std::vector<double>& t);

// General route: exact eps = 0 linear solve, monotone Picard at eps = 1,
// Newton polish; Newton and eps-stepping fallbacks on stagnation.
ConstraintSolution solve_homotopy(const ConstraintInput& in);

// SU(4)-specific route: scalar root-find of F(t) = t - f2(f1(t), f3(t)).
// Requires the A3 Cartan matrix.
ConstraintSolution solve_squeeze(const ConstraintInput& in);

// The squeeze function F itself (exposed for the uniqueness property tests).
double squeeze_function(const ConstraintInput& in, double t);

// Rank-1 closed form, "+" root of the scalar quadratic.
ConstraintSolution scalar_closed_form(const ConstraintInput& in);

}  // namespace cshv
