#pragma once

#include "cshv/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cshv {

// Simple Lie algebra types A..G, or an explicit user matrix obeying the
// same sign pattern (positive diagonal, nonpositive off-diagonal).
enum class Family { A, B, C, D, E, F, G };

struct AlgebraSpec {
    std::optional<Family> family;
    int rank = 0;
    std::optional<RatMatrix> explicit_matrix;

    static AlgebraSpec of(Family f, int rank);
    static AlgebraSpec of_matrix(RatMatrix m);
    std::string name() const;
};

Family family_from_char(char c);

// All matrix data attached to one algebra / matrix choice, exact.
//
// K^tau = P S with P positive diagonal (P_1 = 1), S symmetric positive
// definite, alpha_ij = |S_ij|, R_i the row sums of (K^tau)^{-1},
// A = P^{-1} S^{-1} P^{-1}, Q = R S R (R as a diagonal matrix).
struct CartanData {
    int n = 0;
    RatMatrix K;
    RatVector P;       // diagonal of the symmetrizer
    RatMatrix S;
    RatMatrix alpha;   // alpha_ij = |S_ij|, alpha_ii = S_ii
    RatMatrix K_inv;
    RatMatrix S_inv;
    RatVector R;
    RatMatrix A;
    RatMatrix Q;

    // Convenience doubles for the numeric modules.
    std::vector<double> P_d, R_d;
    std::vector<std::vector<double>> alpha_d, A_d, Q_d, K_d;
};

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string witness;  // exact rational witness or failure detail
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool all_pass() const;
    std::string to_text() const;
};

// Cartan matrix of the given simple type from standard Dynkin-diagram data.
RatMatrix cartan_matrix(const AlgebraSpec& spec);

// Positive diagonal P (P_1 = 1 per connected component) and S = P^{-1} K^tau,
// exactly symmetric. Throws DecompositionError when no symmetrizer exists.
std::pair<RatVector, RatMatrix> decompose(const RatMatrix& K);

// Assemble everything; throws DecompositionError if S is not invertible.
CartanData make_cartan_data(const AlgebraSpec& spec);

// Per-invariant pass/fail certificates, all in exact arithmetic.
ValidationReport validate(const CartanData& data);

// b = 4 pi A N, returned as the rational coefficient of pi (one per index).
RatVector vortex_vector_b(const CartanData& data, const std::vector<int>& N);

// Necessary-condition threshold lambda_0.
double lambda_threshold(const CartanData& data, const std::vector<int>& N, double domain_area);

// Exact rational coefficient: lambda_0 = 16 pi / |Omega| * coeff.
Rational lambda_threshold_coeff(const CartanData& data, const std::vector<int>& N);

}  // namespace cshv
