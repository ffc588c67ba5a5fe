#pragma once

// shared helpers for the randomized constraint tests

#include "cshv/cartan.hpp"
#include "cshv/constraints.hpp"
#include "cshv/torus.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace cshv::testing {

// Integral coefficients of randomly generated positive densities
// U_i = exp(y_i - mean(y_i)), so Hoelder and Jensen hold by construction.
inline IntegralCoefficients random_coefficients(int n, std::mt19937& rng, double amp = 0.8) {
    const int M = 24;
    std::uniform_real_distribution<double> coef(-amp, amp);
    std::vector<std::vector<double>> y(n, std::vector<double>(M * M, 0.0));
    for (int i = 0; i < n; ++i) {
        for (int m1 = -2; m1 <= 2; ++m1)
            for (int m2 = 0; m2 <= 2; ++m2) {
                if (m1 == 0 && m2 == 0) continue;
                double cc = coef(rng), cs = coef(rng);
                for (int a = 0; a < M; ++a)
                    for (int b = 0; b < M; ++b) {
                        double ph = 2.0 * std::numbers::pi * (m1 * a + m2 * b) /
                                    static_cast<double>(M);
                        y[i][a * M + b] += cc * std::cos(ph) + cs * std::sin(ph);
                    }
            }
        double mean = 0.0;
        for (double v : y[i]) mean += v;
        mean /= M * M;
        for (double& v : y[i]) v = std::exp(v - mean);
    }
    const double cell = 1.0 / (M * M);  // unit cell
    IntegralCoefficients c;
    c.a.assign(n, 0.0);
    c.aM.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        for (double v : y[i]) c.a[i] += v;
        c.a[i] *= cell;
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < M * M; ++k) s += y[i][k] * y[j][k];
            c.aM[i][j] = c.aM[j][i] = s * cell;
        }
    }
    return c;
}

// Admissible input at a coupling a random factor above the admissibility bound.
inline ConstraintInput random_admissible_input(const CartanData& data,
                                               const std::vector<int>& N, std::mt19937& rng) {
    IntegralCoefficients c = random_coefficients(data.n, rng);
    RatVector b_pi = vortex_vector_b(data, N);
    double lambda_min = 0.0;
    for (int i = 0; i < data.n; ++i) {
        double b = to_double(b_pi[i]) * std::numbers::pi;
        double bound = 4.0 * data.alpha_d[i][i] * data.P_d[i] * data.P_d[i] * b *
                       c.aM[i][i] / (c.a[i] * c.a[i]);
        lambda_min = std::max(lambda_min, bound);
    }
    std::uniform_real_distribution<double> factor(1.05, 6.0);
    return make_constraint_input(data, c, b_pi, factor(rng) * lambda_min, 1.0);
}

}  // namespace cshv::testing
