#pragma once

#include <string>
#include <vector>

namespace cshv {

// Uniform periodic grid on the rectangle [0,L1) x [0,L2).
struct TorusGrid {
    double L1 = 1.0, L2 = 1.0;
    int M1 = 128, M2 = 128;

    double area() const { return L1 * L2; }
    double h1() const { return L1 / M1; }
    double h2() const { return L2 / M2; }
    std::size_t size() const { return static_cast<std::size_t>(M1) * M2; }

    bool operator==(const TorusGrid&) const = default;

    // throws ConfigError unless sides positive and resolutions even positive
    void check() const;
};

// Scalar field sampled on the grid, row-major: values[i1 * M2 + i2],
// x = (i1 h1, i2 h2).
struct Field {
    TorusGrid grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const TorusGrid& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}

    double& at(int i1, int i2) { return values[static_cast<std::size_t>(i1) * grid.M2 + i2]; }
    double at(int i1, int i2) const { return values[static_cast<std::size_t>(i1) * grid.M2 + i2]; }
};

double quadrature(const Field& f);            // trapezoidal on the torus
double mean(const Field& f);                  // quadrature / area
double max_abs(const Field& f);
double norm_l2(const Field& f);               // sqrt of quadrature of f^2
void subtract_mean(Field& f);

// Spectral Laplacian of the trigonometric interpolant; output mean is zero.
Field laplacian(const Field& f);

// Spectral solve of  Laplacian(u) = f  with mean-zero f; returns mean-zero u.
Field inverse_laplacian(const Field& f);

struct VortexPoint {
    double x = 0.0, y = 0.0;
    int multiplicity = 1;
};

// Vortex points per equation index, stored modulo the lattice.
struct VortexConfiguration {
    std::vector<std::vector<VortexPoint>> points;  // size n

    int n() const { return static_cast<int>(points.size()); }
    std::vector<int> counts() const;               // N_i = total multiplicity
    void reduce_to_cell(const TorusGrid& g);
};

// Mean-zero backgrounds u0_i solving
//   Laplacian(u0_i) = 4 pi sum_s mult * gaussian(p_is) - 4 pi N_i / |Omega|
// with the Dirac sources mollified to periodic Gaussians of width sigma.
struct BackgroundField {
    std::vector<Field> u0;
    std::vector<int> N;
    double sigma = 0.0;
};

BackgroundField background(const TorusGrid& grid, const VortexConfiguration& vortices,
                           double sigma);

struct IntegralCoefficients {
    std::vector<double> a;                   // a_i = int exp(u0_i + w_i)
    std::vector<std::vector<double>> aM;     // a_ij = int exp(u0_i+u0_j+w_i+w_j)
};

// Quadrature coefficients; throws RangeError if an exponent exceeds 700.
IntegralCoefficients coefficients_a(const BackgroundField& u0, const std::vector<Field>& w);

// Row-major CSV dump with a geometry header line.
void write_field_csv(const Field& f, const std::string& path);

}  // namespace cshv
