#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace cshv {

using Rational = boost::multiprecision::cpp_rational;

using RatVector = std::vector<Rational>;

// Dense row-major rational matrix, sized for Cartan-matrix work (rank <= 10).
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols, Rational fill = 0)
        : rows_(rows), cols_(cols), data_(rows * cols, std::move(fill)) {}

    static RatMatrix identity(std::size_t n) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const RatMatrix& other) const = default;

    RatMatrix transposed() const;
    RatMatrix operator*(const RatMatrix& rhs) const;
    RatVector operator*(const RatVector& rhs) const;

    bool is_symmetric() const;

    // Exact determinant by Bareiss fraction-free elimination.
    Rational determinant() const;

    // Determinants of the k x k leading principal submatrices, k = 1..n.
    RatVector leading_principal_minors() const;

    // Gauss-Jordan with exact pivoting; throws DecompositionError if singular.
    RatMatrix inverse() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

std::string to_string(const Rational& r);
double to_double(const Rational& r);

}  // namespace cshv
