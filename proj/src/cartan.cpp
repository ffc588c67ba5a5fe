#include "cshv/cartan.hpp"

#include "cshv/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace cshv {

namespace {

void check_sign_pattern(const RatMatrix& K) {
    if (K.rows() == 0 || K.rows() != K.cols())
        throw ConfigError("matrix must be square and nonempty");
    const std::size_t n = K.rows();
    for (std::size_t i = 0; i < n; ++i) {
        if (K(i, i) <= 0) throw ConfigError("diagonal entries must be positive");
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (K(i, j) > 0) throw ConfigError("off-diagonal entries must be nonpositive");
        }
    }
}

std::string vector_to_text(const RatVector& v) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i].str();
    os << ")";
    return os.str();
}

}  // namespace

AlgebraSpec AlgebraSpec::of(Family f, int rank) {
    AlgebraSpec s;
    s.family = f;
    s.rank = rank;
    return s;
}

AlgebraSpec AlgebraSpec::of_matrix(RatMatrix m) {
    AlgebraSpec s;
    s.explicit_matrix = std::move(m);
    s.rank = static_cast<int>(s.explicit_matrix->rows());
    return s;
}

std::string AlgebraSpec::name() const {
    if (!family) return "matrix(" + std::to_string(rank) + ")";
    static const char* letters = "ABCDEFG";
    return std::string(1, letters[static_cast<int>(*family)]) + std::to_string(rank);
}

Family family_from_char(char c) {
    switch (c) {
        case 'A': return Family::A;
        case 'B': return Family::B;
        case 'C': return Family::C;
        case 'D': return Family::D;
        case 'E': return Family::E;
        case 'F': return Family::F;
        case 'G': return Family::G;
        default: throw ConfigError(std::string("unknown family letter '") + c + "'");
    }
}

RatMatrix cartan_matrix(const AlgebraSpec& spec) {
    if (spec.explicit_matrix) {
        check_sign_pattern(*spec.explicit_matrix);
        return *spec.explicit_matrix;
    }
    if (!spec.family) throw ConfigError("algebra spec carries neither family nor matrix");
    const int n = spec.rank;
    const Family f = *spec.family;

    auto require = [&](bool ok, const char* what) {
        if (!ok) throw ConfigError("invalid rank " + std::to_string(n) + " for family " + what);
    };
    switch (f) {
        case Family::A: require(n >= 1, "A"); break;
        case Family::B: require(n >= 2, "B"); break;
        case Family::C: require(n >= 2, "C"); break;
        case Family::D: require(n >= 3, "D"); break;
        case Family::E: require(n >= 6 && n <= 8, "E"); break;
        case Family::F: require(n == 4, "F"); break;
        case Family::G: require(n == 2, "G"); break;
    }

    RatMatrix K(n, n);
    for (int i = 0; i < n; ++i) K(i, i) = 2;
    auto bond = [&](int i, int j, int kij = -1, int kji = -1) {
        K(i, j) = kij;
        K(j, i) = kji;
    };

    switch (f) {
        case Family::A:
            for (int i = 0; i + 1 < n; ++i) bond(i, i + 1);
            break;
        case Family::B:
            // short root at the end of the chain
            for (int i = 0; i + 2 < n; ++i) bond(i, i + 1);
            bond(n - 2, n - 1, -2, -1);
            break;
        case Family::C:
            for (int i = 0; i + 2 < n; ++i) bond(i, i + 1);
            bond(n - 2, n - 1, -1, -2);
            break;
        case Family::D:
            for (int i = 0; i + 3 < n; ++i) bond(i, i + 1);
            bond(n - 3, n - 2);
            bond(n - 3, n - 1);
            break;
        case Family::E: {
            // Bourbaki numbering: chain 1-3-4-5-6(-7-8), node 2 hangs off node 4.
            std::vector<int> chain = {0, 2, 3, 4, 5};
            for (int i = 6; i < n; ++i) chain.push_back(i);
            for (std::size_t i = 0; i + 1 < chain.size(); ++i) bond(chain[i], chain[i + 1]);
            bond(1, 3);
            break;
        }
        case Family::F:
            bond(0, 1);
            bond(1, 2, -2, -1);
            bond(2, 3);
            break;
        case Family::G:
            bond(0, 1, -1, -3);
            break;
    }
    return K;
}

std::pair<RatVector, RatMatrix> decompose(const RatMatrix& K) {
    check_sign_pattern(K);
    const std::size_t n = K.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && (K(i, j) == 0) != (K(j, i) == 0))
                throw DecompositionError("zero pattern of K is not symmetric");

    // Symmetry of S = P^{-1} K^tau requires P_j K_ji = P_i K_ij along every
    // edge of the graph; propagate from P = 1 on each component representative.
    RatVector P(n, Rational(0));
    std::vector<std::size_t> stack;
    for (std::size_t root = 0; root < n; ++root) {
        if (P[root] != 0) continue;
        P[root] = 1;
        stack.push_back(root);
        while (!stack.empty()) {
            std::size_t i = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j || K(i, j) == 0) continue;
                Rational pj = P[i] * K(i, j) / K(j, i);
                if (P[j] == 0) {
                    P[j] = pj;
                    stack.push_back(j);
                } else if (P[j] != pj) {
                    throw DecompositionError("K is not symmetrizable (inconsistent cycle products)");
                }
            }
        }
    }

    RatMatrix S(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) S(i, j) = K(j, i) / P[i];
    if (!S.is_symmetric())
        throw DecompositionError("P^{-1} K^tau failed to come out symmetric");
    return {std::move(P), std::move(S)};
}

CartanData make_cartan_data(const AlgebraSpec& spec) {
    CartanData d;
    d.K = cartan_matrix(spec);
    d.n = static_cast<int>(d.K.rows());
    auto [P, S] = decompose(d.K);
    d.P = std::move(P);
    d.S = std::move(S);

    const std::size_t n = d.K.rows();
    d.alpha = RatMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            d.alpha(i, j) = d.S(i, j) < 0 ? Rational(-d.S(i, j)) : d.S(i, j);

    if (d.S.determinant() != 0) {
        d.S_inv = d.S.inverse();
        d.K_inv = d.K.inverse();
        // R_i = sum_j ((K^tau)^{-1})_{ij}, (K^tau)^{-1} = S^{-1} P^{-1}
        d.R.assign(n, Rational(0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d.R[i] += d.S_inv(i, j) / d.P[j];

        d.A = RatMatrix(n, n);
        d.Q = RatMatrix(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                d.A(i, j) = d.S_inv(i, j) / (d.P[i] * d.P[j]);
                d.Q(i, j) = d.R[i] * d.S(i, j) * d.R[j];
            }
    }

    d.P_d.resize(n);
    d.R_d.resize(n);
    d.alpha_d.assign(n, std::vector<double>(n));
    d.A_d.assign(n, std::vector<double>(n));
    d.Q_d.assign(n, std::vector<double>(n));
    d.K_d.assign(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        d.P_d[i] = to_double(d.P[i]);
        if (!d.R.empty()) d.R_d[i] = to_double(d.R[i]);
        for (std::size_t j = 0; j < n; ++j) {
            d.alpha_d[i][j] = to_double(d.alpha(i, j));
            d.K_d[i][j] = to_double(d.K(i, j));
            if (d.A.rows()) {
                d.A_d[i][j] = to_double(d.A(i, j));
                d.Q_d[i][j] = to_double(d.Q(i, j));
            }
        }
    }
    return d;
}

bool ValidationReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string ValidationReport::to_text() const {
    std::ostringstream os;
    for (const auto& c : checks)
        os << (c.pass ? "pass" : "FAIL") << "  " << c.name
           << (c.witness.empty() ? "" : "  " + c.witness) << "\n";
    return os.str();
}

ValidationReport validate(const CartanData& d) {
    ValidationReport rep;
    const std::size_t n = d.K.rows();

    {
        RatMatrix PS(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) PS(i, j) = d.P[i] * d.S(i, j);
        bool ok = PS == d.K.transposed();
        rep.checks.push_back({"K^tau = P S", ok, ""});
    }
    rep.checks.push_back({"S symmetric", d.S.is_symmetric(), ""});

    {
        RatVector minors = d.S.leading_principal_minors();
        bool ok = true;
        for (const auto& m : minors) ok = ok && m > 0;
        rep.checks.push_back({"S positive definite (leading minors > 0)", ok,
                              "minors=" + vector_to_text(minors)});
    }
    {
        bool ok = d.S_inv.rows() == n;
        if (ok)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) ok = ok && d.S_inv(i, j) > 0;
        rep.checks.push_back({"all entries of S^{-1} positive", ok,
                              ok ? "" : "(S singular or nonpositive entry)"});
    }
    {
        bool ok = !d.R.empty();
        if (ok)
            for (const auto& r : d.R) ok = ok && r > 0;
        rep.checks.push_back({"R positive", ok, ok ? "R=" + vector_to_text(d.R) : ""});
    }
    {
        // P^{-1} 1 = S R 1, exact
        bool ok = !d.R.empty();
        if (ok)
            for (std::size_t i = 0; i < n; ++i) {
                Rational lhs = 1 / d.P[i];
                Rational rhs = 0;
                for (std::size_t j = 0; j < n; ++j) rhs += d.S(i, j) * d.R[j];
                ok = ok && lhs == rhs;
            }
        rep.checks.push_back({"P^{-1} 1 = S R 1", ok, ""});
    }
    return rep;
}

RatVector vortex_vector_b(const CartanData& d, const std::vector<int>& N) {
    if (d.A.rows() == 0) throw ConfigError("Cartan data incomplete (S singular)");
    if (N.size() != static_cast<std::size_t>(d.n))
        throw ConfigError("vortex number vector has wrong length");
    RatVector coeff(d.n, Rational(0));
    for (int i = 0; i < d.n; ++i)
        for (int j = 0; j < d.n; ++j) coeff[i] += 4 * d.A(i, j) * N[j];
    return coeff;  // coefficient of pi
}

Rational lambda_threshold_coeff(const CartanData& d, const std::vector<int>& N) {
    if (d.K_inv.rows() == 0) throw ConfigError("Cartan data incomplete (K singular)");
    Rational num = 0, den = 0;
    for (int i = 0; i < d.n; ++i)
        for (int j = 0; j < d.n; ++j) {
            Rational term = d.K_inv(j, i) / d.P[i];
            den += term;
            num += term * N[j];
        }
    return num / den;
}

double lambda_threshold(const CartanData& d, const std::vector<int>& N, double domain_area) {
    if (domain_area <= 0) throw ConfigError("domain area must be positive");
    return 16.0 * std::numbers::pi / domain_area * to_double(lambda_threshold_coeff(d, N));
}

}  // namespace cshv
