#include "cshv/torus.hpp"

#include "cshv/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>

namespace cshv {

namespace {

constexpr double kExponentLimit = 700.0;

// Cached FFTW plans per grid size. FFTW plan creation is not thread-safe;
// execution via the new-array interface is.
class SpectralWorkspace {
public:
    static SpectralWorkspace& get(int M1, int M2) {
        static std::mutex mu;
        static std::map<std::pair<int, int>, SpectralWorkspace*> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_pair(M1, M2);
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, new SpectralWorkspace(M1, M2)).first;
        return *it->second;
    }

    void forward(const double* in, fftw_complex* out) {
        std::lock_guard<std::mutex> lock(mu_);
        std::copy(in, in + static_cast<std::size_t>(M1_) * M2_, real_);
        fftw_execute(fwd_);
        std::memcpy(out, spec_, spec_size() * sizeof(fftw_complex));
    }

    void backward(const fftw_complex* in, double* out) {
        std::lock_guard<std::mutex> lock(mu_);
        std::memcpy(spec_, in, spec_size() * sizeof(fftw_complex));
        fftw_execute(bwd_);
        std::copy(real_, real_ + static_cast<std::size_t>(M1_) * M2_, out);
    }

    std::size_t spec_size() const { return static_cast<std::size_t>(M1_) * (M2_ / 2 + 1); }

private:
    SpectralWorkspace(int M1, int M2) : M1_(M1), M2_(M2) {
        real_ = fftw_alloc_real(static_cast<std::size_t>(M1) * M2);
        spec_ = fftw_alloc_complex(spec_size());
        fwd_ = fftw_plan_dft_r2c_2d(M1, M2, real_, spec_, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_c2r_2d(M1, M2, spec_, real_, FFTW_ESTIMATE);
    }

    int M1_, M2_;
    double* real_;
    fftw_complex* spec_;
    fftw_plan fwd_, bwd_;
    std::mutex mu_;
};

// signed mode index m1 in [-M/2, M/2)
inline int signed_mode(int i, int M) { return i <= M / 2 - 1 ? i : i - M; }

}  // namespace

void TorusGrid::check() const {
    if (L1 <= 0 || L2 <= 0) throw ConfigError("grid side lengths must be positive");
    if (M1 <= 0 || M2 <= 0 || M1 % 2 != 0 || M2 % 2 != 0)
        throw ConfigError("grid resolutions must be even positive integers");
}

double quadrature(const Field& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    return s * f.grid.h1() * f.grid.h2();
}

double mean(const Field& f) { return quadrature(f) / f.grid.area(); }

double max_abs(const Field& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

double norm_l2(const Field& f) {
    double s = 0.0;
    for (double v : f.values) s += v * v;
    return std::sqrt(s * f.grid.h1() * f.grid.h2());
}

void subtract_mean(Field& f) {
    double m = mean(f);
    for (double& v : f.values) v -= m;
}

Field laplacian(const Field& f) {
    const TorusGrid& g = f.grid;
    auto& ws = SpectralWorkspace::get(g.M1, g.M2);
    std::vector<std::complex<double>> spec(ws.spec_size());
    ws.forward(f.values.data(), reinterpret_cast<fftw_complex*>(spec.data()));

    const double two_pi = 2.0 * std::numbers::pi;
    const double scale = 1.0 / (static_cast<double>(g.M1) * g.M2);
    for (int i = 0; i < g.M1; ++i) {
        double k1 = two_pi * signed_mode(i, g.M1) / g.L1;
        for (int j = 0; j <= g.M2 / 2; ++j) {
            double k2 = two_pi * j / g.L2;
            spec[static_cast<std::size_t>(i) * (g.M2 / 2 + 1) + j] *=
                -(k1 * k1 + k2 * k2) * scale;
        }
    }
    spec[0] = 0.0;  // exact mean-zero output

    Field out(g);
    ws.backward(reinterpret_cast<const fftw_complex*>(spec.data()), out.values.data());
    return out;
}

Field inverse_laplacian(const Field& f) {
    const TorusGrid& g = f.grid;
    auto& ws = SpectralWorkspace::get(g.M1, g.M2);
    std::vector<std::complex<double>> spec(ws.spec_size());
    ws.forward(f.values.data(), reinterpret_cast<fftw_complex*>(spec.data()));

    const double two_pi = 2.0 * std::numbers::pi;
    const double scale = 1.0 / (static_cast<double>(g.M1) * g.M2);
    for (int i = 0; i < g.M1; ++i) {
        double k1 = two_pi * signed_mode(i, g.M1) / g.L1;
        for (int j = 0; j <= g.M2 / 2; ++j) {
            double k2 = two_pi * j / g.L2;
            auto& c = spec[static_cast<std::size_t>(i) * (g.M2 / 2 + 1) + j];
            double k2norm = k1 * k1 + k2 * k2;
            c = (k2norm == 0.0) ? 0.0 : c * (-scale / k2norm);
        }
    }

    Field out(g);
    ws.backward(reinterpret_cast<const fftw_complex*>(spec.data()), out.values.data());
    return out;
}

std::vector<int> VortexConfiguration::counts() const {
    std::vector<int> N;
    N.reserve(points.size());
    for (const auto& list : points) {
        int total = 0;
        for (const auto& p : list) total += p.multiplicity;
        N.push_back(total);
    }
    return N;
}

void VortexConfiguration::reduce_to_cell(const TorusGrid& g) {
    for (auto& list : points)
        for (auto& p : list) {
            p.x -= g.L1 * std::floor(p.x / g.L1);
            p.y -= g.L2 * std::floor(p.y / g.L2);
        }
}

BackgroundField background(const TorusGrid& grid, const VortexConfiguration& vortices,
                           double sigma) {
    grid.check();
    const double h = std::max(grid.h1(), grid.h2());
    if (sigma < h)
        throw ResolutionError("mollification width " + std::to_string(sigma) +
                              " below grid spacing " + std::to_string(h));

    BackgroundField bg;
    bg.sigma = sigma;
    bg.N = vortices.counts();

    auto& ws = SpectralWorkspace::get(grid.M1, grid.M2);
    const double two_pi = 2.0 * std::numbers::pi;
    const double four_pi = 4.0 * std::numbers::pi;

    for (const auto& list : vortices.points) {
        std::vector<std::complex<double>> spec(ws.spec_size(), 0.0);
        for (int i = 0; i < grid.M1; ++i) {
            double k1 = two_pi * signed_mode(i, grid.M1) / grid.L1;
            for (int j = 0; j <= grid.M2 / 2; ++j) {
                double k2 = two_pi * j / grid.L2;
                double k2norm = k1 * k1 + k2 * k2;
                if (k2norm == 0.0) continue;
                std::complex<double> src(0.0, 0.0);
                for (const auto& p : list) {
                    double phase = -(k1 * p.x + k2 * p.y);
                    src += static_cast<double>(p.multiplicity) *
                           std::complex<double>(std::cos(phase), std::sin(phase));
                }
                src *= four_pi / grid.area() * std::exp(-0.5 * sigma * sigma * k2norm);
                // Laplacian(u0) = source  => coefficient / (-|k|^2)
                spec[static_cast<std::size_t>(i) * (grid.M2 / 2 + 1) + j] = src / (-k2norm);
            }
        }
        Field u0(grid);
        ws.backward(reinterpret_cast<const fftw_complex*>(spec.data()), u0.values.data());
        bg.u0.push_back(std::move(u0));
    }
    return bg;
}

IntegralCoefficients coefficients_a(const BackgroundField& bg, const std::vector<Field>& w) {
    const int n = static_cast<int>(bg.u0.size());
    if (static_cast<int>(w.size()) != n)
        throw ConfigError("coefficients_a: field count mismatch");

    const TorusGrid& g = bg.u0.front().grid;
    const std::size_t len = g.size();
    const double cell = g.h1() * g.h2();

    // exponents e_i = u0_i + w_i, checked against the representable range
    std::vector<std::vector<double>> e(n);
    for (int i = 0; i < n; ++i) {
        e[i].resize(len);
        for (std::size_t s = 0; s < len; ++s) {
            double x = bg.u0[i].values[s] + w[i].values[s];
            if (std::abs(x) > kExponentLimit)
                throw RangeError("exponent out of range in coefficients_a");
            e[i][s] = x;
        }
    }

    IntegralCoefficients out;
    out.a.assign(n, 0.0);
    out.aM.assign(n, std::vector<double>(n, 0.0));
    std::vector<std::vector<double>> ex(n);
    for (int i = 0; i < n; ++i) {
        ex[i].resize(len);
        double s = 0.0;
        for (std::size_t k = 0; k < len; ++k) {
            ex[i][k] = std::exp(e[i][k]);
            s += ex[i][k];
        }
        out.a[i] = s * cell;
    }
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < len; ++k) {
                if (std::abs(e[i][k] + e[j][k]) > kExponentLimit)
                    throw RangeError("pair exponent out of range in coefficients_a");
                s += ex[i][k] * ex[j][k];
            }
            out.aM[i][j] = out.aM[j][i] = s * cell;
        }
    return out;
}

void write_field_csv(const Field& f, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open output file " + path);
    os << "# L1=" << f.grid.L1 << " L2=" << f.grid.L2 << " M1=" << f.grid.M1
       << " M2=" << f.grid.M2 << "\n";
    os.precision(17);
    for (int i = 0; i < f.grid.M1; ++i) {
        for (int j = 0; j < f.grid.M2; ++j) os << (j ? "," : "") << f.at(i, j);
        os << "\n";
    }
}

}  // namespace cshv
