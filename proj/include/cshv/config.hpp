#pragma once

#include "cshv/cartan.hpp"
#include "cshv/torus.hpp"

#include <string>
#include <vector>

namespace cshv {

struct SweepSpec {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    int count = 0;
    bool log_spaced = true;
};

// One run configuration, JSON on disk (// comments allowed). Every field
// not present in the file keeps the default shown here.
struct RunConfig {
    std::string algebra = "A1";                         // e.g. "A3", "G2"
    std::vector<std::vector<long long>> matrix;          // explicit alternative
    double L1 = 1.0, L2 = 1.0;
    int M1 = 128, M2 = 128;
    std::vector<std::vector<VortexPoint>> vortices;      // per index
    double lambda = 0.0;                                 // single-coupling runs
    SweepSpec sweep;                                     // sweep runs
    bool has_sweep = false;
    double sigma = 0.0;                                  // 0 => 2 max(h1,h2)
    double g_tol = 1e-8;
    long max_iterations = 100000;
    double m_min = 0.0;
    std::string seed = "zero";                           // or "tarantello"
    double seed_mu = 0.0;
    bool write_fields = false;

    AlgebraSpec algebra_spec() const;
    TorusGrid grid() const;
    double resolved_sigma() const;                        // applies the 2h default
    std::vector<double> lambdas() const;                  // sweep expansion
    VortexConfiguration vortex_configuration(int n) const;

    // Full resolved config (defaults filled in), embedded in every report.
    std::string resolved_text() const;
};

// Throws ConfigError naming the offending key on any unknown key,
// malformed point, bad algebra string or nonpositive lambda.
RunConfig parse_config(const std::string& text);

RunConfig load_config(const std::string& path);

}  // namespace cshv
