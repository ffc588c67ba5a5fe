#include "cshv/config.hpp"

#include "cshv/errors.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace cshv {

using nlohmann::json;

namespace {

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

double get_positive(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    double v = obj.at(key).get<double>();
    if (!(v > 0.0)) throw ConfigError(std::string("'") + key + "' must be positive");
    return v;
}

std::vector<std::vector<VortexPoint>> parse_vortices(const json& arr) {
    std::vector<std::vector<VortexPoint>> out;
    if (!arr.is_array()) throw ConfigError("'vortices' must be an array of per-index lists");
    for (const auto& lst : arr) {
        if (!lst.is_array()) throw ConfigError("'vortices' entries must be arrays of points");
        std::vector<VortexPoint> pts;
        for (const auto& p : lst) {
            if (!p.is_array() || p.size() < 2 || p.size() > 3)
                throw ConfigError("'vortices' point must be [x, y] or [x, y, multiplicity]");
            VortexPoint vp;
            vp.x = p.at(0).get<double>();
            vp.y = p.at(1).get<double>();
            vp.multiplicity = p.size() == 3 ? p.at(2).get<int>() : 1;
            if (vp.multiplicity < 1)
                throw ConfigError("'vortices' multiplicity must be a positive integer");
            pts.push_back(vp);
        }
        out.push_back(std::move(pts));
    }
    return out;
}

}  // namespace

AlgebraSpec RunConfig::algebra_spec() const {
    if (!matrix.empty()) {
        std::size_t n = matrix.size();
        RatMatrix K(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            if (matrix[i].size() != n) throw ConfigError("'matrix' must be square");
            for (std::size_t j = 0; j < n; ++j) K(i, j) = matrix[i][j];
        }
        return AlgebraSpec::of_matrix(std::move(K));
    }
    if (algebra.size() < 2 || !std::isalpha(static_cast<unsigned char>(algebra[0])))
        throw ConfigError("'algebra' must look like 'A3' or 'G2', got '" + algebra + "'");
    int rank = 0;
    try {
        std::size_t used = 0;
        rank = std::stoi(algebra.substr(1), &used);
        if (used + 1 != algebra.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw ConfigError("'algebra' has a malformed rank in '" + algebra + "'");
    }
    return AlgebraSpec::of(family_from_char(algebra[0]), rank);
}

TorusGrid RunConfig::grid() const {
    TorusGrid g{L1, L2, M1, M2};
    g.check();
    return g;
}

double RunConfig::resolved_sigma() const {
    if (sigma > 0.0) return sigma;
    TorusGrid g = grid();
    return 2.0 * std::max(g.h1(), g.h2());
}

std::vector<double> RunConfig::lambdas() const {
    if (!has_sweep) return {lambda};
    std::vector<double> out;
    out.reserve(sweep.count);
    if (sweep.count == 1) return {sweep.lambda_min};
    for (int k = 0; k < sweep.count; ++k) {
        double s = static_cast<double>(k) / (sweep.count - 1);
        if (sweep.log_spaced)
            out.push_back(sweep.lambda_min *
                          std::pow(sweep.lambda_max / sweep.lambda_min, s));
        else
            out.push_back(sweep.lambda_min + s * (sweep.lambda_max - sweep.lambda_min));
    }
    out.front() = sweep.lambda_min;
    out.back() = sweep.lambda_max;
    return out;
}

VortexConfiguration RunConfig::vortex_configuration(int n) const {
    if (static_cast<int>(vortices.size()) > n)
        throw ConfigError("'vortices' lists more indices than the algebra rank");
    VortexConfiguration vc;
    vc.points = vortices;
    vc.points.resize(n);
    vc.reduce_to_cell(grid());
    return vc;
}

std::string RunConfig::resolved_text() const {
    json j;
    if (!matrix.empty())
        j["matrix"] = matrix;
    else
        j["algebra"] = algebra;
    j["L1"] = L1;
    j["L2"] = L2;
    j["M1"] = M1;
    j["M2"] = M2;
    json varr = json::array();
    for (const auto& lst : vortices) {
        json pl = json::array();
        for (const auto& p : lst) pl.push_back({p.x, p.y, p.multiplicity});
        varr.push_back(pl);
    }
    j["vortices"] = varr;
    if (has_sweep)
        j["sweep"] = {{"lambda_min", sweep.lambda_min},
                      {"lambda_max", sweep.lambda_max},
                      {"count", sweep.count},
                      {"log_spaced", sweep.log_spaced}};
    else
        j["lambda"] = lambda;
    j["sigma"] = resolved_sigma();
    j["g_tol"] = g_tol;
    j["max_iterations"] = max_iterations;
    j["m_min"] = m_min;
    j["seed"] = seed;
    if (seed == "tarantello") j["seed_mu"] = seed_mu;
    j["write_fields"] = write_fields;
    return j.dump(2);
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be an object");
    require_keys(j,
                 {"algebra", "matrix", "L1", "L2", "M1", "M2", "vortices", "lambda", "sweep",
                  "sigma", "g_tol", "max_iterations", "m_min", "seed", "seed_mu",
                  "write_fields"},
                 "config");

    RunConfig cfg;
    try {
        if (j.contains("algebra")) cfg.algebra = j.at("algebra").get<std::string>();
        if (j.contains("matrix"))
            cfg.matrix = j.at("matrix").get<std::vector<std::vector<long long>>>();
        cfg.L1 = get_positive(j, "L1", cfg.L1);
        cfg.L2 = get_positive(j, "L2", cfg.L2);
        if (j.contains("M1")) cfg.M1 = j.at("M1").get<int>();
        if (j.contains("M2")) cfg.M2 = j.at("M2").get<int>();
        if (j.contains("vortices")) cfg.vortices = parse_vortices(j.at("vortices"));
        if (j.contains("sigma")) {
            cfg.sigma = j.at("sigma").get<double>();
            if (cfg.sigma < 0.0) throw ConfigError("'sigma' must be >= 0 (0 = default)");
        }
        if (j.contains("g_tol")) cfg.g_tol = get_positive(j, "g_tol", cfg.g_tol);
        if (j.contains("max_iterations")) {
            cfg.max_iterations = j.at("max_iterations").get<long>();
            if (cfg.max_iterations < 1) throw ConfigError("'max_iterations' must be >= 1");
        }
        if (j.contains("m_min")) {
            cfg.m_min = j.at("m_min").get<double>();
            if (cfg.m_min < 0.0) throw ConfigError("'m_min' must be >= 0");
        }
        if (j.contains("seed")) {
            cfg.seed = j.at("seed").get<std::string>();
            if (cfg.seed != "zero" && cfg.seed != "tarantello")
                throw ConfigError("'seed' must be \"zero\" or \"tarantello\"");
        }
        if (j.contains("seed_mu")) {
            cfg.seed_mu = j.at("seed_mu").get<double>();
            if (cfg.seed_mu < 0.0) throw ConfigError("'seed_mu' must be >= 0 (0 = default)");
        }
        if (j.contains("write_fields")) cfg.write_fields = j.at("write_fields").get<bool>();

        if (j.contains("lambda") && j.contains("sweep"))
            throw ConfigError("give either 'lambda' or 'sweep', not both");
        if (j.contains("lambda")) cfg.lambda = get_positive(j, "lambda", 0.0);
        if (j.contains("sweep")) {
            const json& s = j.at("sweep");
            require_keys(s, {"lambda_min", "lambda_max", "count", "log_spaced"}, "'sweep'");
            cfg.sweep.lambda_min = get_positive(s, "lambda_min", 0.0);
            cfg.sweep.lambda_max = get_positive(s, "lambda_max", 0.0);
            cfg.sweep.count = s.at("count").get<int>();
            if (s.contains("log_spaced")) cfg.sweep.log_spaced = s.at("log_spaced").get<bool>();
            if (cfg.sweep.count < 1) throw ConfigError("'sweep.count' must be >= 1");
            if (cfg.sweep.lambda_max < cfg.sweep.lambda_min)
                throw ConfigError("'sweep.lambda_max' must be >= 'sweep.lambda_min'");
            cfg.has_sweep = true;
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }

    cfg.grid();          // validates sides and parity
    cfg.algebra_spec();  // validates the algebra string / matrix shape
    if (!cfg.has_sweep && !(cfg.lambda > 0.0))
        throw ConfigError("'lambda' must be positive (or give a 'sweep' block)");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace cshv
