// cshv: doubly periodic Chern-Simons-Higgs vortex solver, command line driver.
//
// Exit codes: 0 ok, 1 internal error, 2 config/parse error,
// 3 necessary condition violated, 4 inadmissible coupling (too small),
// 5 solver did not converge.

#include "cshv/cartan.hpp"
#include "cshv/config.hpp"
#include "cshv/constraints.hpp"
#include "cshv/diagnostics.hpp"
#include "cshv/errors.hpp"
#include "cshv/minimize.hpp"
#include "cshv/torus.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace cshv;

namespace {

constexpr int kOk = 0;
constexpr int kInternal = 1;
constexpr int kParse = 2;
constexpr int kNecessary = 3;
constexpr int kInadmissible = 4;
constexpr int kNoConvergence = 5;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& text, const std::string& out_dir, const std::string& name) {
    std::cout << text;
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::ofstream f(fs::path(out_dir) / name);
        f << text;
    }
}

int run_catalog(const std::vector<std::string>& names, const std::string& out_dir) {
    std::vector<AlgebraSpec> specs;
    if (names.empty()) {
        for (int r = 1; r <= 10; ++r) specs.push_back(AlgebraSpec::of(Family::A, r));
        for (int r = 2; r <= 10; ++r) specs.push_back(AlgebraSpec::of(Family::B, r));
        for (int r = 2; r <= 10; ++r) specs.push_back(AlgebraSpec::of(Family::C, r));
        for (int r = 3; r <= 10; ++r) specs.push_back(AlgebraSpec::of(Family::D, r));
        for (int r = 6; r <= 8; ++r) specs.push_back(AlgebraSpec::of(Family::E, r));
        specs.push_back(AlgebraSpec::of(Family::F, 4));
        specs.push_back(AlgebraSpec::of(Family::G, 2));
    } else {
        for (const auto& s : names) {
            RunConfig c;
            c.algebra = s;
            specs.push_back(c.algebra_spec());
        }
    }
    std::ostringstream out;
    bool all_pass = true;
    for (const auto& spec : specs) {
        CartanData data = make_cartan_data(spec);
        ValidationReport rep = validate(data);
        all_pass = all_pass && rep.all_pass();
        out << "=== " << spec.name() << " ===\n" << rep.to_text() << "\n";
    }
    emit(out.str(), out_dir, "catalog.txt");
    return all_pass ? kOk : kInternal;
}

int run_check_cartan(const RunConfig& cfg, const std::string& out_dir) {
    CartanData data = make_cartan_data(cfg.algebra_spec());
    ValidationReport rep = validate(data);
    std::ostringstream out;
    out << rep.to_text();
    emit(out.str(), out_dir, "check_cartan.txt");
    return rep.all_pass() ? kOk : kInadmissible;
}

// Standalone constraint solve: coefficients given directly in the config.
int run_constraints(const std::string& path, const std::string& method,
                    const std::string& out_dir) {
    nlohmann::json j = nlohmann::json::parse(read_file(path), nullptr, true, true);
    RunConfig ac;
    if (j.contains("matrix"))
        ac.matrix = j.at("matrix").get<std::vector<std::vector<long long>>>();
    else
        ac.algebra = j.value("algebra", std::string("A1"));
    CartanData data = make_cartan_data(ac.algebra_spec());

    IntegralCoefficients coeffs;
    coeffs.a = j.at("a").get<std::vector<double>>();
    coeffs.aM = j.at("aM").get<std::vector<std::vector<double>>>();
    std::vector<int> N = j.at("N").get<std::vector<int>>();
    double lambda = j.at("lambda").get<double>();
    double area = j.value("area", 1.0);

    ConstraintInput in =
        make_constraint_input(data, coeffs, vortex_vector_b(data, N), lambda, area);

    std::ostringstream out;
    out.precision(17);
    auto margins = admissible_margins(in);
    out << "admissible: " << (admissible(in) ? "yes" : "no") << "\nmargins:";
    for (double m : margins) out << " " << m;
    out << "\n";
    if (!admissible(in)) {
        emit(out.str(), out_dir, "constraints.txt");
        return kInadmissible;
    }
    ConstraintSolution sol;
    if (method == "squeeze")
        sol = solve_squeeze(in);
    else if (method == "closed-form")
        sol = scalar_closed_form(in);
    else
        sol = solve_homotopy(in);
    out << "t:";
    for (double t : sol.t) out << " " << t;
    out << "\nc:";
    for (double c : sol.c) out << " " << c;
    out << "\nresidual: " << sol.residual << "\niterations: " << sol.iterations << "\n";
    emit(out.str(), out_dir, "constraints.txt");
    return kOk;
}

SolverConfig solver_config(const RunConfig& cfg, double lambda, bool verbose) {
    SolverConfig sc;
    sc.lambda = lambda;
    sc.g_tol = cfg.g_tol;
    sc.max_iterations = cfg.max_iterations;
    sc.m_min = cfg.m_min;
    sc.use_tarantello_seed = cfg.seed == "tarantello";
    sc.seed_mu = cfg.seed_mu;
    sc.verbose = verbose;
    return sc;
}

int status_code(MinimizeStatus s) {
    switch (s) {
        case MinimizeStatus::converged: return kOk;
        case MinimizeStatus::necessary_condition_violated: return kNecessary;
        case MinimizeStatus::lambda_too_small: return kInadmissible;
        default: return kNoConvergence;
    }
}

int run_solve(const RunConfig& cfg, bool verbose, const std::string& out_dir) {
    CartanData data = make_cartan_data(cfg.algebra_spec());
    ProblemSetup p = make_problem(data, cfg.grid(), cfg.vortex_configuration(data.n),
                                  cfg.resolved_sigma());
    double lambda = cfg.lambdas().front();

    NecessaryCheck nec = check_necessary(lambda, data, p.N, cfg.grid().area());
    if (!nec.pass) {
        std::cout << "error: necessary condition violated: lambda " << lambda
                  << " <= lambda0 " << nec.lambda0 << "\n";
        return kNecessary;
    }

    MinimizeResult res = minimize(p, solver_config(cfg, lambda, verbose));
    std::ostringstream out;
    out << "# resolved config\n" << cfg.resolved_text() << "\n\n";
    if (res.status == MinimizeStatus::converged) {
        out << make_report(p, res).to_text();
    } else {
        out << "status: " << to_string(res.status) << "\niterations: " << res.iterations
            << "\ngrad_norm: " << res.grad_norm << "\n";
    }
    emit(out.str(), out_dir, "solve.txt");

    if (cfg.write_fields && res.status == MinimizeStatus::converged && !out_dir.empty()) {
        for (int i = 0; i < p.n(); ++i) {
            write_field_csv(res.v[i],
                            (fs::path(out_dir) / ("v_" + std::to_string(i) + ".csv")).string());
            write_field_csv(p.bg.u0[i],
                            (fs::path(out_dir) / ("u0_" + std::to_string(i) + ".csv")).string());
        }
    }
    return status_code(res.status);
}

int run_sweep(const RunConfig& cfg, bool verbose, const std::string& out_dir) {
    CartanData data = make_cartan_data(cfg.algebra_spec());
    ProblemSetup p = make_problem(data, cfg.grid(), cfg.vortex_configuration(data.n),
                                  cfg.resolved_sigma());
    auto sweep = asymptotic_sweep(p, cfg.lambdas(), solver_config(cfg, 0.0, verbose));
    std::ostringstream out;
    out << "# resolved config\n";
    std::istringstream conf(cfg.resolved_text());
    for (std::string line; std::getline(conf, line);) out << "# " << line << "\n";
    out << sweep_csv(sweep, p.n());
    emit(out.str(), out_dir, "sweep.csv");
    for (const auto& pt : sweep)
        if (pt.status != MinimizeStatus::converged) return status_code(pt.status);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"doubly periodic non-Abelian Chern-Simons-Higgs vortex solver"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir;
    bool verbose = false;
    app.add_option("--out", out_dir, "directory for report artifacts");
    app.add_flag("--verbose", verbose, "per-iteration progress on stderr");

    auto* catalog = app.add_subcommand("catalog", "validate Cartan data for standard types");
    std::vector<std::string> names;
    catalog->add_option("types", names, "types like A3 G2 (default: full catalog)");

    auto* check = app.add_subcommand("check-cartan", "validate the configured matrix");
    check->add_option("--config", config_path, "config file")->required();

    auto* constraints = app.add_subcommand("constraints", "solve the constraint system");
    std::string method = "homotopy";
    constraints->add_option("--config", config_path, "config with a, aM, N, lambda")->required();
    constraints->add_option("--method", method, "homotopy | squeeze | closed-form");

    auto* solve = app.add_subcommand("solve", "minimize at one coupling");
    solve->add_option("--config", config_path, "config file")->required();

    auto* sweep = app.add_subcommand("sweep", "solve over a coupling sweep, emit CSV");
    sweep->add_option("--config", config_path, "config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int r = app.exit(e);
        return r == 0 ? kOk : kParse;
    }

    try {
        if (catalog->parsed()) return run_catalog(names, out_dir);
        if (check->parsed()) return run_check_cartan(load_config(config_path), out_dir);
        if (constraints->parsed()) return run_constraints(config_path, method, out_dir);
        if (solve->parsed()) return run_solve(load_config(config_path), verbose, out_dir);
        if (sweep->parsed()) return run_sweep(load_config(config_path), verbose, out_dir);
    } catch (const ConfigError& e) {
        std::cout << "error: config: " << e.what() << "\n";
        return kParse;
    } catch (const nlohmann::json::exception& e) {
        std::cout << "error: config: " << e.what() << "\n";
        return kParse;
    } catch (const InfeasibilityError& e) {
        std::cout << "error: inadmissible: " << e.what() << "\n";
        return kInadmissible;
    } catch (const SolverError& e) {
        std::cout << "error: no convergence: " << e.what() << "\n";
        return kNoConvergence;
    } catch (const std::exception& e) {
        std::cout << "error: internal: " << e.what() << "\n";
        return kInternal;
    }
    return kParse;
}
