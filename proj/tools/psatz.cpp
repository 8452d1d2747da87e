#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

#include <psatz/psatz.hpp>

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitFloor = 3;
constexpr int kExitBudget = 4;

using psatz::Json;
using psatz::Rational;

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    Json j;
    in >> j;
    return j;
}

void emit(const Json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write file: " + out_path);
        out << j.dump(2) << "\n";
    }
}

Json make_manifest(const std::string& subcommand,
                   const std::vector<std::string>& inputs, const Json& config,
                   double seconds, int exit_code) {
    Json m;
    m["subcommand"] = subcommand;
    m["inputs"] = inputs;
    m["config"] = config;
    m["version"] = kVersion;
    m["tolerances"] = psatz::tolerances_to_json(psatz::conic::Tolerances{});
    m["timing_seconds"] = psatz::numeric(seconds);
    m["exit_code"] = exit_code;
    return m;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
            .count();
    }
};

int cmd_reduce(const std::string& pop_file, const std::string& gamma_str,
               const std::string& out_path) {
    Timer timer;
    psatz::PopInstance pop;
    Rational gamma;
    try {
        pop = psatz::pop_from_json(load_json(pop_file));
        gamma = psatz::parse_rational(gamma_str);
    } catch (const std::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    }
    psatz::PopConstants k = psatz::compute_constants(pop);
    psatz::ReducedForm rf;
    try {
        rf = psatz::build_f_gamma(pop, k, gamma);
    } catch (const std::domain_error& e) {
        std::cerr << "gamma=" << gamma_str << " rejected: " << e.what()
                  << " (floor " << psatz::to_string(psatz::gamma_floor(pop, k))
                  << ")\n";
        return kExitFloor;
    }
    Json config;
    config["gamma"] = gamma_str;
    Json out;
    out["manifest"] =
        make_manifest("reduce", {pop_file}, config, timer.seconds(), kExitOk);
    out["result"] = psatz::reduced_form_to_json(rf);
    emit(out, out_path);
    return kExitOk;
}

int cmd_certify(const std::string& poly_file, const std::string& cone, int r,
                long budget_terms, bool budget_fatal,
                const std::string& out_path) {
    Timer timer;
    psatz::Polynomial p;
    try {
        p = psatz::poly_from_json(load_json(poly_file));
    } catch (const std::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    }
    psatz::CertifyResult res;
    try {
        if (cone == "polya") {
            res = psatz::polya_certify(p, r, budget_terms);
        } else if (cone == "reznick") {
            res = psatz::reznick_certify(p, r);
        } else if (cone == "artin") {
            res = psatz::artin_certify(p, r);
        } else if (cone == "dsos" || cone == "sdsos") {
            res = psatz::dsos_certify(p, r, cone == "sdsos");
        } else {
            std::cerr << "unknown cone: " << cone << "\n";
            return kExitParse;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitParse;
    }
    int code = kExitOk;
    if (budget_fatal && res.status == psatz::CertStatus::BudgetExceeded)
        code = kExitBudget;
    Json config;
    config["cone"] = cone;
    config["r"] = r;
    config["budget_terms"] = budget_terms;
    Json out;
    out["manifest"] =
        make_manifest("certify", {poly_file}, config, timer.seconds(), code);
    out["result"] = psatz::certify_result_to_json(res);
    emit(out, out_path);
    return code;
}

int cmd_solve(const std::string& pop_file, const std::string& method_str,
              int rmin, int rmax, const std::string& epsilon_str,
              const std::string& bracket_str, bool with_oracle,
              long budget_terms, std::uint64_t seed,
              const std::string& out_path) {
    Timer timer;
    psatz::PopInstance pop;
    psatz::HierarchyConfig cfg;
    try {
        pop = psatz::pop_from_json(load_json(pop_file));
        auto method = psatz::method_from_string(method_str);
        if (!method) throw std::invalid_argument("unknown method: " + method_str);
        cfg.method = *method;
        cfg.r_min = rmin;
        cfg.r_max = rmax;
        cfg.epsilon = psatz::parse_rational(epsilon_str);
        if (cfg.epsilon <= 0)
            throw std::invalid_argument("epsilon must be positive");
        cfg.polya_term_budget = budget_terms;
        if (!bracket_str.empty()) {
            auto comma = bracket_str.find(',');
            if (comma == std::string::npos)
                throw std::invalid_argument("--bracket expects L,U");
            cfg.brackets = {psatz::parse_rational(bracket_str.substr(0, comma)),
                            psatz::parse_rational(bracket_str.substr(comma + 1))};
        }
    } catch (const std::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    }
    psatz::HierarchyResult hr = psatz::run_hierarchy(pop, cfg);
    Json config;
    config["method"] = method_str;
    config["r_min"] = rmin;
    config["r_max"] = rmax;
    config["epsilon"] = psatz::to_string(cfg.epsilon);
    if (cfg.brackets) config["bracket"] = bracket_str;
    config["seed"] = seed;
    Json out;
    out["manifest"] =
        make_manifest("solve", {pop_file}, config, timer.seconds(), kExitOk);
    out["result"] = psatz::hierarchy_result_to_json(hr);
    if (with_oracle && pop.nvars() <= 3) {
        out["oracle"] =
            psatz::oracle_report_to_json(psatz::oracle::grid_minimize(pop));
    }
    emit(out, out_path);
    return kExitOk;
}

int cmd_bound(const std::string& poly_file, const std::string& lambda_str,
              bool even, const std::string& pop_file,
              const std::string& gamma_str, int r0,
              const std::string& out_path) {
    Timer timer;
    Json result;
    std::vector<std::string> inputs;
    Json config;
    try {
        if (!pop_file.empty()) {
            psatz::PopInstance pop = psatz::pop_from_json(load_json(pop_file));
            psatz::PopConstants k = psatz::compute_constants(pop);
            Rational gamma = psatz::parse_rational(gamma_str);
            result = psatz::bound_report_to_json(
                psatz::r_hat_bound(pop, k, gamma, r0));
            inputs = {pop_file};
            config["gamma"] = gamma_str;
            config["r0"] = r0;
        } else {
            psatz::Polynomial p = psatz::poly_from_json(load_json(poly_file));
            Rational lambda = psatz::parse_rational(lambda_str);
            psatz::PolyaBoundReport rep =
                even ? psatz::even_form_nbar(p, lambda)
                     : psatz::powers_reznick_nbar(p, lambda);
            result = psatz::bound_report_to_json(rep);
            inputs = {poly_file};
            config["lambda"] = lambda_str;
            config["even"] = even;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
    Json out;
    out["manifest"] =
        make_manifest("bound", inputs, config, timer.seconds(), kExitOk);
    out["result"] = result;
    emit(out, out_path);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lower bounds for polynomial optimization via global "
                 "positivity certificates"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    long default_budget = psatz::polya_term_budget();

    auto* reduce = app.add_subcommand(
        "reduce", "Build the positivity-reduction form for a POP and gamma");
    std::string r_pop, r_gamma = "0", r_out;
    reduce->add_option("--pop", r_pop, "POP JSON file")->required();
    reduce->add_option("--gamma", r_gamma, "candidate lower bound (rational)");
    reduce->add_option("--out", r_out, "output file (default stdout)");

    auto* certify = app.add_subcommand(
        "certify", "Test cone membership of a polynomial at level r");
    std::string c_poly, c_cone, c_out;
    int c_r = 1;
    long c_budget = default_budget;
    bool c_budget_fatal = false;
    certify->add_option("--poly", c_poly, "polynomial JSON file")->required();
    certify->add_option("--cone", c_cone,
                        "polya | reznick | artin | dsos | sdsos")
        ->required();
    certify->add_option("--r", c_r, "hierarchy level");
    certify->add_option("--budget-terms", c_budget,
                        "expansion term budget (env PSATZ_BUDGET_TERMS)");
    certify->add_flag("--budget-fatal", c_budget_fatal,
                      "exit 4 on budget-exceeded");
    certify->add_option("--out", c_out, "output file (default stdout)");

    auto* solve = app.add_subcommand(
        "solve", "Run a hierarchy with bisection on gamma");
    std::string s_pop, s_method = "reznick", s_eps = "1/100", s_bracket, s_out;
    int s_rmin = 1, s_rmax = 1;
    bool s_oracle = false;
    long s_budget = default_budget;
    std::uint64_t s_seed = 0;
    solve->add_option("--pop", s_pop, "POP JSON file")->required();
    solve->add_option("--method", s_method,
                      "polya | reznick | artin | dsos | sdsos");
    solve->add_option("--rmin", s_rmin, "first level");
    solve->add_option("--rmax", s_rmax, "last level");
    solve->add_option("--epsilon", s_eps, "bisection accuracy (rational)");
    solve->add_option("--bracket", s_bracket, "L,U override (rationals)");
    solve->add_flag("--oracle", s_oracle, "attach grid-oracle comparison");
    solve->add_option("--budget-terms", s_budget, "expansion term budget");
    solve->add_option("--seed", s_seed, "oracle sampling seed");
    solve->add_option("--out", s_out, "output file (default stdout)");

    auto* bound = app.add_subcommand(
        "bound", "Exponent-bound reports for positive forms");
    std::string b_poly, b_lambda = "1", b_pop, b_gamma = "0", b_out;
    bool b_even = false;
    int b_r0 = 1;
    bound->add_option("--poly", b_poly, "form JSON file");
    bound->add_option("--lambda", b_lambda,
                      "positive lower bound on the simplex/sphere minimum");
    bound->add_flag("--even", b_even,
                    "treat input as an even form (halve exponents)");
    bound->add_option("--pop", b_pop, "POP JSON file (level estimate mode)");
    bound->add_option("--gamma", b_gamma, "gamma for the level estimate");
    bound->add_option("--r0", b_r0, "caller-estimated starting level");
    bound->add_option("--out", b_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitParse;
    }

    try {
        if (reduce->parsed()) return cmd_reduce(r_pop, r_gamma, r_out);
        if (certify->parsed())
            return cmd_certify(c_poly, c_cone, c_r, c_budget, c_budget_fatal,
                               c_out);
        if (solve->parsed())
            return cmd_solve(s_pop, s_method, s_rmin, s_rmax, s_eps, s_bracket,
                             s_oracle, s_budget, s_seed, s_out);
        if (bound->parsed())
            return cmd_bound(b_poly, b_lambda, b_even, b_pop, b_gamma, b_r0,
                             b_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitParse;
}
