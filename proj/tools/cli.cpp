#include "cli.hpp"

#include "afcec/acagmm.hpp"
#include "afcec/engine.hpp"
#include "afcec/errors.hpp"
#include "afcec/generators.hpp"
#include "afcec/io.hpp"
#include "afcec/selection.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

namespace afcec::cli {

namespace {

struct FitOptions {
    std::string input;
    std::size_t k = 5;
    std::string family = "quadratic";
    double epsilon = 1e-4;
    double deletion_fraction = 0.01;
    std::size_t restarts = 1;
    std::uint64_t seed = 0;
    std::string init = "random";
    std::size_t max_iters = 200;
    std::string ll_mode = "mixture";
    std::string output_model;
    std::string output_plot;
    std::size_t k_max = 10;
};

struct GenerateOptions {
    std::string kind = "circle";
    std::size_t n = 1000;
    double noise = 0.05;
    std::uint64_t seed = 0;
    std::string out;
};

struct AcaOptions {
    std::string a_grid = "0.25,0.5,1,2";
    std::string sigma_grid = "0.5,1/0.25,0.5";
    double box = 5.0;
    int n = 500;
};

void add_engine_flags(CLI::App& cmd, FitOptions& o) {
    cmd.add_option("--input", o.input, "CSV of points, one per row")->required();
    cmd.add_option("--family", o.family, "linear|quadratic|cubic")->capture_default_str();
    cmd.add_option("--epsilon", o.epsilon, "stop when the cost improves by less than this")->capture_default_str();
    cmd.add_option("--deletion-fraction", o.deletion_fraction, "minimum cluster share")->capture_default_str();
    cmd.add_option("--restarts", o.restarts, "independent seeded runs; best cost wins")->capture_default_str();
    cmd.add_option("--seed", o.seed)->capture_default_str();
    cmd.add_option("--init", o.init, "random|kmeanspp")->capture_default_str();
    cmd.add_option("--max-iters", o.max_iters)->capture_default_str();
    cmd.add_option("--ll-mode", o.ll_mode, "mixture|max")->capture_default_str();
}

std::size_t restart_threads() {
    const char* env = std::getenv("AFCEC_THREADS");
    if (env == nullptr || *env == '\0') return 0;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 0) throw InvalidConfig("AFCEC_THREADS must be a non-negative integer");
    return static_cast<std::size_t>(v);
}

EngineConfig engine_config(const FitOptions& o, std::size_t k, std::size_t d) {
    EngineConfig cfg;
    cfg.k_init = k;
    cfg.family = std::make_shared<const FunctionFamily>(builtin_family(parse_family_kind(o.family), d < 2 ? 1 : d - 1));
    cfg.epsilon = o.epsilon;
    cfg.deletion_fraction = o.deletion_fraction;
    cfg.max_iters = o.max_iters;
    cfg.seed = o.seed;
    cfg.init = parse_init_method(o.init);
    return cfg;
}

void check_engine_flags(const FitOptions& o) {
    parse_family_kind(o.family);
    parse_init_method(o.init);
    parse_likelihood_mode(o.ll_mode);
    if (o.restarts < 1) throw InvalidConfig("--restarts must be at least 1");
    if (!(o.epsilon > 0.0)) throw InvalidConfig("--epsilon must be positive");
    if (!(o.deletion_fraction >= 0.0 && o.deletion_fraction < 1.0)) {
        throw InvalidConfig("--deletion-fraction must lie in [0, 1)");
    }
    if (o.max_iters < 1) throw InvalidConfig("--max-iters must be at least 1");
}

int cmd_fit(const FitOptions& o, std::ostream& out, std::ostream& err) {
    if (o.k < 1) throw InvalidConfig("--k must be at least 1");
    check_engine_flags(o);
    const auto threads = restart_threads();
    const Dataset x = load_csv(o.input);
    const auto cfg = engine_config(o, o.k, x.dim());
    cfg.validate(x.size(), x.dim());

    const auto result = fit_restarts(x, cfg, o.restarts, threads);
    const auto& model = result.best;
    const auto s = score(x, model, parse_likelihood_mode(o.ll_mode));
    err << "fit: k " << o.k << " -> " << model.k() << " after " << model.iterations << " iterations (best seed "
        << model.seed << ")\n";

    if (!o.output_model.empty()) save_model(model, o.output_model);
    if (!o.output_plot.empty()) export_plot_data(x, model, o.output_plot);

    nlohmann::json j;
    j["cost"] = model.cost();
    j["loglik"] = s.loglik;
    j["bic"] = s.bic;
    j["aic"] = s.aic;
    j["n_params"] = s.n_params;
    j["k_final"] = model.k();
    j["iterations"] = model.iterations;
    j["converged"] = model.converged;
    j["seed"] = model.seed;
    out << j.dump() << '\n';
    return kExitOk;
}

int cmd_sweep(const FitOptions& o, std::ostream& out, std::ostream& err) {
    if (o.k_max < 1) throw InvalidConfig("--k-max must be at least 1");
    check_engine_flags(o);
    const auto threads = restart_threads();
    const Dataset x = load_csv(o.input);
    const auto mode = parse_likelihood_mode(o.ll_mode);
    engine_config(o, o.k_max, x.dim()).validate(x.size(), x.dim());

    out << "k,k_final,loglik,n_params,bic,aic\n";
    for (std::size_t k = 1; k <= o.k_max; ++k) {
        const auto cfg = engine_config(o, k, x.dim());
        try {
            const auto result = fit_restarts(x, cfg, o.restarts, threads);
            const auto s = score(x, result.best, mode);
            out << k << ',' << result.best.k() << ',' << format_double(s.loglik) << ',' << s.n_params << ','
                << format_double(s.bic) << ',' << format_double(s.aic) << '\n';
        } catch (const AllClustersDegenerate& e) {
            err << "sweep: k=" << k << " failed: " << e.what() << '\n';
            out << k << ",,nan,,nan,nan\n";
        }
    }
    return kExitOk;
}

int cmd_generate(const GenerateOptions& o, std::ostream& out, std::ostream& err) {
    GeneratorSpec spec;
    spec.kind = parse_generator_kind(o.kind);
    spec.n = o.n;
    spec.noise_sigma = o.noise;
    spec.seed = o.seed;
    const Dataset x = generate(spec);
    if (o.out.empty()) {
        write_csv(x, out);
    } else {
        save_csv(x, o.out);
        err << "generate: wrote " << x.size() << " points to " << o.out << '\n';
    }
    return kExitOk;
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(cell, &used);
            if (used != cell.size()) throw std::invalid_argument(cell);
            values.push_back(v);
        } catch (const std::exception&) {
            throw InvalidConfig(std::string(flag) + ": '" + cell + "' is not a number");
        }
    }
    if (values.empty()) throw InvalidConfig(std::string(flag) + " is empty");
    return values;
}

int cmd_acagmm_check(const AcaOptions& o, std::ostream& out, std::ostream&) {
    if (o.n < 2 || o.n % 2 != 0) throw InvalidConfig("--n must be a positive even number of panels");
    if (!(o.box > 0.0)) throw InvalidConfig("--box must be positive");
    const auto a_grid = parse_list(o.a_grid, "--a-grid");
    std::vector<double> s1_grid;
    std::vector<double> s2_grid;
    if (const auto slash = o.sigma_grid.find('/'); slash != std::string::npos) {
        s1_grid = parse_list(o.sigma_grid.substr(0, slash), "--sigma-grid");
        s2_grid = parse_list(o.sigma_grid.substr(slash + 1), "--sigma-grid");
    } else {
        s1_grid = parse_list(o.sigma_grid, "--sigma-grid");
        s2_grid = s1_grid;
    }

    const auto rows = acagmm::normalization_table(a_grid, s1_grid, s2_grid, o.box, o.n);
    out << "a,sigma1,sigma2,raw,corrected,fold_mass,unreachable_mass,excluded\n";
    for (const auto& r : rows) {
        const bool excluded = !(r.fold_mass < acagmm::kFoldMassLimit);
        out << format_double(r.a) << ',' << format_double(r.sigma1) << ',' << format_double(r.sigma2) << ','
            << format_double(r.raw_integral) << ',' << format_double(r.corrected_integral) << ','
            << format_double(r.fold_mass) << ',' << format_double(r.unreachable_mass) << ',' << (excluded ? 1 : 0)
            << '\n';
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"active-function cross-entropy clustering", "afcec"};
    app.require_subcommand(1);

    FitOptions fit_opts;
    auto* fit = app.add_subcommand("fit", "cluster a CSV and print the score as JSON");
    add_engine_flags(*fit, fit_opts);
    fit->add_option("--k", fit_opts.k, "initial number of clusters")->capture_default_str();
    fit->add_option("--output-model", fit_opts.output_model, "write the model as JSON");
    fit->add_option("--output-plot", fit_opts.output_plot, "write points and fitted curves as CSV");

    FitOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "fit k = 1..K and print LL/BIC/AIC per k as CSV");
    add_engine_flags(*sweep, sweep_opts);
    sweep->add_option("--k-max", sweep_opts.k_max, "largest k")->capture_default_str();

    GenerateOptions gen_opts;
    auto* gen = app.add_subcommand("generate", "write a synthetic dataset as CSV");
    gen->add_option("--kind", gen_opts.kind, "circle|spiral|strokes|parametric3d")->capture_default_str();
    gen->add_option("--n", gen_opts.n)->capture_default_str();
    gen->add_option("--noise", gen_opts.noise)->capture_default_str();
    gen->add_option("--seed", gen_opts.seed)->capture_default_str();
    gen->add_option("--out", gen_opts.out, "output path (stdout if omitted)");

    AcaOptions aca_opts;
    auto* aca = app.add_subcommand("acagmm-check", "normalization table of the curved parabola density");
    aca->add_option("--a-grid", aca_opts.a_grid, "comma-separated curvatures")->capture_default_str();
    aca->add_option("--sigma-grid", aca_opts.sigma_grid,
                    "sigma1 list '/' sigma2 list; one list is used for both")
        ->capture_default_str();
    aca->add_option("--box", aca_opts.box, "integrate over [-box, box]^2")->capture_default_str();
    aca->add_option("--n", aca_opts.n, "Simpson panels per axis (even)")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (fit->parsed()) return cmd_fit(fit_opts, out, err);
        if (sweep->parsed()) return cmd_sweep(sweep_opts, out, err);
        if (gen->parsed()) return cmd_generate(gen_opts, out, err);
        return cmd_acagmm_check(aca_opts, out, err);
    } catch (const InvalidConfig& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InvalidSpec& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InvalidConvention& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ParseError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const IoError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const AllClustersDegenerate& e) {
        err << "degenerate fit: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const DegenerateCluster& e) {
        err << "degenerate fit: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDegenerate;
    }
}

}  // namespace afcec::cli
