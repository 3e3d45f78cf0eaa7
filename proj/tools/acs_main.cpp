#include "acs/aggregate.hpp"
#include "acs/dataset.hpp"
#include "acs/errors.hpp"
#include "acs/io.hpp"
#include "acs/measures.hpp"
#include "acs/screen.hpp"
#include "acs/sim.hpp"
#include "acs/version.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Flag-level mistakes: reported on one line, exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const std::size_t comma = csv.find(',', start);
        const std::size_t end = comma == std::string::npos ? csv.size() : comma;
        if (end > start) out.push_back(csv.substr(start, end - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

void require_measure_name(const std::string& name) {
    try {
        acs::builtin_measure(name);
    } catch (const acs::DataError& err) {
        throw UsageError(err.what());
    }
}

struct ScreenFlags {
    std::string input;
    std::string response;
    std::string measure;
    int m = 0;
    double gamma = 0.0;
    Eigen::Index top_k = 0;
    bool use_gamma = false;
    std::string method;
    int R = 3;
    std::uint64_t seed = 1;
    bool naive = false;
    int threads = 0;
    std::string output;
};

int run_screen(const ScreenFlags& f) {
    require_measure_name(f.measure);
    if (f.use_gamma && !(f.gamma > 0.0)) throw UsageError("gamma must be positive");
    if (!f.use_gamma && f.top_k < 1) throw UsageError("top-k must be at least 1");

    const auto t_total = Clock::now();
    const std::string raw = acs::read_file(f.input);
    const acs::Dataset ds = acs::load_csv(f.input, f.response);
    const double load_seconds = seconds_since(t_total);

    const acs::MeasureSpec spec = acs::builtin_measure(f.measure);
    acs::AggregateOptions opts;
    opts.naive = f.naive;
    opts.threads = f.threads;

    const auto t_estimate = Clock::now();
    acs::EstimateVector est;
    if (f.method == "racs") {
        est = acs::racs_estimate(ds, spec, f.m, f.R, f.seed, opts);
    } else {
        const acs::Partition part =
            acs::make_partition(ds, f.m, f.seed, acs::PartitionMode::random_shuffle);
        est = f.method == "sas" ? acs::sas_estimate(ds, part, spec, opts)
                                : acs::acs_estimate(ds, part, spec, opts);
    }
    const double estimate_seconds = seconds_since(t_estimate);

    const auto t_screen = Clock::now();
    const acs::ScreenResult screened =
        f.use_gamma ? acs::threshold_screen(est, f.gamma) : acs::top_k_screen(est, f.top_k);
    const double screen_seconds = seconds_since(t_screen);

    acs::write_file(f.output + "_estimates.csv", acs::estimates_csv(est, ds.feature_names));
    acs::write_file(f.output + "_retained.csv", acs::retained_csv(screened, ds.feature_names));

    acs::RunManifest manifest;
    manifest.command = "screen";
    manifest.flags = {{"input", f.input},
                      {"response", f.response},
                      {"measure", f.measure},
                      {"m", std::to_string(f.m)},
                      {f.use_gamma ? "gamma" : "top_k",
                       f.use_gamma ? acs::format_double(f.gamma) : std::to_string(f.top_k)},
                      {"method", f.method},
                      {"R", std::to_string(f.R)},
                      {"naive", f.naive ? "true" : "false"},
                      {"threads", std::to_string(f.threads)},
                      {"output", f.output}};
    manifest.seed = f.seed;
    manifest.version = acs::kVersion;
    manifest.input_digest = acs::fnv1a_hex(raw);
    manifest.timings_seconds = {{"load", load_seconds},
                                {"estimate", estimate_seconds},
                                {"screen", screen_seconds},
                                {"total", seconds_since(t_total)}};
    acs::write_file(f.output + "_manifest.json", acs::manifest_json(manifest));

    std::cout << "retained " << screened.retained.size() << " of " << ds.n_features()
              << " features (rule " << screened.rule << ", gamma "
              << acs::format_double(screened.gamma) << ") -> " << f.output << "_retained.csv\n";
    for (const std::string& issue : est.issues) std::cout << "note: " << issue << "\n";
    return 0;
}

struct SimulateFlags {
    std::string model;
    Eigen::Index N = 300;
    Eigen::Index p = 60;
    int m = 5;
    int T = 10;
    std::string measure = "pearson";
    double rho = 0.8;
    std::string methods = "sas,acs,racs";
    int R = 3;
    std::uint64_t seed = 1;
    bool full = false;
    int threads = 0;
    std::string output;
};

int run_simulate(const SimulateFlags& f, const CLI::App* cmd) {
    acs::SimConfig cfg;
    try {
        cfg.model = acs::parse_model(f.model);
    } catch (const acs::DataError& err) {
        throw UsageError(err.what());
    }
    cfg.N = f.N;
    cfg.p = f.p;
    cfg.m = f.m;
    cfg.T = f.T;
    if (f.full) {
        // Reference-scale dimensions per model; explicit flags still win.
        struct FullScale {
            Eigen::Index N, p;
            int m;
        };
        static constexpr FullScale kFull[6] = {{1500, 1500, 15}, {1200, 1500, 20},
                                               {2400, 2500, 40}, {3600, 3600, 50},
                                               {4800, 4800, 60}, {10000, 10000, 100}};
        const FullScale& fs = kFull[static_cast<int>(cfg.model)];
        if (!cmd->count("--N")) cfg.N = fs.N;
        if (!cmd->count("--p")) cfg.p = fs.p;
        if (!cmd->count("--m")) cfg.m = fs.m;
        if (!cmd->count("--T")) cfg.T = 100;
    }
    cfg.cov = acs::default_cov(cfg.model);
    cfg.measure = f.measure;
    cfg.rho = f.rho;
    cfg.R = f.R;
    cfg.seed = f.seed;

    const std::vector<std::string> methods = split_list(f.methods);
    try {
        acs::validate(cfg);
        if (methods.empty()) throw acs::DataError("no screening methods requested");
        for (const std::string& name : methods)
            if (name != "sas" && name != "acs" && name != "racs")
                throw acs::DataError("unknown screening method '" + name + "'");
    } catch (const acs::DataError& err) {
        throw UsageError(err.what());
    }

    const auto t_total = Clock::now();
    const acs::ScreeningExperimentResult res =
        acs::run_screening_experiment(cfg, methods, f.threads);
    const double total_seconds = seconds_since(t_total);

    if (res.completed_reps == 0)
        throw acs::DegeneracyError("every repetition aborted; first reason: " +
                                   (res.aborted.empty() ? std::string("none") : res.aborted[0]));

    std::vector<acs::MetricsCsvRow> rows;
    for (const acs::MethodOutcome& outcome : res.methods)
        rows.push_back({cfg.m, cfg.measure, outcome.method, outcome.metrics,
                        outcome.seconds_per_rep, res.centralized_seconds_per_rep});
    acs::write_file(f.output + "_metrics.csv", acs::metrics_csv(rows));

    acs::RunManifest manifest;
    manifest.command = "simulate";
    manifest.flags = {{"model", f.model},
                      {"N", std::to_string(cfg.N)},
                      {"p", std::to_string(cfg.p)},
                      {"m", std::to_string(cfg.m)},
                      {"T", std::to_string(cfg.T)},
                      {"cov", acs::to_string(cfg.cov)},
                      {"measure", cfg.measure},
                      {"rho", acs::format_double(cfg.rho)},
                      {"method", f.methods},
                      {"R", std::to_string(cfg.R)},
                      {"full", f.full ? "true" : "false"},
                      {"threads", std::to_string(f.threads)},
                      {"output", f.output}};
    manifest.seed = cfg.seed;
    manifest.version = acs::kVersion;
    manifest.timings_seconds = {{"centralized_per_rep", res.centralized_seconds_per_rep}};
    for (const acs::MethodOutcome& outcome : res.methods)
        manifest.timings_seconds.push_back({outcome.method + "_per_rep", outcome.seconds_per_rep});
    manifest.timings_seconds.push_back({"total", total_seconds});
    acs::write_file(f.output + "_manifest.json", acs::manifest_json(manifest));

    std::cout << "completed " << res.completed_reps << " of " << cfg.T << " repetitions -> "
              << f.output << "_metrics.csv\n";
    if (!res.aborted.empty())
        std::cout << "note: " << res.aborted.size()
                  << " repetition(s) aborted; first reason: " << res.aborted[0] << "\n";
    return 0;
}

struct RmseFlags {
    Eigen::Index N = 2700;
    std::vector<int> m_list = {45, 90, 180};
    int T = 500;
    std::vector<std::string> measures = {"kendall", "sirs", "dc"};
    std::uint64_t seed = 1;
    int threads = 0;
    std::string output;
};

int run_rmse_bench(const RmseFlags& f) {
    for (const std::string& name : f.measures) require_measure_name(name);

    const auto t_total = Clock::now();
    std::vector<acs::RmseRow> rows;
    try {
        rows = acs::run_rmse_experiment(f.N, f.m_list, f.T, f.measures, f.seed, f.threads);
    } catch (const acs::DataError& err) { // no input data: misconfiguration is a usage error
        throw UsageError(err.what());
    }
    acs::write_file(f.output + "_rmse.csv", acs::rmse_csv(rows));

    std::string m_csv, measures_csv;
    for (std::size_t i = 0; i < f.m_list.size(); ++i)
        m_csv += (i ? "," : "") + std::to_string(f.m_list[i]);
    for (std::size_t i = 0; i < f.measures.size(); ++i)
        measures_csv += (i ? "," : "") + f.measures[i];

    acs::RunManifest manifest;
    manifest.command = "rmse-bench";
    manifest.flags = {{"N", std::to_string(f.N)},
                      {"m_list", m_csv},
                      {"T", std::to_string(f.T)},
                      {"measures", measures_csv},
                      {"threads", std::to_string(f.threads)},
                      {"output", f.output}};
    manifest.seed = f.seed;
    manifest.version = acs::kVersion;
    manifest.timings_seconds = {{"total", seconds_since(t_total)}};
    acs::write_file(f.output + "_manifest.json", acs::manifest_json(manifest));

    std::cout << "wrote " << rows.size() << " rows -> " << f.output << "_rmse.csv\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    const CLI::Range kPositiveInt(1, std::numeric_limits<int>::max());
    const CLI::Range kPositiveIndex(static_cast<Eigen::Index>(1),
                                    std::numeric_limits<Eigen::Index>::max());
    CLI::App app{"distributed correlation screening: estimate per-feature correlation "
                 "strength by aggregating unbiased component statistics across segments"};
    app.set_version_flag("--version", std::string(acs::kVersion));
    app.require_subcommand(1);

    ScreenFlags sf;
    CLI::App* screen = app.add_subcommand("screen", "screen a CSV dataset");
    screen->add_option("--input", sf.input, "input CSV with a header row")->required();
    screen->add_option("--response", sf.response, "response column (name, or 0-based index)")
        ->required();
    screen->add_option("--measure", sf.measure, "pearson|kendall|sirs|dc")->required();
    screen->add_option("--m", sf.m, "segment count")->required()->check(kPositiveInt);
    CLI::Option* gamma_opt =
        screen->add_option("--gamma", sf.gamma, "keep estimates >= gamma (positive)");
    CLI::Option* topk_opt =
        screen->add_option("--top-k", sf.top_k, "keep the k strongest features");
    gamma_opt->excludes(topk_opt);
    topk_opt->excludes(gamma_opt);
    screen->add_option("--method", sf.method, "acs|sas|racs")
        ->required()
        ->check(CLI::IsMember({"acs", "sas", "racs"}));
    screen->add_option("--R", sf.R, "random partitions for racs")->check(kPositiveInt);
    screen->add_option("--seed", sf.seed, "partition seed");
    screen->add_flag("--naive", sf.naive, "force subset-enumeration estimators");
    screen->add_option("--threads", sf.threads, "worker threads (0 = ACS_THREADS env, then cores)");
    screen->add_option("--output", sf.output, "output path prefix")->required();
    screen->callback([&] {
        if (gamma_opt->count() == 0 && topk_opt->count() == 0)
            throw UsageError("exactly one of --gamma or --top-k is required");
        sf.use_gamma = gamma_opt->count() > 0;
        run_screen(sf);
    });

    SimulateFlags mf;
    CLI::App* simulate = app.add_subcommand("simulate", "run a synthetic screening study");
    simulate->add_option("--model", mf.model, "response model a..f")->required();
    simulate->add_option("--N", mf.N, "rows per repetition")->check(kPositiveIndex);
    simulate->add_option("--p", mf.p, "feature count")->check(kPositiveIndex);
    simulate->add_option("--m", mf.m, "segment count")->check(kPositiveInt);
    simulate->add_option("--T", mf.T, "repetitions")->check(kPositiveInt);
    simulate->add_option("--measure", mf.measure, "pearson|kendall|sirs|dc");
    simulate->add_option("--rho", mf.rho, "oracle-threshold scale in (0, 1]");
    simulate->add_option("--method", mf.methods, "comma list from {sas,acs,racs}");
    simulate->add_option("--R", mf.R, "random partitions for racs")->check(kPositiveInt);
    simulate->add_option("--seed", mf.seed, "study seed");
    simulate->add_flag("--full", mf.full, "reference-scale N/p/m/T for the chosen model");
    simulate->add_option("--threads", mf.threads,
                         "worker threads (0 = ACS_THREADS env, then cores)");
    simulate->add_option("--output", mf.output, "output path prefix")->required();
    simulate->callback([&] { run_simulate(mf, simulate); });

    RmseFlags rf;
    CLI::App* bench = app.add_subcommand("rmse-bench", "null-data error study of SA/AC/rAC");
    bench->add_option("--N", rf.N, "rows per repetition")->check(kPositiveIndex);
    bench->add_option("--m-list", rf.m_list, "segment counts")->delimiter(',');
    bench->add_option("--T", rf.T, "repetitions")->check(kPositiveInt);
    bench->add_option("--measures", rf.measures, "comma list of measures")->delimiter(',');
    bench->add_option("--seed", rf.seed, "study seed");
    bench->add_option("--threads", rf.threads, "worker threads (0 = ACS_THREADS env, then cores)");
    bench->add_option("--output", rf.output, "output path prefix")->required();
    bench->callback([&] { run_rmse_bench(rf); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const acs::DegenerateDenominator& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const acs::DegeneracyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const acs::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
