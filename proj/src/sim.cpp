#include "acs/sim.hpp"

#include "acs/aggregate.hpp"
#include "acs/errors.hpp"
#include "acs/parallel.hpp"
#include "acs/rng.hpp"
#include "acs/stable_sum.hpp"

#include <chrono>
#include <cmath>
#include <cstddef>
#include <utility>

namespace acs {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::string> synthetic_names(Eigen::Index p) {
    std::vector<std::string> names(static_cast<std::size_t>(p));
    for (Eigen::Index j = 0; j < p; ++j)
        names[static_cast<std::size_t>(j)] = "x" + std::to_string(j + 1);
    return names;
}

// Deterministic per-repetition sub-seeds.
constexpr std::uint64_t kDesignTag = 1;
constexpr std::uint64_t kCoefficientTag = 2;
constexpr std::uint64_t kNoiseTag = 3;
constexpr std::uint64_t kPartitionTag = 4;
constexpr std::uint64_t kRacsTag = 5;

// Pre-noise value of each model formula; for model c this is exp's
// argument so the noise can be injected inside the exponential.
Eigen::ArrayXd model_core(Model model, const Eigen::MatrixXd& x, const Eigen::VectorXd& b) {
    const auto col = [&x](Eigen::Index j) { return x.col(j).array(); };
    switch (model) {
    case Model::a:
        return (x.leftCols(8) * b.head(8)).array();
    case Model::b:
    case Model::c:
        return b[0] * col(0) + b[1] * col(3) + b[2] * col(6) + b[3] * col(9);
    case Model::d:
        return b[0] * col(0) + b[1] * col(3) +
               (std::abs(b[2]) * col(6) + std::abs(b[3]) * col(9)).exp();
    case Model::e:
        return b[0] * col(0) + b[1] * col(3).square() +
               b[2] * (col(6) > 0.0).cast<double>() + b[3] * col(9).abs();
    case Model::f:
        return 2.0 * b[0] * col(0) * col(1) + 2.0 * b[1] * (col(11) > 0.0).cast<double>() +
               3.0 * b[2] * col(21);
    }
    throw DataError("unknown model");
}

void check_model_inputs(Model model, const Eigen::MatrixXd& x, const Eigen::VectorXd& betas) {
    if (x.cols() < required_features(model))
        throw DataError("model " + to_string(model) + " needs at least " +
                        std::to_string(required_features(model)) + " features, got " +
                        std::to_string(x.cols()));
    if (betas.size() < coefficient_count(model))
        throw DataError("model " + to_string(model) + " needs " +
                        std::to_string(coefficient_count(model)) + " coefficients, got " +
                        std::to_string(betas.size()));
}

} // namespace

Model parse_model(const std::string& name) {
    if (name.size() == 1 && name[0] >= 'a' && name[0] <= 'f')
        return static_cast<Model>(name[0] - 'a');
    throw DataError("unknown model '" + name + "' (expected a..f)");
}

CovKind parse_cov(const std::string& name) {
    if (name == "identity") return CovKind::identity;
    if (name == "ar") return CovKind::ar;
    throw DataError("unknown covariance family '" + name + "' (expected identity or ar)");
}

std::string to_string(Model model) {
    return std::string(1, static_cast<char>('a' + static_cast<int>(model)));
}

std::string to_string(CovKind cov) { return cov == CovKind::identity ? "identity" : "ar"; }

std::vector<Eigen::Index> active_set(Model model) {
    switch (model) {
    case Model::a:
        return {0, 1, 2, 3, 4, 5, 6, 7};
    case Model::b:
    case Model::c:
    case Model::d:
    case Model::e:
        return {0, 3, 6, 9};
    case Model::f:
        return {0, 1, 11, 21};
    }
    throw DataError("unknown model");
}

Eigen::Index coefficient_count(Model model) {
    switch (model) {
    case Model::a:
        return 8;
    case Model::f:
        return 3;
    default:
        return 4;
    }
}

Eigen::Index required_features(Model model) { return active_set(model).back() + 1; }

CovKind default_cov(Model model) {
    return model == Model::a ? CovKind::identity : CovKind::ar;
}

void validate(const SimConfig& cfg) {
    if (cfg.N < 1 || cfg.p < 1) throw DataError("N and p must be positive");
    if (cfg.T < 1) throw DataError("repetition count must be positive");
    if (cfg.m < 1 || cfg.m > cfg.N)
        throw DataError("segment count must lie in [1, N]");
    if (cfg.R < 1) throw DataError("partition replicate count must be positive");
    if (cfg.p < required_features(cfg.model))
        throw DataError("model " + to_string(cfg.model) + " needs at least " +
                        std::to_string(required_features(cfg.model)) + " features");
    if (cfg.top_k < 0 || cfg.top_k > cfg.p)
        throw DataError("top-k must lie in [0, p]");
    if (cfg.top_k == 0 && !(cfg.rho > 0.0 && cfg.rho <= 1.0))
        throw DataError("rho must lie in (0, 1]");
    builtin_measure(cfg.measure); // rejects unknown names
}

Eigen::MatrixXd gen_design(Eigen::Index n_rows, Eigen::Index n_features, CovKind cov,
                           std::uint64_t seed) {
    if (n_rows < 1 || n_features < 1) throw DataError("design dimensions must be positive");
    Eigen::MatrixXd x(n_rows, n_features);
    Rng rng(seed);
    const double fresh = std::sqrt(0.75);
    for (Eigen::Index i = 0; i < n_rows; ++i) {
        if (cov == CovKind::identity) {
            for (Eigen::Index j = 0; j < n_features; ++j) x(i, j) = rng.normal();
        } else {
            double prev = rng.normal();
            x(i, 0) = prev;
            for (Eigen::Index j = 1; j < n_features; ++j) {
                prev = 0.5 * prev + fresh * rng.normal();
                x(i, j) = prev;
            }
        }
    }
    return x;
}

Eigen::VectorXd gen_coefficients(Eigen::Index count, std::uint64_t seed) {
    if (count < 1) throw DataError("coefficient count must be positive");
    Eigen::VectorXd betas(count);
    Rng rng(seed);
    for (Eigen::Index j = 0; j < count; ++j) {
        const double sign = rng.bernoulli(0.6) ? -1.0 : 1.0;
        betas[j] = sign * (2.0 + std::abs(rng.normal()));
    }
    return betas;
}

Eigen::VectorXd response_mean(Model model, const Eigen::MatrixXd& x,
                              const Eigen::VectorXd& betas) {
    check_model_inputs(model, x, betas);
    Eigen::ArrayXd core = model_core(model, x, betas);
    if (model == Model::c) return core.exp().matrix();
    return core.matrix();
}

Eigen::VectorXd gen_response(Model model, const Eigen::MatrixXd& x, const Eigen::VectorXd& betas,
                             std::uint64_t seed) {
    check_model_inputs(model, x, betas);
    Rng rng(seed);
    Eigen::ArrayXd noise(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) noise[i] = rng.normal();
    Eigen::ArrayXd core = model_core(model, x, betas);
    if (model == Model::c) return (core + noise).exp().matrix();
    return (core + noise).matrix();
}

SimulatedRep simulate_repetition(const SimConfig& cfg, int rep_index) {
    validate(cfg);
    if (rep_index < 0) throw DataError("repetition index must be nonnegative");
    const std::uint64_t rep_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(rep_index));
    SimulatedRep rep;
    Eigen::MatrixXd x = gen_design(cfg.N, cfg.p, cfg.cov, derive_seed(rep_seed, kDesignTag));
    rep.betas = gen_coefficients(coefficient_count(cfg.model), derive_seed(rep_seed, kCoefficientTag));
    Eigen::VectorXd y = gen_response(cfg.model, x, rep.betas, derive_seed(rep_seed, kNoiseTag));
    rep.data = Dataset{std::move(x), std::move(y), synthetic_names(cfg.p)};
    return rep;
}

std::vector<RmseRow> run_rmse_experiment(Eigen::Index N, const std::vector<int>& m_list, int T,
                                         const std::vector<std::string>& measures,
                                         std::uint64_t seed, int threads) {
    if (N < 1) throw DataError("N must be positive");
    if (T < 1) throw DataError("need at least one repetition");
    if (m_list.empty()) throw DataError("no segment counts given");
    if (measures.empty()) throw DataError("no measures given");

    std::vector<MeasureSpec> specs;
    specs.reserve(measures.size());
    for (const std::string& name : measures) specs.push_back(builtin_measure(name));
    for (int m : m_list) {
        if (m < 1 || m > N) throw DataError("segment count must lie in [1, N]");
        for (const MeasureSpec& spec : specs)
            if (N / m < spec.max_degree())
                throw DataError("segments of " + std::to_string(N / m) +
                                " rows are too small for measure '" + spec.name + "'");
    }

    // Combo layout: measure-major, then m, with SA/AC/rAC adjacent.
    const std::size_t n_m = m_list.size();
    const std::size_t combos = specs.size() * n_m * 3;
    std::vector<std::vector<double>> estimates(static_cast<std::size_t>(T),
                                               std::vector<double>(combos, 0.0));

    parallel_for(static_cast<std::size_t>(T), threads, [&](std::size_t t) {
        const std::uint64_t rep_seed = derive_seed(seed, t);
        Dataset ds;
        ds.features = gen_design(N, 1, CovKind::identity, derive_seed(rep_seed, kDesignTag));
        ds.response = gen_design(N, 1, CovKind::identity, derive_seed(rep_seed, kNoiseTag)).col(0);
        ds.feature_names = {"x1"};
        AggregateOptions opts;
        opts.threads = 1;
        std::vector<double>& row = estimates[t];
        for (std::size_t si = 0; si < specs.size(); ++si) {
            for (std::size_t li = 0; li < n_m; ++li) {
                const int m = m_list[li];
                const Partition part = make_partition(N, m, 0, PartitionMode::contiguous);
                const std::size_t base = (si * n_m + li) * 3;
                row[base + 0] = sas_estimate(ds, part, specs[si], opts).values[0];
                row[base + 1] = acs_estimate(ds, part, specs[si], opts).values[0];
                row[base + 2] =
                    racs_estimate(ds, specs[si], m, 3, derive_seed(rep_seed, kRacsTag, li), opts)
                        .values[0];
            }
        }
    });

    static const char* kMethodNames[3] = {"SA", "AC", "rAC"};
    std::vector<RmseRow> rows;
    rows.reserve(combos);
    std::vector<double> column(static_cast<std::size_t>(T));
    for (std::size_t si = 0; si < specs.size(); ++si) {
        for (int method = 0; method < 3; ++method) {
            for (std::size_t li = 0; li < n_m; ++li) {
                const std::size_t c = (si * n_m + li) * 3 + static_cast<std::size_t>(method);
                for (std::size_t t = 0; t < static_cast<std::size_t>(T); ++t)
                    column[t] = estimates[t][c];
                rows.push_back(
                    {specs[si].name, kMethodNames[method], m_list[li], rmse(column, 0.0)});
            }
        }
    }
    return rows;
}

ScreeningExperimentResult run_screening_experiment(const SimConfig& cfg,
                                                   const std::vector<std::string>& methods,
                                                   int threads) {
    validate(cfg);
    if (methods.empty()) throw DataError("no screening methods requested");
    for (const std::string& name : methods)
        if (name != "sas" && name != "acs" && name != "racs")
            throw DataError("unknown screening method '" + name + "'");
    const MeasureSpec spec = builtin_measure(cfg.measure);
    if (cfg.N / cfg.m < spec.max_degree())
        throw DataError("segments of " + std::to_string(cfg.N / cfg.m) +
                        " rows are too small for measure '" + spec.name + "'");
    const std::vector<Eigen::Index> truth = active_set(cfg.model);

    struct RepOutcome {
        bool ok = false;
        std::string reason;
        double central_seconds = 0.0;
        std::vector<double> method_seconds;
        std::vector<ScreenResult> screened;
    };
    std::vector<RepOutcome> reps(static_cast<std::size_t>(cfg.T));

    const int inner_threads = cfg.T == 1 ? threads : 1;
    parallel_for(static_cast<std::size_t>(cfg.T), threads, [&](std::size_t t) {
        RepOutcome& out = reps[t];
        out.method_seconds.assign(methods.size(), 0.0);
        const std::uint64_t rep_seed = derive_seed(cfg.seed, t);
        const SimulatedRep rep = simulate_repetition(cfg, static_cast<int>(t));
        AggregateOptions opts;
        opts.threads = inner_threads;

        double gamma = 0.0;
        if (cfg.top_k == 0) {
            const auto started = Clock::now();
            const EstimateVector central = centralized_estimate(rep.data, spec, opts);
            out.central_seconds = seconds_since(started);
            try {
                gamma = oracle_threshold(central, truth, cfg.rho);
            } catch (const DegeneracyError& err) {
                out.reason = "repetition " + std::to_string(t) + ": " + err.what();
                return;
            }
            if (!(gamma > 0.0)) {
                out.reason = "repetition " + std::to_string(t) +
                             ": oracle threshold is not positive (weakest active estimate is 0)";
                return;
            }
        }

        const Partition part =
            make_partition(cfg.N, cfg.m, derive_seed(rep_seed, kPartitionTag),
                           PartitionMode::contiguous);
        out.screened.resize(methods.size());
        try {
            for (std::size_t k = 0; k < methods.size(); ++k) {
                const auto started = Clock::now();
                EstimateVector est =
                    methods[k] == "sas"   ? sas_estimate(rep.data, part, spec, opts)
                    : methods[k] == "acs" ? acs_estimate(rep.data, part, spec, opts)
                                          : racs_estimate(rep.data, spec, cfg.m, cfg.R,
                                                          derive_seed(rep_seed, kRacsTag), opts);
                out.screened[k] = cfg.top_k > 0 ? top_k_screen(est, cfg.top_k)
                                                : threshold_screen(est, gamma);
                out.method_seconds[k] = seconds_since(started);
            }
        } catch (const DataError& err) { // e.g. top-k larger than the non-degenerate pool
            out.reason = "repetition " + std::to_string(t) + ": " + err.what();
            out.screened.clear();
            return;
        }
        out.ok = true;
    });

    ScreeningExperimentResult result;
    std::vector<std::vector<ScreenResult>> per_method(methods.size());
    StableSum central_time;
    std::vector<StableSum> method_time(methods.size());
    for (RepOutcome& rep : reps) {
        if (!rep.ok) {
            result.aborted.push_back(rep.reason);
            continue;
        }
        ++result.completed_reps;
        central_time.add(rep.central_seconds);
        for (std::size_t k = 0; k < methods.size(); ++k) {
            method_time[k].add(rep.method_seconds[k]);
            per_method[k].push_back(std::move(rep.screened[k]));
        }
    }

    const double completed = static_cast<double>(result.completed_reps);
    result.centralized_seconds_per_rep =
        result.completed_reps > 0 ? central_time.get() / completed : 0.0;
    for (std::size_t k = 0; k < methods.size(); ++k) {
        MethodOutcome outcome;
        outcome.method = methods[k];
        if (result.completed_reps > 0) {
            outcome.metrics = evaluate_repetitions(per_method[k], truth);
            outcome.seconds_per_rep = method_time[k].get() / completed;
        }
        result.methods.push_back(std::move(outcome));
    }
    return result;
}

} // namespace acs
