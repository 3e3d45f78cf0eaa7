#pragma once

#include "acs/dataset.hpp"
#include "acs/screen.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace acs {

/// Synthetic response families (formula indices 1-based, code 0-based):
///   a: y = b1*x1 + b2*x2 + ... + b8*x8 + e
///   b: y = b1*x1 + b2*x4 + b3*x7 + b4*x10 + e
///   c: y = exp(b1*x1 + b2*x4 + b3*x7 + b4*x10 + e)
///   d: y = b1*x1 + b2*x4 + exp(|b3|*x7 + |b4|*x10) + e
///   e: y = b1*x1 + b2*x4^2 + b3*1{x7>0} + b4*|x10| + e
///   f: y = 2*b1*x1*x2 + 2*b2*1{x12>0} + 3*b3*x22 + e
/// with e ~ N(0,1) drawn fresh per row.
enum class Model { a, b, c, d, e, f };

/// Design law: identity = i.i.d. standard normals; ar = lag-1
/// autoregression with carry 0.5, giving corr(x_j, x_r) = 0.5^|j-r|.
enum class CovKind { identity, ar };

Model parse_model(const std::string& name); // "a".."f"
CovKind parse_cov(const std::string& name); // "identity" | "ar"
std::string to_string(Model model);
std::string to_string(CovKind cov);

/// 0-based indices of the features that truly drive the response.
std::vector<Eigen::Index> active_set(Model model);

/// How many generated coefficients the model consumes (f shares three
/// coefficients across its four active features).
Eigen::Index coefficient_count(Model model);

/// Smallest feature count the model's formula can run on.
Eigen::Index required_features(Model model);

/// Design family used in the reference experiments: identity for model
/// a, autoregressive for the rest.
CovKind default_cov(Model model);

/// Complete description of one synthetic screening study.
struct SimConfig {
    Model model = Model::a;
    Eigen::Index N = 0;      // rows per repetition
    Eigen::Index p = 0;      // features
    CovKind cov = CovKind::identity;
    int T = 1;               // repetitions
    int m = 1;               // segments per repetition
    std::string measure = "pearson";
    double rho = 0.8;        // oracle-threshold scale, in (0, 1]
    Eigen::Index top_k = 0;  // 0 = oracle-threshold rule; >0 keeps the k strongest
    int R = 3;               // random partitions for racs
    std::uint64_t seed = 0;
};

/// Throws DataError when the configuration cannot run as stated.
void validate(const SimConfig& cfg);

/// N x p design matrix under the requested covariance family. The ar
/// family uses the recursion x_1 = e_1, x_j = 0.5 x_{j-1} + sqrt(0.75) e_j
/// so the population correlation is exactly 0.5^|j-r| at O(N p) cost.
Eigen::MatrixXd gen_design(Eigen::Index n_rows, Eigen::Index n_features, CovKind cov,
                           std::uint64_t seed);

/// Coefficients drawn as sign * (2 + |v|) with sign negative at rate 0.6
/// and v standard normal; every magnitude is at least 2.
Eigen::VectorXd gen_coefficients(Eigen::Index count, std::uint64_t seed);

/// Response with the noise term at zero: the deterministic part of each
/// model formula (for model c, exp of the noiseless exponent).
Eigen::VectorXd response_mean(Model model, const Eigen::MatrixXd& x, const Eigen::VectorXd& betas);

/// Full response draw; noise enters inside the exponential for model c
/// and additively everywhere else.
Eigen::VectorXd gen_response(Model model, const Eigen::MatrixXd& x, const Eigen::VectorXd& betas,
                             std::uint64_t seed);

/// One repetition's data and the coefficients that generated it. All
/// randomness is derived from (cfg.seed, rep_index), so repetitions are
/// independent yet individually reproducible.
struct SimulatedRep {
    Dataset data;
    Eigen::VectorXd betas;
};

SimulatedRep simulate_repetition(const SimConfig& cfg, int rep_index);

/// One cell of the null-data error study.
struct RmseRow {
    std::string measure;
    std::string method; // "SA" | "AC" | "rAC"
    int m = 0;
    double rmse = 0.0;
};

/// Error of each estimation strategy on independent (y, x) standard
/// normals, where the true strength is 0 for every built-in measure.
/// Rows come out measure-major, then SA/AC/rAC, then m in list order;
/// rAC averages R=3 random partitions.
std::vector<RmseRow> run_rmse_experiment(Eigen::Index N, const std::vector<int>& m_list, int T,
                                         const std::vector<std::string>& measures,
                                         std::uint64_t seed, int threads = 0);

/// Screening quality and cost for one method over the completed
/// repetitions of a study.
struct MethodOutcome {
    std::string method; // "sas" | "acs" | "racs"
    MetricsReport metrics;
    double seconds_per_rep = 0.0; // distributed estimate + screen, averaged
};

struct ScreeningExperimentResult {
    std::vector<MethodOutcome> methods;       // caller's method order
    double centralized_seconds_per_rep = 0.0; // full-sample estimate pass
    int completed_reps = 0;
    std::vector<std::string> aborted;         // one logged reason per abandoned repetition
};

/// T repetitions of: simulate data, compute centralized estimates, set
/// the oracle threshold (rho times the weakest truly-active centralized
/// estimate), screen with each requested method against that shared
/// threshold, and pool the metrics. cfg.top_k > 0 switches to rank
/// screening and skips the centralized pass. A repetition whose oracle
/// threshold is degenerate (flagged active feature, or a zero floor) is
/// aborted and logged rather than failing the study.
ScreeningExperimentResult run_screening_experiment(
    const SimConfig& cfg, const std::vector<std::string>& methods = {"sas", "acs", "racs"},
    int threads = 0);

} // namespace acs
