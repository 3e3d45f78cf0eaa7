#include "acs/io.hpp"
#include "acs/sim.hpp"

#include "doctest.h"
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "acs_cli_tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string path_of(const std::string& name) { return (work_dir() / name).string(); }

int run_cli(const std::string& args) {
    const std::string cmd = std::string(ACS_CLI_PATH) + " " + args + " > " +
                            path_of("stdout.txt") + " 2> " + path_of("stderr.txt");
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& name) { return acs::read_file(path_of(name)); }

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        const std::size_t nl = text.find('\n', start);
        const std::size_t end = nl == std::string::npos ? text.size() : nl;
        lines.push_back(text.substr(start, end - start));
        if (nl == std::string::npos) break;
        start = nl + 1;
    }
    return lines;
}

// Column extraction for a simple unquoted CSV line.
std::string field(const std::string& line, int index) {
    std::size_t start = 0;
    for (int i = 0; i < index; ++i) start = line.find(',', start) + 1;
    const std::size_t end = line.find(',', start);
    return line.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

void write_monotone_csv(const std::string& name) {
    std::ofstream out(path_of(name));
    out << "y,x1,x2,x3\n";
    // x1 is strictly monotone with y, so every segment of any partition is
    // fully concordant and scores the exact ceiling of 1/4. x2 and x3 use
    // three values arranged so that every 4-row subset mixes concordant
    // with tied-or-discordant pairs (only three distinct values rules out
    // a strictly increasing 4-subsequence, and no weakly decreasing one
    // exists either); with two segments of four rows the per-segment mean
    // stays strictly between 0 and 1/2 whatever the partition draws, which
    // keeps both scores strictly below the ceiling.
    out << "1.0,0.1,1.0,1.0\n";
    out << "2.0,0.7,1.0,1.0\n";
    out << "3.0,1.9,1.0,1.0\n";
    out << "4.0,2.2,2.0,2.0\n";
    out << "5.0,3.1,2.0,3.0\n";
    out << "6.0,4.0,2.0,2.0\n";
    out << "7.0,4.6,3.0,3.0\n";
    out << "8.0,5.5,3.0,2.0\n";
}

void write_wide_csv(const std::string& name, Eigen::Index n, Eigen::Index p,
                    std::uint64_t seed) {
    const Eigen::MatrixXd x = acs::gen_design(n, p, acs::CovKind::ar, seed);
    std::ofstream out(path_of(name));
    out << "y";
    for (Eigen::Index j = 0; j < p; ++j) out << ",x" << (j + 1);
    out << "\n";
    for (Eigen::Index i = 0; i < n; ++i) {
        // Response driven by the first two features.
        out << acs::format_double(2.0 * x(i, 0) - x(i, 1) + 0.3 * x(i, (i % p)));
        for (Eigen::Index j = 0; j < p; ++j) out << ',' << acs::format_double(x(i, j));
        out << "\n";
    }
}

// Strips the run-dependent fields: wall-clock timings, and the output
// prefix (the two runs must write to different places to be comparable).
nlohmann::json comparable_manifest(const std::string& name) {
    nlohmann::json doc = nlohmann::json::parse(slurp(name));
    REQUIRE(doc.contains("timings_seconds"));
    doc.erase("timings_seconds");
    doc["flags"].erase("output");
    return doc;
}

} // namespace

TEST_CASE("rank screening surfaces the monotone column first") {
    write_monotone_csv("mono.csv");
    const int rc = run_cli("screen --input " + path_of("mono.csv") +
                           " --response y --measure kendall --m 2 --top-k 1 --method acs"
                           " --output " + path_of("mono"));
    CHECK(rc == 0);
    // A strictly concordant pair scores 1/2 - 1/4 on every segment, under
    // any partition, so the file content is exact.
    CHECK(slurp("mono_retained.csv") == "feature,index,estimate\nx1,0,0.25\n");
    const std::vector<std::string> est = lines_of(slurp("mono_estimates.csv"));
    REQUIRE(est.size() == 4);
    CHECK(est[0] == "feature,estimate,method,m,degenerate,dropped_segments");
    CHECK(field(est[1], 0) == "x1");
    CHECK(std::stod(field(est[2], 1)) < 0.25);
    CHECK(std::stod(field(est[3], 1)) < 0.25);
    // Manifest carries a digest of the input bytes.
    const nlohmann::json doc = nlohmann::json::parse(slurp("mono_manifest.json"));
    CHECK(doc["input_digest"].get<std::string>().size() == 16);
    CHECK(doc["command"] == "screen");
    CHECK(doc["version"].is_string());
}

TEST_CASE("reruns with identical flags and seed are byte-identical") {
    write_wide_csv("wide.csv", 80, 6, 7001);
    const std::string flags = "screen --input " + path_of("wide.csv") +
                              " --response y --measure dc --m 4 --gamma 0.05 --method racs"
                              " --R 2 --seed 99 --output ";
    CHECK(run_cli(flags + path_of("runA")) == 0);
    CHECK(run_cli(flags + path_of("runB")) == 0);
    CHECK(slurp("runA_estimates.csv") == slurp("runB_estimates.csv"));
    CHECK(slurp("runA_retained.csv") == slurp("runB_retained.csv"));
    // Manifests agree everywhere except the recorded wall-clock timings.
    CHECK(comparable_manifest("runA_manifest.json") ==
          comparable_manifest("runB_manifest.json"));
}

TEST_CASE("thread count does not change the numbers") {
    write_wide_csv("thr.csv", 90, 5, 7002);
    const std::string base = "screen --input " + path_of("thr.csv") +
                             " --response y --measure kendall --m 3 --top-k 2 --method acs"
                             " --seed 5 --output ";
    CHECK(run_cli(base + path_of("thr1") + " --threads 1") == 0);
    CHECK(run_cli(base + path_of("thr4") + " --threads 4") == 0);
    CHECK(slurp("thr1_estimates.csv") == slurp("thr4_estimates.csv"));
    CHECK(slurp("thr1_retained.csv") == slurp("thr4_retained.csv"));
}

TEST_CASE("naive enumeration and fast paths agree through the binary") {
    write_wide_csv("nf.csv", 24, 4, 7003);
    for (const std::string measure : {"pearson", "kendall", "sirs", "dc"}) {
        const std::string base = "screen --input " + path_of("nf.csv") + " --response y --measure " +
                                 measure + " --m 3 --top-k 1 --method acs --seed 11 --output ";
        CHECK(run_cli(base + path_of("fast")) == 0);
        CHECK(run_cli(base + path_of("slow") + " --naive") == 0);
        const std::vector<std::string> fast = lines_of(slurp("fast_estimates.csv"));
        const std::vector<std::string> slow = lines_of(slurp("slow_estimates.csv"));
        REQUIRE(fast.size() == slow.size());
        for (std::size_t i = 1; i < fast.size(); ++i) {
            const double a = std::stod(field(fast[i], 1));
            const double b = std::stod(field(slow[i], 1));
            CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b)));
        }
    }
}

TEST_CASE("usage mistakes exit with code 1 and one diagnostic line") {
    write_monotone_csv("u.csv");
    const std::string in = path_of("u.csv");
    CHECK(run_cli("screen --input " + in +
                  " --response y --measure kendall --m 0 --top-k 1 --method acs --output " +
                  path_of("u1")) == 1);
    CHECK(run_cli("screen --input " + in +
                  " --response y --measure kendall --m 2 --gamma 0.2 --top-k 1 --method acs"
                  " --output " + path_of("u2")) == 1);
    CHECK(run_cli("screen --input " + in +
                  " --response y --measure kendall --m 2 --method acs --output " + path_of("u3")) ==
          1);
    CHECK(run_cli("simulate --model b --p 5 --output " + path_of("u4")) == 1);
    CHECK(run_cli("simulate --model z --output " + path_of("u5")) == 1);
    CHECK(run_cli("rmse-bench --measures spearman --N 50 --m-list 2 --T 2 --output " +
                  path_of("u6")) == 1);
    CHECK(run_cli("") == 1); // a subcommand is required
    const std::vector<std::string> err = lines_of(slurp("stderr.txt"));
    REQUIRE(!err.empty());
    CHECK(err.size() == 1);
    CHECK(err[0].rfind("error: ", 0) == 0);
}

TEST_CASE("data problems exit with code 2") {
    CHECK(run_cli("screen --input " + path_of("absent.csv") +
                  " --response y --measure kendall --m 2 --top-k 1 --method acs --output " +
                  path_of("d1")) == 2);
    {
        std::ofstream out(path_of("bad.csv"));
        out << "y,x1\n1.0,apple\n2.0,3.5\n";
    }
    CHECK(run_cli("screen --input " + path_of("bad.csv") +
                  " --response y --measure kendall --m 1 --top-k 1 --method acs --output " +
                  path_of("d2")) == 2);
}

TEST_CASE("a study whose every repetition aborts exits with code 3") {
    // At this tiny N, the weakest truly-active strength under the
    // truncated measure is 0 in every repetition, so no oracle
    // threshold exists anywhere.
    CHECK(run_cli("simulate --model f --N 45 --p 25 --m 3 --T 2 --measure sirs --rho 0.8"
                  " --seed 1 --output " + path_of("g1")) == 3);
    const std::vector<std::string> err = lines_of(slurp("stderr.txt"));
    REQUIRE(err.size() == 1);
    CHECK(err[0].find("aborted") != std::string::npos);
}

TEST_CASE("simulate emits the full metrics schema and a manifest") {
    CHECK(run_cli("simulate --model a --N 200 --p 30 --m 4 --T 4 --measure pearson --seed 3"
                  " --output " + path_of("sim")) == 0);
    const std::vector<std::string> rows = lines_of(slurp("sim_metrics.csv"));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "m,measure,method,SSR,MS,Std(MS),PSR,FDR,Time^n,Time^N");
    CHECK(field(rows[1], 2) == "sas");
    CHECK(field(rows[2], 2) == "acs");
    CHECK(field(rows[3], 2) == "racs");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(field(rows[i], 0) == "4");
        CHECK(field(rows[i], 1) == "pearson");
    }
    const nlohmann::json doc = nlohmann::json::parse(slurp("sim_manifest.json"));
    CHECK(doc["flags"]["cov"] == "identity"); // model a runs on the identity design
    CHECK(doc["seed"] == 3);
    // Metric columns are reproducible even though timing columns move.
    CHECK(run_cli("simulate --model a --N 200 --p 30 --m 4 --T 4 --measure pearson --seed 3"
                  " --output " + path_of("sim2")) == 0);
    const std::vector<std::string> again = lines_of(slurp("sim2_metrics.csv"));
    for (std::size_t i = 1; i < rows.size(); ++i)
        for (int col = 0; col < 8; ++col) CHECK(field(rows[i], col) == field(again[i], col));
}

TEST_CASE("rmse-bench matches the library and handles a single repetition") {
    CHECK(run_cli("rmse-bench --N 60 --m-list 3,6 --T 1 --measures kendall --seed 17 --output " +
                  path_of("rb")) == 0);
    const std::vector<std::string> rows = lines_of(slurp("rb_rmse.csv"));
    REQUIRE(rows.size() == 7);
    CHECK(rows[0] == "measure,method,m,RMSE");
    // The binary is a thin shell over the library call.
    const std::vector<acs::RmseRow> expect =
        acs::run_rmse_experiment(60, {3, 6}, 1, {"kendall"}, 17);
    for (std::size_t i = 0; i < expect.size(); ++i) {
        CHECK(field(rows[i + 1], 0) == expect[i].measure);
        CHECK(field(rows[i + 1], 1) == expect[i].method);
        CHECK(field(rows[i + 1], 2) == std::to_string(expect[i].m));
        CHECK(std::stod(field(rows[i + 1], 3)) == doctest::Approx(expect[i].rmse).epsilon(1e-15));
    }
    // Byte-stable rerun.
    CHECK(run_cli("rmse-bench --N 60 --m-list 3,6 --T 1 --measures kendall --seed 17 --output " +
                  path_of("rb2")) == 0);
    CHECK(slurp("rb_rmse.csv") == slurp("rb2_rmse.csv"));
}
