#pragma once
// Experiment orchestration: run the full averaging pipeline and the
// baseline methods over simulated draws, real CSV data with random
// splits, or a learning-curve sweep over the candidate count, with
// deterministic seeding, an optional worker pool, and CSV/SVG reports.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "svmma/candidates.hpp"
#include "svmma/dataset.hpp"
#include "svmma/screening.hpp"

namespace svmma {

enum class SourceKind { DGP1, DGP2, CSV };

// S1 removes one signal covariate from every candidate so that each
// candidate is misspecified; S2 and None leave the candidates intact.
enum class Scenario { None, S1, S2 };

struct ExperimentConfig {
    SourceKind source = SourceKind::DGP1;
    Scenario scenario = Scenario::S2;

    // CSV sources only.
    std::string csv_path;
    LabelColumn label;

    // Simulated sources only.
    std::size_t n = 100;
    std::size_t p = 50;
    std::size_t q = 4;
    std::size_t n_test = 2000;

    std::size_t replications = 50;  // independent repetitions (D)
    std::size_t folds = 5;          // cross-validation folds (J)
    std::size_t model_count = 20;   // nested candidates per replication (S_n)
    ScreeningConfig screening;

    // Subset of canonical_methods(); empty selects every method.
    std::vector<std::string> methods;

    std::uint64_t seed = 0;

    // Real-data sweep of training fractions; empty defaults to {0.8}.
    std::vector<double> g_grid;
    // Learning-curve sweep of candidate counts (simulated sources only).
    std::vector<std::size_t> sn_grid;

    // Off by default so identical configurations produce byte-identical
    // reports; timings vary run to run.
    bool record_timings = false;
    // 0 picks the hardware default; the SVMMA_THREADS environment
    // variable caps whatever is chosen.
    std::size_t threads = 0;
};

struct ResultRow {
    std::string method;
    std::string mode;        // "simulate", "realdata", or "learning-curve"
    double sweep_value = 0;  // n, training fraction, or candidate count
    std::size_t replication = 0;
    std::optional<double> nhl;  // empty for ensembles, train rows, errors,
                                // and separable test problems
    std::optional<double> er;   // empty only on error rows
    double wall_time_ms = 0;
    std::uint64_t seed = 0;  // replication-level derived seed
    std::string status;      // "ok", "warn", "separable", or "error:..."
};

struct MethodAggregate {
    std::string method;
    std::string mode;
    double sweep_value = 0;
    std::size_t er_count = 0;
    std::size_t nhl_count = 0;
    std::size_t separable = 0;  // replications excluded from the NHL mean
    std::size_t errors = 0;
    double er_mean = 0;
    double er_stderr = 0;
    double nhl_mean = 0;
    double nhl_stderr = 0;
};

struct ExperimentResults {
    std::vector<ResultRow> rows;  // ordered by (replication, sweep, method)
};

// The full method roster in its canonical reporting order.
const std::vector<std::string>& canonical_methods();

// Throws std::invalid_argument when the configuration is inconsistent.
void validate_config(const ExperimentConfig& cfg);

// Builds the nested candidates and, under Scenario::S1, removes signal
// covariate ((s-1) mod q) + 1 from candidate s. A candidate that would
// become empty instead swaps in the strongest screened feature it does
// not already hold, so every candidate stays nonempty while still
// omitting its designated signal. Every returned candidate omits at
// least one of covariates 1..q; violating that is a logic error.
CandidateSet build_scenario_candidates(const FeatureOrdering& ordering,
                                       std::size_t count, Scenario scenario,
                                       std::size_t q);

// Runs replication d alone. CSV sources are loaded on every call; batch
// runs share the load via run_experiment. Rows come back in sweep-major
// method order and are identical to the same replication inside a batch.
std::vector<ResultRow> run_replication(const ExperimentConfig& cfg,
                                       std::size_t d);

// Runs every replication (worker pool when threads allow) and returns
// rows ordered by (replication, sweep, method).
ExperimentResults run_experiment(const ExperimentConfig& cfg);

// Per (mode, sweep, method) means and Monte-Carlo standard errors in
// first-appearance order. Error rows contribute only to the error
// count; separable rows keep their error rate but are excluded from the
// NHL mean and counted.
std::vector<MethodAggregate> aggregate(const std::vector<ResultRow>& rows);

// Fixed column order: method,mode,sweep_value,replication,nhl,er,
// wall_time_ms,seed,status. LF line endings, empty fields for missing
// metrics, byte-identical output for identical rows.
std::string rows_to_csv(const std::vector<ResultRow>& rows);

std::string summary_to_csv(const std::vector<MethodAggregate>& aggregates);

// Minimal 800x600 line chart: one polyline per method over sweep values,
// text legend. metric is "nhl" or "er"; returns "" when no method has a
// finite point.
std::string render_metric_svg(const std::vector<MethodAggregate>& aggregates,
                              const std::string& metric);

// Writes results.csv (always, header-only when empty) plus summary.csv
// and one SVG per metric with data into out_dir, creating it if needed.
void emit_report(const ExperimentResults& results, const std::string& out_dir);

}  // namespace svmma
