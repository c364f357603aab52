// Command-line front end: simulation studies, real-data sweeps,
// learning curves, and standalone feature screening, configurable by
// flags or a JSON file (flags win).

#include <cstdio>
#include <exception>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "svmma/dataset.hpp"
#include "svmma/experiments.hpp"
#include "svmma/screening.hpp"

namespace {

using nlohmann::json;

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::size_t at = 0;
    while (at <= text.size()) {
        const std::size_t comma = std::min(text.find(',', at), text.size());
        const std::string piece = text.substr(at, comma - at);
        if (piece.empty()) throw std::invalid_argument("empty entry in list: " + text);
        std::size_t used = 0;
        out.push_back(std::stod(piece, &used));
        if (used != piece.size())
            throw std::invalid_argument("not a number: " + piece);
        at = comma + 1;
    }
    return out;
}

std::vector<std::size_t> parse_count_list(const std::string& text) {
    std::vector<std::size_t> out;
    for (const double v : parse_double_list(text)) {
        if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
            throw std::invalid_argument("expected nonnegative integers: " + text);
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

std::vector<std::string> parse_name_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t at = 0;
    while (at <= text.size()) {
        const std::size_t comma = std::min(text.find(',', at), text.size());
        const std::string piece = text.substr(at, comma - at);
        if (!piece.empty()) out.push_back(piece);
        at = comma + 1;
    }
    return out;
}

void apply_screening_json(const json& j, svmma::ScreeningConfig& sc) {
    for (const auto& [key, value] : j.items()) {
        if (key == "grid_start")
            sc.grid_start = value.get<double>();
        else if (key == "grid_end")
            sc.grid_end = value.get<double>();
        else if (key == "grid_steps")
            sc.grid_steps = value.get<std::size_t>();
        else if (key == "tolerance")
            sc.tolerance = value.get<double>();
        else if (key == "zero_threshold")
            sc.zero_threshold = value.get<double>();
        else
            throw std::invalid_argument("unknown screening key: " + key);
    }
}

svmma::ExperimentConfig config_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read configuration file: " + path);
    json j;
    in >> j;
    if (!j.is_object()) throw std::invalid_argument("configuration must be a JSON object");

    svmma::ExperimentConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "source") {
            const std::string s = value.get<std::string>();
            if (s == "dgp1")
                cfg.source = svmma::SourceKind::DGP1;
            else if (s == "dgp2")
                cfg.source = svmma::SourceKind::DGP2;
            else if (s == "csv")
                cfg.source = svmma::SourceKind::CSV;
            else
                throw std::invalid_argument("source must be dgp1, dgp2, or csv");
        } else if (key == "scenario") {
            const std::string s = value.get<std::string>();
            if (s == "s1")
                cfg.scenario = svmma::Scenario::S1;
            else if (s == "s2")
                cfg.scenario = svmma::Scenario::S2;
            else if (s == "none")
                cfg.scenario = svmma::Scenario::None;
            else
                throw std::invalid_argument("scenario must be s1, s2, or none");
        } else if (key == "csv_path") {
            cfg.csv_path = value.get<std::string>();
        } else if (key == "label") {
            if (value.is_string())
                cfg.label = svmma::LabelColumn::by_name(value.get<std::string>());
            else
                cfg.label = svmma::LabelColumn::by_index(value.get<long>());
        } else if (key == "n") {
            cfg.n = value.get<std::size_t>();
        } else if (key == "p") {
            cfg.p = value.get<std::size_t>();
        } else if (key == "q") {
            cfg.q = value.get<std::size_t>();
        } else if (key == "n_test") {
            cfg.n_test = value.get<std::size_t>();
        } else if (key == "replications") {
            cfg.replications = value.get<std::size_t>();
        } else if (key == "folds") {
            cfg.folds = value.get<std::size_t>();
        } else if (key == "model_count") {
            cfg.model_count = value.get<std::size_t>();
        } else if (key == "screening") {
            apply_screening_json(value, cfg.screening);
        } else if (key == "methods") {
            cfg.methods = value.get<std::vector<std::string>>();
        } else if (key == "seed") {
            cfg.seed = value.get<std::uint64_t>();
        } else if (key == "g_grid") {
            cfg.g_grid = value.get<std::vector<double>>();
        } else if (key == "sn_grid") {
            cfg.sn_grid = value.get<std::vector<std::size_t>>();
        } else if (key == "record_timings") {
            cfg.record_timings = value.get<bool>();
        } else if (key == "threads") {
            cfg.threads = value.get<std::size_t>();
        } else {
            throw std::invalid_argument("unknown configuration key: " + key);
        }
    }
    return cfg;
}

void run_and_report(const svmma::ExperimentConfig& cfg, const std::string& out_dir) {
    const auto results = svmma::run_experiment(cfg);
    svmma::emit_report(results, out_dir);
    const auto aggregates = svmma::aggregate(results.rows);
    std::fputs(svmma::summary_to_csv(aggregates).c_str(), stdout);
    std::printf("report written to %s\n", out_dir.c_str());
}

// Flags shared by the simulate and learning-curve subcommands.
struct SimFlags {
    std::string config;
    int dgp = 1;
    std::string scenario = "s2";
    std::size_t n = 0, p = 0, q = 0, ntest = 0, reps = 0, folds = 0, sn = 0,
                threads = 0;
    std::uint64_t seed = 0;
    std::string methods;
    std::string out;
    bool timings = false;
};

struct SimOptions {
    CLI::Option* dgp;
    CLI::Option* scenario;
    CLI::Option* n;
    CLI::Option* p;
    CLI::Option* q;
    CLI::Option* ntest;
    CLI::Option* reps;
    CLI::Option* folds;
    CLI::Option* sn;
    CLI::Option* seed;
    CLI::Option* methods;
    CLI::Option* timings;
    CLI::Option* threads;
};

SimOptions add_sim_flags(CLI::App* sub, SimFlags& f) {
    sub->add_option("--config", f.config, "JSON configuration file; flags override it");
    SimOptions o;
    o.dgp = sub->add_option("--dgp", f.dgp, "data generating process (1 or 2)")
                ->check(CLI::IsMember({1, 2}));
    o.scenario = sub->add_option("--scenario", f.scenario, "s1 (misspecified) or s2")
                     ->check(CLI::IsMember({"s1", "s2"}));
    o.n = sub->add_option("--n", f.n, "training sample size");
    o.p = sub->add_option("--p", f.p, "number of covariates");
    o.q = sub->add_option("--q", f.q, "number of signal covariates");
    o.ntest = sub->add_option("--ntest", f.ntest, "test sample size");
    o.reps = sub->add_option("--reps", f.reps, "number of replications");
    o.folds = sub->add_option("--folds", f.folds, "cross-validation folds");
    o.sn = sub->add_option("--sn", f.sn, "number of candidate models");
    o.seed = sub->add_option("--seed", f.seed, "master seed");
    o.methods = sub->add_option("--methods", f.methods,
                                "comma-separated method subset (default: all)");
    o.timings = sub->add_flag("--timings", f.timings,
                              "record wall times (breaks byte-stable reports)");
    o.threads = sub->add_option("--threads", f.threads,
                                "worker threads (0 = hardware; SVMMA_THREADS caps)");
    sub->add_option("--out", f.out, "report directory")->required();
    return o;
}

svmma::ExperimentConfig build_sim_config(const SimFlags& f, const SimOptions& o) {
    svmma::ExperimentConfig cfg;
    if (!f.config.empty()) cfg = config_from_json_file(f.config);
    if (o.dgp->count() > 0 || f.config.empty())
        cfg.source = f.dgp == 2 ? svmma::SourceKind::DGP2 : svmma::SourceKind::DGP1;
    if (o.scenario->count() > 0 || f.config.empty())
        cfg.scenario = f.scenario == "s1" ? svmma::Scenario::S1 : svmma::Scenario::S2;
    if (o.n->count() > 0) cfg.n = f.n;
    if (o.p->count() > 0) cfg.p = f.p;
    if (o.q->count() > 0) cfg.q = f.q;
    if (o.ntest->count() > 0) cfg.n_test = f.ntest;
    if (o.reps->count() > 0) cfg.replications = f.reps;
    if (o.folds->count() > 0) cfg.folds = f.folds;
    if (o.sn->count() > 0) cfg.model_count = f.sn;
    if (o.seed->count() > 0) cfg.seed = f.seed;
    if (o.methods->count() > 0) cfg.methods = parse_name_list(f.methods);
    if (o.timings->count() > 0) cfg.record_timings = f.timings;
    if (o.threads->count() > 0) cfg.threads = f.threads;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cross-validated model averaging for linear SVM classification"};
    app.require_subcommand(1);

    // --- simulate ---
    auto* sim = app.add_subcommand("simulate", "run a simulation study");
    auto sim_flags = std::make_shared<SimFlags>();
    const SimOptions sim_opts = add_sim_flags(sim, *sim_flags);
    sim->callback([sim_flags, sim_opts] {
        run_and_report(build_sim_config(*sim_flags, sim_opts), sim_flags->out);
    });

    // --- learning-curve ---
    auto* curve = app.add_subcommand(
        "learning-curve", "sweep the candidate count and report train/test error");
    auto curve_flags = std::make_shared<SimFlags>();
    const SimOptions curve_opts = add_sim_flags(curve, *curve_flags);
    auto curve_grid = std::make_shared<std::string>();
    auto* curve_grid_opt =
        curve->add_option("--sn-grid", *curve_grid, "comma-separated candidate counts");
    curve->callback([curve_flags, curve_opts, curve_grid, curve_grid_opt] {
        auto cfg = build_sim_config(*curve_flags, curve_opts);
        if (curve_grid_opt->count() > 0) cfg.sn_grid = parse_count_list(*curve_grid);
        if (cfg.sn_grid.empty())
            throw std::invalid_argument("learning-curve requires --sn-grid");
        run_and_report(cfg, curve_flags->out);
    });

    // --- realdata ---
    auto* real = app.add_subcommand("realdata", "evaluate methods on a CSV dataset");
    struct RealFlags {
        std::string config, csv, label, g_grid, methods, out;
        long label_index = -1;
        std::size_t reps = 0, folds = 0, sn = 0, threads = 0;
        std::uint64_t seed = 0;
        bool timings = false;
    };
    auto rf = std::make_shared<RealFlags>();
    real->add_option("--config", rf->config, "JSON configuration file; flags override it");
    auto* r_csv = real->add_option("--csv", rf->csv, "path to the dataset");
    auto* r_label = real->add_option("--label", rf->label, "label column name");
    auto* r_label_index =
        real->add_option("--label-index", rf->label_index, "0-based label column index");
    auto* r_grid = real->add_option("--g-grid", rf->g_grid,
                                    "comma-separated training fractions, e.g. 0.4,0.5");
    auto* r_reps = real->add_option("--reps", rf->reps, "number of replications");
    auto* r_folds = real->add_option("--folds", rf->folds, "cross-validation folds");
    auto* r_sn = real->add_option("--sn", rf->sn, "number of candidate models");
    auto* r_seed = real->add_option("--seed", rf->seed, "master seed");
    auto* r_methods = real->add_option("--methods", rf->methods,
                                       "comma-separated method subset (default: all)");
    auto* r_timings = real->add_flag("--timings", rf->timings,
                                     "record wall times (breaks byte-stable reports)");
    auto* r_threads = real->add_option(
        "--threads", rf->threads, "worker threads (0 = hardware; SVMMA_THREADS caps)");
    real->add_option("--out", rf->out, "report directory")->required();
    real->callback([rf, r_csv, r_label, r_label_index, r_grid, r_reps, r_folds, r_sn,
                    r_seed, r_methods, r_timings, r_threads] {
        svmma::ExperimentConfig cfg;
        if (!rf->config.empty()) {
            cfg = config_from_json_file(rf->config);
        } else {
            cfg.source = svmma::SourceKind::CSV;
            cfg.scenario = svmma::Scenario::None;
        }
        cfg.source = svmma::SourceKind::CSV;
        cfg.scenario = svmma::Scenario::None;
        if (r_csv->count() > 0) cfg.csv_path = rf->csv;
        if (r_label->count() > 0) cfg.label = svmma::LabelColumn::by_name(rf->label);
        if (r_label_index->count() > 0)
            cfg.label = svmma::LabelColumn::by_index(rf->label_index);
        if (r_grid->count() > 0) cfg.g_grid = parse_double_list(rf->g_grid);
        if (r_reps->count() > 0) cfg.replications = rf->reps;
        if (r_folds->count() > 0) cfg.folds = rf->folds;
        if (r_sn->count() > 0) cfg.model_count = rf->sn;
        if (r_seed->count() > 0) cfg.seed = rf->seed;
        if (r_methods->count() > 0) cfg.methods = parse_name_list(rf->methods);
        if (r_timings->count() > 0) cfg.record_timings = rf->timings;
        if (r_threads->count() > 0) cfg.threads = rf->threads;
        run_and_report(cfg, rf->out);
    });

    // --- screen ---
    auto* screen = app.add_subcommand(
        "screen", "print the screened feature ordering for a CSV dataset");
    struct ScreenFlags {
        std::string csv, label;
        long label_index = -1;
        svmma::ScreeningConfig sc;
    };
    auto sf = std::make_shared<ScreenFlags>();
    screen->add_option("--csv", sf->csv, "path to the dataset")->required();
    auto* s_label = screen->add_option("--label", sf->label, "label column name");
    auto* s_label_index =
        screen->add_option("--label-index", sf->label_index, "0-based label column index");
    screen->add_option("--a", sf->sc.grid_start, "smallest penalty on the path");
    screen->add_option("--b", sf->sc.grid_end, "largest penalty on the path");
    screen->add_option("--L", sf->sc.grid_steps, "number of penalty increments");
    screen->add_option("--zero-threshold", sf->sc.zero_threshold,
                       "coefficient magnitude that counts as zero");
    screen->callback([sf, s_label, s_label_index] {
        if (s_label->count() == 0 && s_label_index->count() == 0)
            throw std::invalid_argument("screen requires --label or --label-index");
        const svmma::LabelColumn label =
            s_label_index->count() > 0 ? svmma::LabelColumn::by_index(sf->label_index)
                                       : svmma::LabelColumn::by_name(sf->label);
        const auto data = svmma::load_csv(sf->csv, label);
        const auto standardized = svmma::standardize(data);
        const auto ordering = svmma::screen_features(standardized.first.features,
                                                     standardized.first.labels, sf->sc);
        std::printf("rank,feature,name,death_step\n");
        for (std::size_t rank = 0; rank < ordering.order.size(); ++rank) {
            const std::size_t feature = ordering.order[rank];
            const std::string name =
                feature == 0 ? "(intercept)" : data.feature_names[feature - 1];
            const long death = ordering.first_zero_step[feature];
            if (death == svmma::FeatureOrdering::kNeverZero)
                std::printf("%zu,%zu,%s,survived\n", rank, feature, name.c_str());
            else
                std::printf("%zu,%zu,%s,%ld\n", rank, feature, name.c_str(), death);
        }
        if (!ordering.all_fits_converged)
            std::fprintf(stderr, "warning: %zu path fit(s) missed the tolerance\n",
                         ordering.failed_fits);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
