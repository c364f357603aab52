#include "svmma/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>
#include <utility>

#include "svmma/baselines.hpp"
#include "svmma/cv_weighting.hpp"
#include "svmma/dgp.hpp"
#include "svmma/metrics.hpp"
#include "svmma/rng.hpp"

namespace svmma {
namespace {

// Every replication owns a block of derived-seed slots so that no two
// replications (or two sweep points inside one) ever share a stream.
constexpr std::uint64_t kRepStride = 1ull << 20;
constexpr std::uint64_t kSlotRep = 0;
constexpr std::uint64_t kSlotTrain = 1;
constexpr std::uint64_t kSlotTest = 2;
// Split and bagging slots are offset by a sweep tag (the split fraction
// in 1e-4 units, or the candidate count) rather than the grid position,
// so a sweep point draws the same randomness no matter which grid it
// sits in. Tags stay below 10^5, far under the stride.
constexpr std::uint64_t kSlotSplitBase = 16;
constexpr std::uint64_t kSlotBagBase = 16384;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string fmt_label(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt_coord(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

// Fields are kept quote-free; separators inside free text would shift
// columns, so they are replaced instead.
std::string sanitize_field(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

bool is_error_status(const std::string& status) {
    return status.compare(0, 5, "error") == 0;
}

std::string mode_name(const ExperimentConfig& cfg) {
    if (!cfg.sn_grid.empty()) return "learning-curve";
    if (cfg.source == SourceKind::CSV) return "realdata";
    return "simulate";
}

std::vector<std::string> resolve_methods(const ExperimentConfig& cfg) {
    const auto& all = canonical_methods();
    for (const auto& given : cfg.methods)
        if (std::find(all.begin(), all.end(), given) == all.end())
            throw std::invalid_argument("unknown method: " + given);
    if (cfg.methods.empty()) return all;
    std::vector<std::string> out;
    for (const auto& name : all)
        if (std::find(cfg.methods.begin(), cfg.methods.end(), name) != cfg.methods.end())
            out.push_back(name);
    return out;
}

std::uint64_t split_fraction_tag(double g) {
    return static_cast<std::uint64_t>(std::llround(g * 10000.0));
}

struct SweepPoint {
    double sweep_value = 0;
    std::size_t model_count = 0;
    std::uint64_t split_slot = 0;
    std::uint64_t bag_tag = 0;
};

void append_error_rows(const std::vector<std::string>& methods, const std::string& mode,
                       const SweepPoint& pt, std::size_t d, std::uint64_t rep_seed,
                       bool with_train_rows, const std::string& what,
                       std::vector<ResultRow>& rows) {
    const std::string status = "error:" + what;
    auto push = [&](std::string name) {
        ResultRow r;
        r.method = std::move(name);
        r.mode = mode;
        r.sweep_value = pt.sweep_value;
        r.replication = d;
        r.seed = rep_seed;
        r.status = status;
        rows.push_back(std::move(r));
    };
    for (const auto& m : methods) {
        if (with_train_rows) {
            push(m + "-Train");
            push(m + "-Test");
        } else {
            push(m);
        }
    }
}

// Runs the shared pipeline once on a prepared train/test pair and emits
// one row per requested method (two in train/test mode). A pipeline
// failure turns into error rows instead of aborting the batch.
void evaluate_sweep(const ExperimentConfig& cfg, const std::vector<std::string>& methods,
                    const std::string& mode, const SweepPoint& pt, std::size_t d,
                    std::uint64_t rep_seed, bool with_train_rows, const Matrix& xtr,
                    const std::vector<double>& ytr, const Matrix& xte,
                    const std::vector<double>& yte, std::vector<ResultRow>& rows) {
    auto base_row = [&](std::string name) {
        ResultRow r;
        r.method = std::move(name);
        r.mode = mode;
        r.sweep_value = pt.sweep_value;
        r.replication = d;
        r.seed = rep_seed;
        return r;
    };
    try {
        const Scenario scenario =
            cfg.source == SourceKind::CSV ? Scenario::None : cfg.scenario;
        const auto ordering = screen_features(xtr, ytr, cfg.screening);
        const auto cands =
            build_scenario_candidates(ordering, pt.model_count, scenario, cfg.q);
        const auto plan = make_folds(ytr.size(), cfg.folds);
        const auto fold_fits = fit_fold_models(xtr, ytr, cands, plan);
        const auto z = build_cv_margins(xtr, ytr, cands, plan, fold_fits);
        const auto wsol = solve_weights(z);
        const auto full = refit_full(xtr, ytr, cands);

        bool warn = !ordering.all_fits_converged || !fold_fits.all_converged ||
                    !full.all_converged || !wsol.converged;

        // Curve sweeps report error rates only, so the test-side weight
        // minimization is skipped there.
        const bool want_nhl = !with_train_rows;
        Matrix zt;
        NhlDenominator denom;
        if (want_nhl) {
            zt = margin_matrix(xte, yte, full.embedded);
            denom = nhl_denominator(zt);
            if (!denom.separable && !denom.converged) warn = true;
        }

        std::optional<IcScore> ic_low, ic_high;
        auto ic_of = [&](IcKind kind) -> const IcScore& {
            auto& slot = kind == IcKind::SVMICL ? ic_low : ic_high;
            if (!slot) slot = ic_scores(xtr, ytr, full.embedded, cands, kind);
            return *slot;
        };

        for (const auto& m : methods) {
            if (m == "BAG" || m == "ADA") {
                EnsembleConfig ec;
                ec.rounds = cands.size();
                bool fits_ok = true;
                std::vector<double> pred_te, pred_tr;
                if (m == "BAG") {
                    ec.seed = RngStream::child_seed(
                        cfg.seed, static_cast<std::uint64_t>(d) * kRepStride +
                                      kSlotBagBase + pt.bag_tag);
                    const auto model = fit_bagging(xtr, ytr, cands, ec);
                    fits_ok = model.all_converged;
                    pred_te = bagging_predict_labels(model, xte);
                    if (with_train_rows) pred_tr = bagging_predict_labels(model, xtr);
                } else {
                    const auto model = fit_adaboost(xtr, ytr, cands, ec);
                    fits_ok = model.all_converged;
                    pred_te = adaboost_predict_labels(model, xte);
                    if (with_train_rows) pred_tr = adaboost_predict_labels(model, xtr);
                }
                const std::string status = (warn || !fits_ok) ? "warn" : "ok";
                if (with_train_rows) {
                    auto train_row = base_row(m + "-Train");
                    train_row.er = error_rate(pred_tr, ytr);
                    train_row.status = status;
                    rows.push_back(std::move(train_row));
                    auto test_row = base_row(m + "-Test");
                    test_row.er = error_rate(pred_te, yte);
                    test_row.status = status;
                    rows.push_back(std::move(test_row));
                } else {
                    auto row = base_row(m);
                    row.er = error_rate(pred_te, yte);
                    row.status = status;
                    rows.push_back(std::move(row));
                }
                continue;
            }

            WeightVector w;
            if (m == "SVMMA") {
                w = wsol.weights;
            } else if (m == "SVMICL") {
                w = select_by_ic(ic_of(IcKind::SVMICL));
            } else if (m == "SVMICH") {
                w = select_by_ic(ic_of(IcKind::SVMICH));
            } else if (m == "SCL") {
                w = smoothed_ic_weights(ic_of(IcKind::SVMICL), ytr.size());
            } else if (m == "SCH") {
                w = smoothed_ic_weights(ic_of(IcKind::SVMICH), ytr.size());
            } else {
                w = uniform_weights(cands.size());
            }
            const auto coef = average_coefficients(full.embedded, w);
            if (with_train_rows) {
                const std::string status = warn ? "warn" : "ok";
                auto train_row = base_row(m + "-Train");
                train_row.er = error_rate(predict_labels(xtr, coef), ytr);
                train_row.status = status;
                rows.push_back(std::move(train_row));
                auto test_row = base_row(m + "-Test");
                test_row.er = error_rate(predict_labels(xte, coef), yte);
                test_row.status = status;
                rows.push_back(std::move(test_row));
            } else {
                auto row = base_row(m);
                row.er = error_rate(predict_labels(xte, coef), yte);
                row.nhl = nhl(zt, w.values, denom);
                row.status = denom.separable ? "separable" : (warn ? "warn" : "ok");
                rows.push_back(std::move(row));
            }
        }
    } catch (const std::exception& e) {
        append_error_rows(methods, mode, pt, d, rep_seed, with_train_rows, e.what(),
                          rows);
    }
}

std::vector<ResultRow> run_replication_impl(const ExperimentConfig& cfg,
                                            const std::vector<std::string>& methods,
                                            const std::string& mode,
                                            const Dataset* csv_data, std::size_t d) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<ResultRow> rows;
    const std::uint64_t rep_base = static_cast<std::uint64_t>(d) * kRepStride;
    const std::uint64_t rep_seed = RngStream::child_seed(cfg.seed, rep_base + kSlotRep);

    if (cfg.source == SourceKind::CSV) {
        const std::vector<double> grid =
            cfg.g_grid.empty() ? std::vector<double>{0.8} : cfg.g_grid;
        for (const double g : grid) {
            // Seed slots are keyed by the fraction itself so a sweep point
            // sees the same splits whether it runs alone or inside a grid.
            SweepPoint pt{g, cfg.model_count, kSlotSplitBase + split_fraction_tag(g),
                          split_fraction_tag(g)};
            try {
                SplitSpec sp;
                sp.train_fraction = g;
                sp.seed = RngStream::child_seed(cfg.seed, rep_base + pt.split_slot);
                auto parts = split(*csv_data, sp);
                auto standardized = standardize(parts.first);
                const Dataset test =
                    apply_standardization(parts.second, standardized.second);
                evaluate_sweep(cfg, methods, mode, pt, d, rep_seed, false,
                               standardized.first.features, standardized.first.labels,
                               test.features, test.labels, rows);
            } catch (const std::exception& e) {
                append_error_rows(methods, mode, pt, d, rep_seed, false, e.what(), rows);
            }
        }
    } else {
        DgpConfig dg;
        dg.which = cfg.source == SourceKind::DGP1 ? DgpKind::DGP1 : DgpKind::DGP2;
        dg.p = cfg.p;
        dg.q = cfg.q;
        dg.n = cfg.n;
        dg.seed = RngStream::child_seed(cfg.seed, rep_base + kSlotTrain);
        const Dataset train = generate(dg);
        dg.n = cfg.n_test;
        dg.seed = RngStream::child_seed(cfg.seed, rep_base + kSlotTest);
        const Dataset test = generate(dg);
        if (cfg.sn_grid.empty()) {
            SweepPoint pt{static_cast<double>(cfg.n), cfg.model_count, 0, 0};
            evaluate_sweep(cfg, methods, mode, pt, d, rep_seed, false, train.features,
                           train.labels, test.features, test.labels, rows);
        } else {
            for (std::size_t k = 0; k < cfg.sn_grid.size(); ++k) {
                const std::size_t count = cfg.sn_grid[k];
                SweepPoint pt{static_cast<double>(count), count, 0,
                              static_cast<std::uint64_t>(count)};
                evaluate_sweep(cfg, methods, mode, pt, d, rep_seed, true, train.features,
                               train.labels, test.features, test.labels, rows);
            }
        }
    }

    if (cfg.record_timings) {
        const double ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
        for (auto& r : rows) r.wall_time_ms = ms;
    }
    return rows;
}

std::size_t resolve_threads(const ExperimentConfig& cfg) {
    std::size_t t = cfg.threads;
    if (t == 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        t = hc ? hc : 1;
    }
    if (const char* env = std::getenv("SVMMA_THREADS")) {
        char* end = nullptr;
        const unsigned long cap = std::strtoul(env, &end, 10);
        if (env[0] != '\0' && end != nullptr && *end == '\0' && cap > 0)
            t = std::min<std::size_t>(t, static_cast<std::size_t>(cap));
    }
    return std::max<std::size_t>(1, std::min(t, cfg.replications));
}

}  // namespace

const std::vector<std::string>& canonical_methods() {
    static const std::vector<std::string> names{"SVMMA", "SVMICL", "SVMICH", "SCL",
                                                "SCH",   "UNIF",   "BAG",    "ADA"};
    return names;
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.replications == 0)
        throw std::invalid_argument("at least one replication is required");
    if (cfg.folds < 2)
        throw std::invalid_argument("cross-validation needs at least two folds");
    if (cfg.model_count == 0)
        throw std::invalid_argument("at least one candidate model is required");
    resolve_methods(cfg);

    if (cfg.source == SourceKind::CSV) {
        if (cfg.csv_path.empty())
            throw std::invalid_argument("CSV sources need a file path");
        if (cfg.scenario != Scenario::None)
            throw std::invalid_argument("scenarios apply to simulated sources only");
        if (!cfg.sn_grid.empty())
            throw std::invalid_argument("learning curves run on simulated sources only");
        if (cfg.g_grid.size() > 4000)
            throw std::invalid_argument("sweep grids are limited to 4000 points");
        std::vector<std::uint64_t> tags;
        for (const double g : cfg.g_grid) {
            if (!(g > 0.0 && g < 1.0))
                throw std::invalid_argument(
                    "training fractions must lie strictly between 0 and 1");
            tags.push_back(split_fraction_tag(g));
        }
        std::sort(tags.begin(), tags.end());
        if (std::adjacent_find(tags.begin(), tags.end()) != tags.end())
            throw std::invalid_argument(
                "training fractions must be distinct at 1e-4 resolution");
    } else {
        if (!cfg.g_grid.empty())
            throw std::invalid_argument("the split grid applies to CSV sources only");
        if (cfg.p == 0) throw std::invalid_argument("at least one covariate is required");
        if (cfg.p > 100000)
            throw std::invalid_argument("covariate counts above 100000 are not supported");
        // A learning-curve sweep supplies its own candidate counts.
        if (cfg.sn_grid.empty() && cfg.model_count > cfg.p)
            throw std::invalid_argument("cannot build more candidates than covariates");
        if (cfg.q == 0 || cfg.q > cfg.p)
            throw std::invalid_argument("the signal count must lie in [1, p]");
        if (cfg.n < cfg.folds)
            throw std::invalid_argument("the training size must cover the folds");
        if (cfg.n_test == 0)
            throw std::invalid_argument("a nonempty test set is required");
        if (cfg.scenario == Scenario::S1 && cfg.p < 2)
            throw std::invalid_argument(
                "the misspecified scenario needs at least two covariates");
        if (cfg.sn_grid.size() > 4000)
            throw std::invalid_argument("sweep grids are limited to 4000 points");
        for (const std::size_t count : cfg.sn_grid)
            if (count == 0 || count > cfg.p)
                throw std::invalid_argument(
                    "candidate counts in the sweep must lie in [1, p]");
    }
}

CandidateSet build_scenario_candidates(const FeatureOrdering& ordering,
                                       std::size_t count, Scenario scenario,
                                       std::size_t q) {
    CandidateSet cands = build_candidates(ordering, count);
    if (scenario != Scenario::S1) return cands;
    if (q == 0)
        throw std::invalid_argument(
            "the misspecified scenario needs at least one signal covariate");

    bool changed = false;
    for (std::size_t s = 1; s <= cands.size(); ++s) {
        auto& idx = cands.models[s - 1].feature_indices;
        const std::size_t target = ((s - 1) % q) + 1;
        const auto it = std::find(idx.begin(), idx.end(), target);
        if (it == idx.end()) continue;  // already omits its designated signal
        idx.erase(it);
        changed = true;
        if (idx.empty()) {
            // Keep the candidate nonempty: swap in the strongest screened
            // feature other than the signal that was just removed.
            for (std::size_t rank = 1; rank < ordering.order.size(); ++rank) {
                const std::size_t feature = ordering.order[rank];
                if (feature != target) {
                    idx.push_back(feature);
                    break;
                }
            }
            if (idx.empty())
                throw std::invalid_argument(
                    "cannot keep a candidate nonempty with a single covariate");
        }
    }
    if (changed) cands.nested = false;

    for (const auto& model : cands.models) {
        bool omits = false;
        for (std::size_t j = 1; j <= q && !omits; ++j)
            omits = std::find(model.feature_indices.begin(), model.feature_indices.end(),
                              j) == model.feature_indices.end();
        if (!omits)
            throw std::logic_error(
                "a candidate retained every signal covariate after the removal pass");
    }
    return cands;
}

std::vector<ResultRow> run_replication(const ExperimentConfig& cfg, std::size_t d) {
    validate_config(cfg);
    if (d >= cfg.replications)
        throw std::out_of_range("replication index exceeds the configured count");
    const auto methods = resolve_methods(cfg);
    const std::string mode = mode_name(cfg);
    std::optional<Dataset> csv_data;
    if (cfg.source == SourceKind::CSV) {
        csv_data = load_csv(cfg.csv_path, cfg.label);
        if (cfg.model_count > csv_data->p())
            throw std::invalid_argument("cannot build more candidates than covariates");
    }
    return run_replication_impl(cfg, methods, mode, csv_data ? &*csv_data : nullptr, d);
}

ExperimentResults run_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);
    const auto methods = resolve_methods(cfg);
    const std::string mode = mode_name(cfg);
    std::optional<Dataset> csv_data;
    if (cfg.source == SourceKind::CSV) {
        csv_data = load_csv(cfg.csv_path, cfg.label);
        if (cfg.model_count > csv_data->p())
            throw std::invalid_argument("cannot build more candidates than covariates");
    }

    const std::size_t workers = resolve_threads(cfg);
    std::vector<std::vector<ResultRow>> per_rep(cfg.replications);
    std::vector<std::exception_ptr> failures(cfg.replications);
    auto body = [&](std::size_t d) {
        try {
            per_rep[d] = run_replication_impl(cfg, methods, mode,
                                              csv_data ? &*csv_data : nullptr, d);
        } catch (...) {
            failures[d] = std::current_exception();
        }
    };

    if (workers <= 1) {
        for (std::size_t d = 0; d < cfg.replications; ++d) body(d);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t d = next.fetch_add(1);
                    if (d >= cfg.replications) break;
                    body(d);
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    for (const auto& failure : failures)
        if (failure) std::rethrow_exception(failure);

    ExperimentResults out;
    for (auto& rep_rows : per_rep)
        out.rows.insert(out.rows.end(), std::make_move_iterator(rep_rows.begin()),
                        std::make_move_iterator(rep_rows.end()));
    return out;
}

std::vector<MethodAggregate> aggregate(const std::vector<ResultRow>& rows) {
    struct Group {
        MethodAggregate agg;
        std::vector<double> ers;
        std::vector<double> nhls;
    };
    std::vector<Group> groups;
    for (const auto& row : rows) {
        Group* group = nullptr;
        for (auto& g : groups)
            if (g.agg.method == row.method && g.agg.mode == row.mode &&
                g.agg.sweep_value == row.sweep_value) {
                group = &g;
                break;
            }
        if (group == nullptr) {
            groups.push_back({});
            group = &groups.back();
            group->agg.method = row.method;
            group->agg.mode = row.mode;
            group->agg.sweep_value = row.sweep_value;
        }
        if (is_error_status(row.status)) {
            ++group->agg.errors;
            continue;
        }
        if (row.status == "separable") ++group->agg.separable;
        if (row.er) group->ers.push_back(*row.er);
        if (row.nhl) group->nhls.push_back(*row.nhl);
    }

    auto finalize = [](const std::vector<double>& values, std::size_t& count,
                       double& mean, double& stderr_out) {
        count = values.size();
        mean = 0;
        stderr_out = 0;
        if (values.empty()) return;
        for (const double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        if (values.size() < 2) return;
        double ss = 0;
        for (const double v : values) ss += (v - mean) * (v - mean);
        const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
        stderr_out = sd / std::sqrt(static_cast<double>(values.size()));
    };

    std::vector<MethodAggregate> out;
    out.reserve(groups.size());
    for (auto& g : groups) {
        finalize(g.ers, g.agg.er_count, g.agg.er_mean, g.agg.er_stderr);
        finalize(g.nhls, g.agg.nhl_count, g.agg.nhl_mean, g.agg.nhl_stderr);
        out.push_back(std::move(g.agg));
    }
    return out;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
    std::string out = "method,mode,sweep_value,replication,nhl,er,wall_time_ms,seed,status\n";
    for (const auto& r : rows) {
        out += sanitize_field(r.method);
        out += ',';
        out += sanitize_field(r.mode);
        out += ',';
        out += fmt(r.sweep_value);
        out += ',';
        out += std::to_string(r.replication);
        out += ',';
        if (r.nhl) out += fmt(*r.nhl);
        out += ',';
        if (r.er) out += fmt(*r.er);
        out += ',';
        out += fmt(r.wall_time_ms);
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        out += sanitize_field(r.status);
        out += '\n';
    }
    return out;
}

std::string summary_to_csv(const std::vector<MethodAggregate>& aggregates) {
    std::string out =
        "method,mode,sweep_value,er_count,er_mean,er_stderr,nhl_count,nhl_mean,"
        "nhl_stderr,separable,errors\n";
    for (const auto& a : aggregates) {
        out += sanitize_field(a.method);
        out += ',';
        out += sanitize_field(a.mode);
        out += ',';
        out += fmt(a.sweep_value);
        out += ',';
        out += std::to_string(a.er_count);
        out += ',';
        if (a.er_count > 0) {
            out += fmt(a.er_mean);
            out += ',';
            out += fmt(a.er_stderr);
        } else {
            out += ',';
        }
        out += ',';
        out += std::to_string(a.nhl_count);
        out += ',';
        if (a.nhl_count > 0) {
            out += fmt(a.nhl_mean);
            out += ',';
            out += fmt(a.nhl_stderr);
        } else {
            out += ',';
        }
        out += ',';
        out += std::to_string(a.separable);
        out += ',';
        out += std::to_string(a.errors);
        out += '\n';
    }
    return out;
}

std::string render_metric_svg(const std::vector<MethodAggregate>& aggregates,
                              const std::string& metric) {
    const bool use_nhl = metric == "nhl";
    if (!use_nhl && metric != "er")
        throw std::invalid_argument("metric must be \"nhl\" or \"er\"");

    struct Series {
        std::string name;
        std::vector<std::pair<double, double>> points;
    };
    std::vector<Series> series;
    for (const auto& a : aggregates) {
        const std::size_t count = use_nhl ? a.nhl_count : a.er_count;
        const double value = use_nhl ? a.nhl_mean : a.er_mean;
        if (count == 0 || !std::isfinite(value) || !std::isfinite(a.sweep_value))
            continue;
        Series* found = nullptr;
        for (auto& s : series)
            if (s.name == a.method) {
                found = &s;
                break;
            }
        if (found == nullptr) {
            series.push_back({a.method, {}});
            found = &series.back();
        }
        found->points.emplace_back(a.sweep_value, value);
    }
    if (series.empty()) return "";

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (auto& s : series) {
        std::stable_sort(s.points.begin(), s.points.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (xmax - xmin < 1e-12) {
        const double pad = std::max(0.5, std::abs(xmax) * 0.05);
        xmin -= pad;
        xmax += pad;
    }
    if (ymax - ymin < 1e-12) {
        const double pad = std::max(0.5, std::abs(ymax) * 0.05);
        ymin -= pad;
        ymax += pad;
    }

    const double px0 = 90, px1 = 760, py0 = 50, py1 = 540;
    auto sx = [&](double x) { return px0 + (x - xmin) / (xmax - xmin) * (px1 - px0); };
    auto sy = [&](double y) { return py1 - (y - ymin) / (ymax - ymin) * (py1 - py0); };

    static const char* kPalette[10] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                       "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                       "#bcbd22", "#17becf"};

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
           "width=\"800\" height=\"600\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n";
    svg += "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"18\">mean " +
           std::string(use_nhl ? "NHL" : "ER") + " by sweep value</text>\n";
    svg += "<line x1=\"" + fmt_coord(px0) + "\" y1=\"" + fmt_coord(py1) + "\" x2=\"" +
           fmt_coord(px1) + "\" y2=\"" + fmt_coord(py1) +
           "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + fmt_coord(px0) + "\" y1=\"" + fmt_coord(py0) + "\" x2=\"" +
           fmt_coord(px0) + "\" y2=\"" + fmt_coord(py1) +
           "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 4.0;
        const double fy = ymin + (ymax - ymin) * i / 4.0;
        svg += "<text x=\"" + fmt_coord(sx(fx)) + "\" y=\"" + fmt_coord(py1 + 22) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
               fmt_label(fx) + "</text>\n";
        svg += "<text x=\"" + fmt_coord(px0 - 8) + "\" y=\"" + fmt_coord(sy(fy) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
               fmt_label(fy) + "</text>\n";
    }
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % 10];
        std::string points;
        for (const auto& [x, y] : series[i].points) {
            if (!points.empty()) points += ' ';
            points += fmt_coord(sx(x)) + "," + fmt_coord(sy(y));
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
        for (const auto& [x, y] : series[i].points)
            svg += "<circle cx=\"" + fmt_coord(sx(x)) + "\" cy=\"" + fmt_coord(sy(y)) +
                   "\" r=\"3\" fill=\"" + std::string(color) + "\"/>\n";
        const double ly = 60 + 18.0 * static_cast<double>(i);
        svg += "<rect x=\"640\" y=\"" + fmt_coord(ly - 9) +
               "\" width=\"10\" height=\"10\" fill=\"" + std::string(color) + "\"/>\n";
        svg += "<text x=\"656\" y=\"" + fmt_coord(ly) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" +
               sanitize_field(series[i].name) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

void emit_report(const ExperimentResults& results, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    auto write_file = [&](const std::string& name, const std::string& body) {
        const fs::path path = fs::path(out_dir) / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
        out << body;
        out.flush();
        if (!out) throw std::runtime_error("failed while writing " + path.string());
    };

    write_file("results.csv", rows_to_csv(results.rows));
    if (results.rows.empty()) return;

    const auto aggregates = aggregate(results.rows);
    write_file("summary.csv", summary_to_csv(aggregates));
    const std::string nhl_svg = render_metric_svg(aggregates, "nhl");
    if (!nhl_svg.empty()) write_file("nhl.svg", nhl_svg);
    const std::string er_svg = render_metric_svg(aggregates, "er");
    if (!er_svg.empty()) write_file("er.svg", er_svg);
}

}  // namespace svmma
