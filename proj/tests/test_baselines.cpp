#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "svmma/baselines.hpp"
#include "svmma/candidates.hpp"
#include "svmma/cv_weighting.hpp"
#include "svmma/dgp.hpp"
#include "svmma/rng.hpp"

namespace {

svmma::CandidateSet identity_candidates(std::size_t p, std::size_t count) {
    svmma::FeatureOrdering ord;
    ord.order.resize(p + 1);
    for (std::size_t j = 0; j <= p; ++j) ord.order[j] = j;
    ord.first_zero_step.assign(p + 1, svmma::FeatureOrdering::kNeverZero);
    return svmma::build_candidates(ord, count);
}

struct Fixture {
    svmma::Matrix x{0, 0};
    std::vector<double> y;
    svmma::CandidateSet cands;
    svmma::FullRefit refit;
};

Fixture make_fixture(std::uint64_t seed, std::size_t n, std::size_t p, std::size_t count) {
    svmma::DgpConfig dcfg;
    dcfg.n = n;
    dcfg.p = p;
    dcfg.q = std::max<std::size_t>(1, p / 2);
    dcfg.seed = seed;
    const auto data = svmma::generate(dcfg);
    Fixture f;
    f.x = data.features;
    f.y = data.labels;
    f.cands = identity_candidates(p, count);
    f.refit = svmma::refit_full(f.x, f.y, f.cands);
    return f;
}

}  // namespace

TEST_CASE("information scores add the size penalty to the total hinge loss") {
    // A fit with zero training hinge isolates the penalty term: build
    // perfectly separated data and a coefficient vector with huge margin.
    const std::size_t n = 100;
    svmma::Matrix x(n, 2);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = (i % 2 == 0) ? 1.0 : -1.0;
        x(i, 0) = 5.0 * y[i];
        x(i, 1) = -3.0 * y[i];
    }
    svmma::Coefficients wide;
    wide.intercept = 0.0;
    wide.beta = {10.0, 0.0};  // margin 50 on every row: zero hinge
    auto cands = identity_candidates(2, 2);
    const std::vector<svmma::Coefficients> fits = {wide, wide};

    const auto low = svmma::ic_scores(x, y, fits, cands, svmma::IcKind::SVMICL);
    const auto high = svmma::ic_scores(x, y, fits, cands, svmma::IcKind::SVMICH);
    REQUIRE(low.per_model.size() == 2);
    const double ln_n = std::log(100.0);
    CHECK(low.per_model[1] == doctest::Approx(2.0 * ln_n).epsilon(1e-12));
    CHECK(low.per_model[1] == doctest::Approx(9.2103).epsilon(1e-4));
    CHECK(high.per_model[1] == doctest::Approx(2.0 * std::pow(ln_n, 1.5)).epsilon(1e-12));
    CHECK(high.per_model[1] == doctest::Approx(19.7651).epsilon(1e-4));
    // Equal hinge losses: scores must be ordered by model size.
    CHECK(low.per_model[0] < low.per_model[1]);
    CHECK(high.per_model[0] < high.per_model[1]);

    // The hinge term is the total, not the average: rescale a fit so every
    // row contributes exactly hinge 0.5, giving n * 0.5 plus penalty.
    svmma::Coefficients half;
    half.intercept = 0.0;
    half.beta = {0.1, 0.0};  // margin 0.5 per row
    const auto mixed = svmma::ic_scores(x, y, {half, wide}, cands, svmma::IcKind::SVMICL);
    CHECK(mixed.per_model[0] == doctest::Approx(50.0 + ln_n).epsilon(1e-12));
}

TEST_CASE("information-criterion selection picks the smallest score with small-model ties") {
    svmma::IcScore s;
    s.which = svmma::IcKind::SVMICL;
    s.per_model = {3.0, 1.0, 2.0};
    s.model_sizes = {1, 2, 3};
    auto w = svmma::select_by_ic(s);
    REQUIRE(w.values.size() == 3);
    CHECK(w.values[0] == 0.0);
    CHECK(w.values[1] == 1.0);
    CHECK(w.values[2] == 0.0);

    s.per_model = {1.0, 1.0, 5.0};
    w = svmma::select_by_ic(s);
    CHECK(w.values[0] == 1.0);
    CHECK(w.values[1] == 0.0);

    s.per_model = {4.0};
    s.model_sizes = {1};
    w = svmma::select_by_ic(s);
    REQUIRE(w.values.size() == 1);
    CHECK(w.values[0] == 1.0);

    // Always a simplex vertex.
    s.per_model = {2.0, 7.0, 2.0, 9.0};
    s.model_sizes = {1, 2, 3, 4};
    w = svmma::select_by_ic(s);
    double sum = 0.0;
    std::size_t ones = 0;
    for (double v : w.values) {
        sum += v;
        if (v == 1.0) ++ones;
        else CHECK(v == 0.0);
    }
    CHECK(sum == 1.0);
    CHECK(ones == 1);
}

TEST_CASE("smoothed scores become softmax weights") {
    svmma::IcScore s;
    s.which = svmma::IcKind::SVMICL;
    s.model_sizes = {1, 2};

    const double n = 50.0;
    s.per_model = {0.0, n * std::log(2.0)};
    auto w = svmma::smoothed_ic_weights(s, 50);
    REQUIRE(w.values.size() == 2);
    CHECK(w.values[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(w.values[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(w.on_simplex(1e-12));

    s.per_model = {7.0, 7.0, 7.0};
    s.model_sizes = {1, 2, 3};
    w = svmma::smoothed_ic_weights(s, 10);
    for (double v : w.values) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // A score far below all others takes essentially all the weight.
    s.per_model = {0.0, 50.0 * 10.0 + 100.0, 50.0 * 10.0 + 200.0};
    w = svmma::smoothed_ic_weights(s, 10);
    CHECK(w.values[0] == doctest::Approx(1.0).epsilon(1e-10));

    // Shift invariance: adding a constant to every score changes nothing.
    svmma::RngStream rng(61001);
    for (int rep = 0; rep < 200; ++rep) {
        svmma::IcScore a;
        a.which = svmma::IcKind::SVMICH;
        a.model_sizes = {1, 2, 3, 4};
        a.per_model.resize(4);
        for (auto& v : a.per_model) v = 30.0 * rng.normal();
        svmma::IcScore b = a;
        const double c = 100.0 * rng.normal();
        for (auto& v : b.per_model) v += c;
        const auto wa = svmma::smoothed_ic_weights(a, 17);
        const auto wb = svmma::smoothed_ic_weights(b, 17);
        for (std::size_t k = 0; k < 4; ++k)
            CHECK(wa.values[k] == doctest::Approx(wb.values[k]).epsilon(1e-12));
        CHECK(wa.on_simplex(1e-12));
    }
}

TEST_CASE("the heavier penalty never selects a larger model") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        Fixture f = make_fixture(61100 + seed, 60, 5, 5);
        const auto low = svmma::ic_scores(f.x, f.y, f.refit.embedded, f.cands, svmma::IcKind::SVMICL);
        const auto high = svmma::ic_scores(f.x, f.y, f.refit.embedded, f.cands, svmma::IcKind::SVMICH);
        const auto wl = svmma::select_by_ic(low);
        const auto wh = svmma::select_by_ic(high);
        std::size_t size_low = 0, size_high = 0;
        for (std::size_t s = 0; s < 5; ++s) {
            if (wl.values[s] == 1.0) size_low = low.model_sizes[s];
            if (wh.values[s] == 1.0) size_high = high.model_sizes[s];
        }
        CAPTURE(seed);
        CHECK(size_high <= size_low);
    }
}

TEST_CASE("uniform weights spread mass equally") {
    auto w = svmma::uniform_weights(4);
    REQUIRE(w.values.size() == 4);
    for (double v : w.values) CHECK(v == 0.25);
    w = svmma::uniform_weights(1);
    CHECK(w.values == std::vector<double>{1.0});
    svmma::RngStream rng(61002);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t s = 1 + rng.uniform_index(30);
        CHECK(svmma::uniform_weights(s).on_simplex(1e-12));
    }
    CHECK_THROWS_AS(svmma::uniform_weights(0), std::invalid_argument);
}

TEST_CASE("bagging is deterministic and follows the documented resampling scheme") {
    Fixture f = make_fixture(61003, 40, 3, 2);
    svmma::EnsembleConfig cfg;
    cfg.rounds = 5;
    cfg.seed = 999;

    const auto a = svmma::fit_bagging(f.x, f.y, f.cands, cfg);
    const auto b = svmma::fit_bagging(f.x, f.y, f.cands, cfg);
    REQUIRE(a.learners.size() == 5);
    for (std::size_t t = 0; t < 5; ++t) {
        CHECK(a.learners[t].intercept == b.learners[t].intercept);
        CHECK(a.learners[t].beta == b.learners[t].beta);
    }

    // Round 1 reproduces exactly: draw the same bootstrap indices from the
    // same stream, fit candidate 1 with penalty 1/n, embed.
    svmma::RngStream rng(999);
    const std::size_t n = f.x.rows();
    svmma::Matrix xboot(n, f.x.cols());
    std::vector<double> yboot(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t r = rng.uniform_index(n);
        yboot[k] = f.y[r];
        for (std::size_t c = 0; c < f.x.cols(); ++c) xboot(k, c) = f.x(r, c);
    }
    const auto xres = svmma::restrict_columns(xboot, f.cands.models[0]);
    const auto direct = svmma::train_l2_svm(xres, yboot, 1.0 / static_cast<double>(n));
    const auto expect = svmma::embed(direct.coef, f.cands.models[0], f.x.cols());
    CHECK(a.learners[0].intercept == doctest::Approx(expect.intercept).epsilon(1e-12));
    for (std::size_t c = 0; c < f.x.cols(); ++c)
        CHECK(a.learners[0].beta[c] == doctest::Approx(expect.beta[c]).epsilon(1e-12));

    // Single-round ensemble == that learner's prediction.
    svmma::EnsembleConfig one;
    one.rounds = 1;
    one.seed = 999;
    const auto solo = svmma::fit_bagging(f.x, f.y, f.cands, one);
    for (std::size_t i = 0; i < 8; ++i) {
        const double direct_label =
            svmma::label_from_score(svmma::margin(solo.learners[0], f.x.row(i)));
        CHECK(svmma::bagging_predict(solo, f.x.row(i)) == direct_label);
    }
}

TEST_CASE("unanimous base learners decide the bagging vote") {
    // Strongly separated data: every bootstrap fit predicts the true label.
    const std::size_t n = 60;
    svmma::Matrix x(n, 2);
    std::vector<double> y(n);
    svmma::RngStream rng(61004);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = (i % 2 == 0) ? 1.0 : -1.0;
        x(i, 0) = 4.0 * y[i] + 0.1 * rng.normal();
        x(i, 1) = 0.5 * rng.normal();
    }
    auto cands = identity_candidates(2, 2);
    svmma::EnsembleConfig cfg;
    cfg.rounds = 7;
    cfg.seed = 5;
    const auto model = svmma::fit_bagging(x, y, cands, cfg);
    std::vector<double> probe_pos = {4.0, 0.0};
    std::vector<double> probe_neg = {-4.0, 0.0};
    CHECK(svmma::bagging_predict(model, probe_pos) == 1.0);
    CHECK(svmma::bagging_predict(model, probe_neg) == -1.0);

    const auto labels = svmma::bagging_predict_labels(model, x);
    REQUIRE(labels.size() == n);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) correct += labels[i] == y[i];
    CHECK(correct == n);
}

TEST_CASE("adaboost with a perfect first learner reduces to that learner") {
    const std::size_t n = 50;
    svmma::Matrix x(n, 2);
    std::vector<double> y(n);
    svmma::RngStream rng(61005);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = (i % 2 == 0) ? 1.0 : -1.0;
        x(i, 0) = 3.0 * y[i];
        x(i, 1) = rng.normal();
    }
    auto cands = identity_candidates(2, 2);
    svmma::EnsembleConfig cfg;
    cfg.rounds = 4;
    const auto model = svmma::fit_adaboost(x, y, cands, cfg);
    CHECK_FALSE(model.degenerate);
    REQUIRE(!model.learners.empty());

    const auto labels = svmma::adaboost_predict_labels(model, x);
    std::size_t agree = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double first =
            svmma::label_from_score(svmma::margin(model.learners[0], x.row(i)));
        agree += labels[i] == first;
    }
    CHECK(agree == n);
}

TEST_CASE("adaboost on label noise degrades gracefully") {
    // Labels independent of the features: every learner sits near 50%
    // weighted error, so boosting stops early and falls back.
    const std::size_t n = 80;
    svmma::Matrix x(n, 2);
    std::vector<double> y(n);
    svmma::RngStream rng(61006);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = rng.bernoulli(0.5) ? 1.0 : -1.0;
        x(i, 0) = rng.normal();
        x(i, 1) = rng.normal();
    }
    auto cands = identity_candidates(2, 2);
    svmma::EnsembleConfig cfg;
    cfg.rounds = 6;
    const auto model = svmma::fit_adaboost(x, y, cands, cfg);
    if (model.degenerate) {
        REQUIRE(model.learners.size() == 1);
        const auto labels = svmma::adaboost_predict_labels(model, x);
        for (std::size_t i = 0; i < n; ++i) {
            const double raw =
                svmma::label_from_score(svmma::margin(model.learners[0], x.row(i)));
            CHECK(labels[i] == raw);
        }
    } else {
        // Accepted: the fit found real structure in this draw; predictions
        // must still be valid labels.
        for (double v : svmma::adaboost_predict_labels(model, x))
            CHECK((v == 1.0 || v == -1.0));
    }
}

TEST_CASE("adaboost keeps its sample weights on the simplex after every round") {
    Fixture f = make_fixture(61007, 50, 4, 3);
    svmma::EnsembleConfig cfg;
    cfg.rounds = 5;
    std::vector<std::vector<double>> trace;
    const auto model = svmma::fit_adaboost(f.x, f.y, f.cands, cfg, &trace);
    REQUIRE(!trace.empty());
    for (const auto& weights : trace) {
        double sum = 0.0;
        for (double v : weights) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    // Determinism (no randomness in boosting at all).
    std::vector<std::vector<double>> trace2;
    const auto again = svmma::fit_adaboost(f.x, f.y, f.cands, cfg, &trace2);
    REQUIRE(again.alphas.size() == model.alphas.size());
    for (std::size_t t = 0; t < model.alphas.size(); ++t)
        CHECK(again.alphas[t] == model.alphas[t]);
    CHECK(trace2 == trace);
}
