#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracle_grid.hpp"
#include "properties.hpp"
#include "svmma/candidates.hpp"
#include "svmma/cv_weighting.hpp"
#include "svmma/dgp.hpp"
#include "svmma/rng.hpp"
#include "svmma/screening.hpp"

namespace {

std::vector<double> random_simplex_point(svmma::RngStream& rng, std::size_t dim) {
    std::vector<double> w(dim);
    double sum = 0.0;
    for (auto& v : w) {
        v = -std::log(std::max(rng.uniform01(), 1e-300));
        sum += v;
    }
    for (auto& v : w) v /= sum;
    return w;
}

svmma::Matrix random_margins(svmma::RngStream& rng, std::size_t n, std::size_t s) {
    svmma::Matrix z(n, s);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < s; ++j) z(i, j) = 2.5 * rng.normal();
    return z;
}

// Small pipeline fixture: data, screening-free nested candidates over the
// first few raw features, folds, and fold fits.
struct Pipeline {
    svmma::Matrix x{0, 0};
    std::vector<double> y;
    svmma::CandidateSet cands;
    svmma::FoldPlan plan;
    svmma::FoldFits fits;
};

Pipeline make_pipeline(std::uint64_t seed, std::size_t n, std::size_t p,
                       std::size_t n_models, std::size_t folds) {
    svmma::DgpConfig dcfg;
    dcfg.which = svmma::DgpKind::DGP1;
    dcfg.n = n;
    dcfg.p = p;
    dcfg.q = std::max<std::size_t>(1, p / 2);
    dcfg.seed = seed;
    const auto data = svmma::generate(dcfg);

    svmma::FeatureOrdering ord;
    ord.order.resize(p + 1);
    for (std::size_t j = 0; j <= p; ++j) ord.order[j] = j;
    ord.first_zero_step.assign(p + 1, svmma::FeatureOrdering::kNeverZero);

    Pipeline pipe;
    pipe.x = data.features;
    pipe.y = data.labels;
    pipe.cands = svmma::build_candidates(ord, n_models);
    pipe.plan = svmma::make_folds(n, folds);
    pipe.fits = svmma::fit_fold_models(pipe.x, pipe.y, pipe.cands, pipe.plan);
    return pipe;
}

}  // namespace

TEST_CASE("folds are contiguous blocks with the remainder spread over the first folds") {
    const auto even = svmma::make_folds(10, 5);
    CHECK(even.base_size == 2);
    REQUIRE(even.rows.size() == 5);
    for (const auto& rows : even.rows) CHECK(rows.size() == 2);

    const auto uneven = svmma::make_folds(11, 5);
    CHECK(uneven.base_size == 2);
    REQUIRE(uneven.rows.size() == 5);
    CHECK(uneven.rows[0].size() == 3);
    for (std::size_t j = 1; j < 5; ++j) CHECK(uneven.rows[j].size() == 2);

    const auto hundred = svmma::make_folds(100, 5);
    CHECK(hundred.base_size == 20);

    // Partition + contiguity: fold ids are non-decreasing and cover all rows.
    std::size_t total = 0;
    for (std::size_t j = 0; j < uneven.rows.size(); ++j) {
        for (std::size_t r : uneven.rows[j]) {
            CHECK(uneven.fold_of[r] == j);
            ++total;
        }
    }
    CHECK(total == 11);
    for (std::size_t i = 1; i < uneven.fold_of.size(); ++i)
        CHECK(uneven.fold_of[i] >= uneven.fold_of[i - 1]);

    CHECK_THROWS_AS(svmma::make_folds(10, 1), std::invalid_argument);
    CHECK_THROWS_AS(svmma::make_folds(4, 5), std::invalid_argument);
}

TEST_CASE("fold fits use the complement rows and the one-over-rows penalty") {
    const auto pipe = make_pipeline(81001, 100, 4, 2, 5);
    REQUIRE(pipe.fits.coef.size() == 5);
    REQUIRE(pipe.fits.coef[0].size() == 2);
    CHECK(pipe.fits.all_converged);

    // Reproduce cell (fold 0, candidate 1) with a direct, cold call: the
    // complement has 80 rows, so the penalty must be 1/80.
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < 100; ++i)
        if (pipe.plan.fold_of[i] != 0) rows.push_back(i);
    REQUIRE(rows.size() == 80);
    const auto xres = svmma::restrict_columns(pipe.x, pipe.cands.models[0]);
    svmma::Matrix xsub(rows.size(), xres.cols());
    std::vector<double> ysub(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        ysub[k] = pipe.y[rows[k]];
        for (std::size_t j = 0; j < xres.cols(); ++j) xsub(k, j) = xres(rows[k], j);
    }
    const auto direct = svmma::train_l2_svm(xsub, ysub, 1.0 / 80.0);
    REQUIRE(direct.report.converged);
    const auto& cell = pipe.fits.coef[0][0];
    CHECK(cell.intercept == doctest::Approx(direct.coef.intercept).epsilon(1e-9));
    REQUIRE(cell.beta.size() == direct.coef.beta.size());
    for (std::size_t j = 0; j < cell.beta.size(); ++j)
        CHECK(cell.beta[j] == doctest::Approx(direct.coef.beta[j]).epsilon(1e-9));
}

TEST_CASE("larger nested candidates never fit worse on their own objective") {
    const auto pipe = make_pipeline(81002, 60, 5, 4, 3);
    for (std::size_t j = 0; j < pipe.fits.reports.size(); ++j) {
        for (std::size_t s = 0; s + 1 < pipe.fits.reports[j].size(); ++s) {
            const auto& small = pipe.fits.reports[j][s];
            const auto& big = pipe.fits.reports[j][s + 1];
            REQUIRE(small.converged);
            REQUIRE(big.converged);
            // Embedding the smaller model's fit into the bigger model's
            // space attains the same objective, so the bigger optimum
            // cannot exceed it beyond certificate slack.
            CHECK(big.objective <= small.objective + small.duality_gap + big.duality_gap + 1e-9);
        }
    }
}

TEST_CASE("margin matrix agrees with the embed-then-score path") {
    const auto pipe = make_pipeline(81003, 25, 4, 3, 5);
    const auto z = svmma::build_cv_margins(pipe.x, pipe.y, pipe.cands, pipe.plan, pipe.fits);
    REQUIRE(z.rows() == 25);
    REQUIRE(z.cols() == 3);

    const std::size_t p = pipe.x.cols();
    for (std::size_t i = 0; i < z.rows(); ++i) {
        const std::size_t j = pipe.plan.fold_of[i];
        for (std::size_t s = 0; s < z.cols(); ++s) {
            const auto full = svmma::embed(pipe.fits.coef[j][s], pipe.cands.models[s], p);
            const double expect = pipe.y[i] * svmma::margin(full, pipe.x.row(i));
            CHECK(z(i, s) == doctest::Approx(expect).epsilon(1e-12));
        }
    }

    // The criterion evaluated through Z matches the direct evaluation that
    // averages the embedded fold fits first.
    svmma::RngStream rng(81004);
    for (int rep = 0; rep < 50; ++rep) {
        const auto w = random_simplex_point(rng, z.cols());
        double direct = 0.0;
        for (std::size_t i = 0; i < z.rows(); ++i) {
            const std::size_t j = pipe.plan.fold_of[i];
            svmma::WeightVector wv;
            wv.values = w;
            std::vector<svmma::Coefficients> emb;
            for (std::size_t s = 0; s < z.cols(); ++s)
                emb.push_back(svmma::embed(pipe.fits.coef[j][s], pipe.cands.models[s], p));
            const auto avg = svmma::average_coefficients(emb, wv);
            direct += svmma::hinge(pipe.y[i] * svmma::margin(avg, pipe.x.row(i)));
        }
        direct /= static_cast<double>(z.rows());
        const double via_z = svmma::cv_criterion(z, w);
        CHECK(via_z == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("criterion reproduces a hand-computed example and the zero-fit case") {
    svmma::Matrix z(4, 2);
    z(0, 0) = 2.0;  z(0, 1) = 0.0;
    z(1, 0) = 0.0;  z(1, 1) = 2.0;
    z(2, 0) = -1.0; z(2, 1) = 1.0;
    z(3, 0) = 1.0;  z(3, 1) = -1.0;
    CHECK(svmma::cv_criterion(z, {0.5, 0.5}) == doctest::Approx(0.5).epsilon(1e-15));

    svmma::Matrix zeros(6, 3);
    svmma::RngStream rng(81005);
    for (int rep = 0; rep < 10; ++rep) {
        const auto w = random_simplex_point(rng, 3);
        CHECK(svmma::cv_criterion(zeros, w) == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("single-candidate weights are trivial") {
    svmma::RngStream rng(81006);
    const auto z = random_margins(rng, 17, 1);
    const auto sol = svmma::solve_weights(z);
    REQUIRE(sol.converged);
    REQUIRE(sol.weights.values.size() == 1);
    CHECK(sol.weights.values[0] == 1.0);
    CHECK(sol.objective == doctest::Approx(svmma::cv_criterion(z, {1.0})).epsilon(1e-15));
}

TEST_CASE("a dominant margin column takes all the weight's value") {
    svmma::RngStream rng(81007);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 10 + rng.uniform_index(20);
        svmma::Matrix z(n, 3);
        for (std::size_t i = 0; i < n; ++i) {
            z(i, 1) = 2.0 * rng.normal();
            z(i, 2) = z(i, 1) - 1.5 * rng.uniform01();
            z(i, 0) = z(i, 1) + 0.5 + rng.uniform01();  // strictly best margin every row
        }
        const auto sol = svmma::solve_weights(z);
        REQUIRE(sol.converged);
        const double best = svmma::cv_criterion(z, {1.0, 0.0, 0.0});
        CHECK(sol.objective == doctest::Approx(best).epsilon(1e-9));
        CHECK(sol.objective <= best + 1e-9);
    }
}

TEST_CASE("weights beat a fine simplex grid up to grid resolution") {
    svmma::RngStream rng(81008);
    for (int rep = 0; rep < 8; ++rep) {
        const std::size_t n = 25;
        const std::size_t s = 2 + rng.uniform_index(2);  // 2 or 3 columns
        const auto z = random_margins(rng, n, s);
        const auto sol = svmma::solve_weights(z);
        REQUIRE(sol.converged);
        CHECK(sol.weights.on_simplex(1e-10));

        const auto grid = oracle::simplex_grid_minimize(
            [&](const std::vector<double>& w) { return svmma::cv_criterion(z, w); }, s, 200);

        double lip = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double row_max = 0.0;
            for (std::size_t c = 0; c < s; ++c) row_max = std::max(row_max, std::abs(z(i, c)));
            lip += row_max;
        }
        lip /= static_cast<double>(n);
        const double slack = 2.0 * (1.0 / 200.0) * lip;
        CHECK(sol.objective <= grid.value + 1e-9);
        CHECK(sol.objective >= grid.value - slack - 1e-9);
    }
}

TEST_CASE("no random simplex point beats the returned weights") {
    svmma::RngStream rng(81009);
    const auto z = random_margins(rng, 30, 4);
    const auto sol = svmma::solve_weights(z);
    REQUIRE(sol.converged);
    std::size_t tried = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const auto v = random_simplex_point(rng, 4);
        CHECK(sol.objective <= svmma::cv_criterion(z, v) + 1e-9);
        ++tried;
    }
    CHECK(tried == 1000);
}

TEST_CASE("duplicating a candidate column leaves the optimum unchanged") {
    svmma::RngStream rng(81010);
    for (int rep = 0; rep < 10; ++rep) {
        const auto z = random_margins(rng, 20, 3);
        svmma::Matrix zdup(20, 4);
        for (std::size_t i = 0; i < 20; ++i) {
            for (std::size_t c = 0; c < 3; ++c) zdup(i, c) = z(i, c);
            zdup(i, 3) = z(i, 1);
        }
        const auto base = svmma::solve_weights(z);
        const auto dup = svmma::solve_weights(zdup);
        REQUIRE(base.converged);
        REQUIRE(dup.converged);
        CHECK(dup.objective == doctest::Approx(base.objective).epsilon(1e-9));
    }
}

TEST_CASE("the criterion is convex in the weights") {
    svmma::RngStream rng(81011);
    const auto z = random_margins(rng, 22, 3);
    for (int rep = 0; rep < 500; ++rep) {
        const auto w1 = random_simplex_point(rng, 3);
        const auto w2 = random_simplex_point(rng, 3);
        const double t = rng.uniform01();
        std::vector<double> mix(3);
        for (std::size_t c = 0; c < 3; ++c) mix[c] = t * w1[c] + (1.0 - t) * w2[c];
        const double lhs = svmma::cv_criterion(z, mix);
        const double rhs = t * svmma::cv_criterion(z, w1) + (1.0 - t) * svmma::cv_criterion(z, w2);
        CHECK(lhs <= rhs + 1e-12);
    }
}

TEST_CASE("weight solving is deterministic") {
    svmma::RngStream rng(81012);
    const auto z = random_margins(rng, 40, 5);
    const auto a = svmma::solve_weights(z);
    const auto b = svmma::solve_weights(z);
    CHECK(a.objective == b.objective);
    REQUIRE(a.weights.values.size() == b.weights.values.size());
    for (std::size_t c = 0; c < a.weights.values.size(); ++c)
        CHECK(a.weights.values[c] == b.weights.values[c]);
}

TEST_CASE("full-data refits use the one-over-n penalty and embed to full length") {
    const auto pipe = make_pipeline(81013, 100, 4, 3, 5);
    const auto refit = svmma::refit_full(pipe.x, pipe.y, pipe.cands);
    REQUIRE(refit.embedded.size() == 3);
    CHECK(refit.all_converged);

    // Candidate 1 must match a direct cold fit with penalty 1/100 = 0.01.
    const auto xres = svmma::restrict_columns(pipe.x, pipe.cands.models[0]);
    const auto direct = svmma::train_l2_svm(xres, pipe.y, 0.01);
    const auto expect = svmma::embed(direct.coef, pipe.cands.models[0], pipe.x.cols());
    CHECK(refit.embedded[0].intercept == doctest::Approx(expect.intercept).epsilon(1e-9));
    for (std::size_t j = 0; j < expect.beta.size(); ++j)
        CHECK(refit.embedded[0].beta[j] == doctest::Approx(expect.beta[j]).epsilon(1e-9));

    // Coefficients outside each model's index set are exactly zero.
    for (std::size_t s = 0; s < refit.embedded.size(); ++s) {
        std::vector<char> inside(pipe.x.cols() + 1, 0);
        for (std::size_t j : pipe.cands.models[s].feature_indices) inside[j] = 1;
        for (std::size_t j = 1; j <= pipe.x.cols(); ++j)
            if (!inside[j]) CHECK(refit.embedded[s].beta[j - 1] == 0.0);
    }
}

TEST_CASE("labels come from the score sign with ties sent to plus one") {
    CHECK(svmma::label_from_score(0.3) == 1.0);
    CHECK(svmma::label_from_score(-0.3) == -1.0);
    CHECK(svmma::label_from_score(0.0) == 1.0);

    svmma::RngStream rng(81014);
    svmma::Matrix x(12, 3);
    for (std::size_t i = 0; i < 12; ++i)
        for (std::size_t j = 0; j < 3; ++j) x(i, j) = rng.normal();
    svmma::Coefficients coef;
    coef.intercept = 0.2;
    coef.beta = {0.5, -1.0, 0.25};
    const auto labels = svmma::predict_labels(x, coef);
    REQUIRE(labels.size() == 12);
    for (std::size_t i = 0; i < 12; ++i) {
        const double m = svmma::margin(coef, x.row(i));
        CHECK(labels[i] == (m < 0.0 ? -1.0 : 1.0));
    }
}
