#include <cmath>

#include "doctest.h"
#include "properties.hpp"
#include "svmma/l1_svm.hpp"

using svmma::Matrix;

TEST_CASE("a dominant penalty zeroes every coefficient") {
    svmma::RngStream rng(17);
    auto inst = props::random_instance(rng, 25, 4, false);
    const auto fit = svmma::train_l1_svm(inst.x, inst.y, 50.0);
    REQUIRE(fit.report.converged);
    for (double b : fit.coef.beta) CHECK(std::abs(b) < 1e-10);
    // with beta = 0 the best objective is the intercept-only hinge optimum
    std::size_t pos = 0;
    for (double y : inst.y)
        if (y > 0.0) ++pos;
    const std::size_t neg = inst.y.size() - pos;
    const double expect =
        2.0 * static_cast<double>(std::min(pos, neg)) / static_cast<double>(inst.y.size());
    CHECK(fit.report.objective == doctest::Approx(expect).epsilon(1e-7));
}

TEST_CASE("zero penalty achieves zero loss on separable data") {
    Matrix x(6, 2);
    std::vector<double> y(6);
    for (std::size_t i = 0; i < 6; ++i) {
        const double side = (i < 3) ? 1.0 : -1.0;
        x(i, 0) = side * (1.0 + static_cast<double>(i) * 0.1);
        x(i, 1) = 0.3 * static_cast<double>(i);
        y[i] = side;
    }
    const auto fit = svmma::train_l1_svm(x, y, 0.0);
    REQUIRE(fit.report.converged);
    CHECK(fit.report.objective == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("reported objective matches an independent recomputation") {
    svmma::RngStream rng(23);
    auto inst = props::random_instance(rng, 30, 3, false);
    const auto fit = svmma::train_l1_svm(inst.x, inst.y, 0.05);
    REQUIRE(fit.report.converged);
    const double direct = svmma::objective_l1(inst.x, inst.y, fit.coef, 0.05);
    CHECK(fit.report.objective == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("duplication equals weight two") {
    svmma::RngStream rng(29);
    auto inst = props::random_instance(rng, 15, 2, false);
    const std::size_t n = inst.x.rows(), p = inst.x.cols();
    Matrix x2(n + 1, p);
    std::vector<double> y2(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) x2(i, j) = inst.x(i, j);
        y2[i] = inst.y[i];
    }
    for (std::size_t j = 0; j < p; ++j) x2(n, j) = inst.x(0, j);
    y2[n] = inst.y[0];
    std::vector<double> w(n, 1.0);
    w[0] = 2.0;
    const auto dup = svmma::train_l1_svm(x2, y2, 0.1);
    const auto wt = svmma::train_l1_svm(inst.x, inst.y, 0.1, {}, &w);
    CHECK(dup.report.objective == doctest::Approx(wt.report.objective).epsilon(1e-9));
}

TEST_CASE("penalty monotonicity of the l1 norm") {
    svmma::RngStream rng(37);
    auto inst = props::random_instance(rng, 30, 4, false);
    double last = 1e100;
    for (double lambda : {0.001, 0.01, 0.1, 1.0}) {
        const auto fit = svmma::train_l1_svm(inst.x, inst.y, lambda);
        REQUIRE(fit.report.converged);
        double l1 = 0.0;
        for (double b : fit.coef.beta) l1 += std::abs(b);
        CHECK(l1 <= last + 1e-8);
        last = l1;
    }
}

TEST_CASE("path solver validates inputs") {
    Matrix x(2, 1, 1.0);
    std::vector<double> y{1.0, -1.0};
    svmma::L1PathSolver path(x, y);
    CHECK_THROWS_AS(path.solve(-0.5), std::invalid_argument);
    std::vector<double> bad{1.0, 3.0};
    CHECK_THROWS_AS(svmma::L1PathSolver(x, bad), std::invalid_argument);
}

TEST_CASE("solver matches the lattice reference (small)") {
    const auto r = props::prop_l1_grid_agreement(9, 601);
    INFO(r.first_failure);
    CHECK(r.ok());
}

TEST_CASE("warm path equals cold solves (small)") {
    const auto r = props::prop_l1_path_matches_cold(25, 602);
    INFO(r.first_failure);
    CHECK(r.ok());
}
