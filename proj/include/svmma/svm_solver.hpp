#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "svmma/matrix.hpp"

namespace svmma {

// Linear decision function f(x) = intercept + beta' x.
struct Coefficients {
    double intercept = 0.0;
    std::vector<double> beta;
};

// intercept + beta' x; x must have exactly beta.size() entries.
double margin(const Coefficients& coef, std::span<const double> x);

// hinge(m) = max(0, 1 - m)
double hinge(double m);

// Rescales nonnegative per-sample weights to mean one, so that giving a row
// weight 2 is the same as duplicating it. A null pointer means unit weights.
std::vector<double> normalize_sample_weights(std::size_t n,
                                             const std::vector<double>* raw);

// Throws unless every label is +1 or -1.
void validate_binary_labels(const std::vector<double>& y);

// (lambda/2) ||beta||^2 + (1/n) sum_i v_i max(0, 1 - y_i f(x_i)), where v are
// the normalized sample weights. The intercept is not penalized.
double objective_l2(const Matrix& x, const std::vector<double>& y,
                    const Coefficients& coef, double lambda,
                    const std::vector<double>* sample_weights = nullptr);

struct L2SolverConfig {
    double tol = 1e-8;                // relative duality-gap target
    std::size_t max_iterations = 200000;
    std::size_t check_interval = 64;  // iterations between gap certificates
};

struct FitReport {
    bool converged = false;
    double duality_gap = 0.0;
    double objective = 0.0;
    std::size_t iterations = 0;
};

struct FitResult {
    Coefficients coef;
    FitReport report;
};

// Trains an L2-penalized linear SVM:
//
//   min_{b, beta}  (lambda/2) ||beta||^2
//                  + (1/n) sum_i v_i max(0, 1 - y_i (beta' x_i + b))
//
// The fit carries an optimality certificate: report.duality_gap is the primal
// objective minus a valid dual lower bound, so report.objective is within
// duality_gap of the true minimum. converged is set when the gap meets
// cfg.tol * max(1, |objective|). Non-convergence is reported, never thrown.
//
// lambda == 0 solves the unpenalized hinge minimization by linear
// programming instead (exact, so the certificate is the LP gap).
//
// warm_alpha, when given with matching size, seeds the dual variables
// (useful across fits that share rows but use different feature columns);
// alpha_out, when non-null, receives the final dual variables.
FitResult train_l2_svm(const Matrix& x, const std::vector<double>& y,
                       double lambda, const L2SolverConfig& cfg = {},
                       const std::vector<double>* sample_weights = nullptr,
                       const std::vector<double>* warm_alpha = nullptr,
                       std::vector<double>* alpha_out = nullptr);

}  // namespace svmma
