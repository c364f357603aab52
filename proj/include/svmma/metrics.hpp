#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "svmma/cv_weighting.hpp"
#include "svmma/matrix.hpp"
#include "svmma/svm_solver.hpp"
#include "svmma/weight_vector.hpp"

namespace svmma {

// Fraction of entries where the two label vectors disagree.
double error_rate(const std::vector<double>& predictions, const std::vector<double>& truth);

// Signed test scores: entry (i, s) = y_i * (fit_s intercept + beta . x_i),
// with full-length (embedded) coefficient vectors.
Matrix margin_matrix(const Matrix& x, const std::vector<double>& y,
                     const std::vector<Coefficients>& embedded_fits);

// The best achievable average hinge loss on the given margins over all
// simplex weightings: the denominator shared by every method's normalized
// loss on one replication. `separable` marks a denominator too close to
// zero to divide by (some combination classifies the sample perfectly).
struct NhlDenominator {
    double value = 0.0;
    WeightVector weights;
    bool converged = false;
    bool separable = false;
};

NhlDenominator nhl_denominator(const Matrix& margins, double tolerance = 1e-6);

// Normalized hinge loss of one method on one replication: the method's
// average test hinge divided by the best achievable value. Empty when the
// replication is separable (the ratio is undefined and the harness counts
// the exclusion instead).
std::optional<double> nhl(const Matrix& margins, const std::vector<double>& w_method,
                          const NhlDenominator& denom);

// One-shot convenience: builds the margin matrix and its own denominator.
std::optional<double> nhl(const Matrix& x_test, const std::vector<double>& y_test,
                          const std::vector<Coefficients>& embedded_fits,
                          const std::vector<double>& w_method);

}  // namespace svmma
