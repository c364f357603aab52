#pragma once

#include <cstddef>
#include <vector>

#include "svmma/candidates.hpp"
#include "svmma/matrix.hpp"
#include "svmma/svm_solver.hpp"
#include "svmma/weight_vector.hpp"

namespace svmma {

// J-fold cross-validation machinery: fold layout, per-fold candidate fits,
// the n x S matrix of held-out margins, exact minimization of the CV hinge
// criterion over the weight simplex, full-data refits, and prediction.

struct FoldPlan {
    std::size_t folds = 0;      // J
    std::size_t base_size = 0;  // floor(n / J)
    std::vector<std::size_t> fold_of;            // row -> fold id (0-based)
    std::vector<std::vector<std::size_t>> rows;  // fold id -> row indices

    std::size_t n() const { return fold_of.size(); }
};

// Contiguous blocks of floor(n/J) rows; when J does not divide n, the first
// n - J*floor(n/J) folds take one extra row each. Requires 2 <= J <= n.
FoldPlan make_folds(std::size_t n, std::size_t folds);

struct FoldFits {
    // coef[j][s]: candidate s fit on the rows outside fold j, in the
    // submodel's own dimension (intercept + one beta per model feature).
    std::vector<std::vector<Coefficients>> coef;
    std::vector<std::vector<FitReport>> reports;
    bool all_converged = true;
};

// Fits every candidate on every fold complement with penalty
// 1/(rows used), warm-starting along the nested chain within each fold.
FoldFits fit_fold_models(const Matrix& x, const std::vector<double>& y,
                         const CandidateSet& cands, const FoldPlan& plan);

// Held-out margins: entry (i, s) is y_i times the score of candidate s's
// fit from the fold plan cell that excludes row i's own fold.
Matrix build_cv_margins(const Matrix& x, const std::vector<double>& y,
                        const CandidateSet& cands, const FoldPlan& plan,
                        const FoldFits& fits);

// (1/n) sum_i hinge(z_i . w): the CV criterion as a function of the weights;
// exact because the held-out margin is linear in w.
double cv_criterion(const Matrix& z, const std::vector<double>& w);

struct WeightSolution {
    WeightVector weights;
    double objective = 0.0;  // criterion value attained by `weights`
    bool converged = false;  // certified within tolerance of the optimum
};

// Minimizes cv_criterion over the probability simplex exactly via linear
// programming; deterministic for fixed input. The returned objective is
// always the value actually attained by the returned weights.
WeightSolution solve_weights(const Matrix& z, double tolerance = 1e-6);

struct FullRefit {
    std::vector<Coefficients> embedded;  // full-length coefficients per candidate
    std::vector<FitReport> reports;
    bool all_converged = true;
};

// Refits every candidate on all n rows with penalty 1/n (the same rule as
// the fold fits, with nothing held out) and embeds to full length.
FullRefit refit_full(const Matrix& x, const std::vector<double>& y,
                     const CandidateSet& cands);

// Classification rule: negative scores map to -1, everything else
// (including an exact 0) to +1.
double label_from_score(double score);

std::vector<double> predict_labels(const Matrix& x, const Coefficients& coef);

}  // namespace svmma
