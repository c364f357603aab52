#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "svmma/candidates.hpp"
#include "svmma/matrix.hpp"
#include "svmma/svm_solver.hpp"
#include "svmma/weight_vector.hpp"

namespace svmma {

// Competing weighting and ensembling rules evaluated against the
// CV-weighted average: information-criterion selection (SVMICL/SVMICH),
// their softmax-smoothed variants (SCL/SCH), uniform weights, bagging, and
// discrete AdaBoost over the same candidate models.

enum class IcKind { SVMICL, SVMICH };

struct IcScore {
    std::vector<double> per_model;
    std::vector<std::size_t> model_sizes;  // covariate count per model (no intercept)
    IcKind which = IcKind::SVMICL;
};

// score_s = total training hinge loss of candidate s's full-data fit
// (unnormalized sum over rows) plus p_s * ln(n) for SVMICL or
// p_s * ln(n)^1.5 for SVMICH, where p_s counts the model's covariates.
IcScore ic_scores(const Matrix& x, const std::vector<double>& y,
                  const std::vector<Coefficients>& embedded_fits,
                  const CandidateSet& cands, IcKind which);

// Unit weight on the lowest score; ties go to the smaller model, then to
// the earlier candidate.
WeightVector select_by_ic(const IcScore& scores);

// softmax(-score/n), computed with max-subtraction so large scores cannot
// overflow, renormalized to sum exactly to one.
WeightVector smoothed_ic_weights(const IcScore& scores, std::size_t n);

WeightVector uniform_weights(std::size_t count);

struct EnsembleConfig {
    std::size_t rounds = 1;
    std::uint64_t seed = 0;  // used by bagging only; boosting is deterministic
};

// Base learners cycle through the candidate models round-robin: round t
// (1-based) uses candidate ((t-1) mod S)+1.

struct BaggingModel {
    std::vector<Coefficients> learners;  // full-length, one per round
    bool all_converged = true;
};

// Round t draws n row indices with replacement (consecutively from one
// generator seeded with cfg.seed), fits its candidate on the resample with
// penalty 1/n, and stores the embedded coefficients.
BaggingModel fit_bagging(const Matrix& x, const std::vector<double>& y,
                         const CandidateSet& cands, const EnsembleConfig& cfg);

// Majority vote over the per-learner signs; a tied vote returns +1.
double bagging_predict(const BaggingModel& model, std::span<const double> x);
std::vector<double> bagging_predict_labels(const BaggingModel& model, const Matrix& x);

struct AdaBoostModel {
    std::vector<double> alphas;
    std::vector<Coefficients> learners;  // full-length, one per kept round
    bool degenerate = false;  // first learner was no better than chance
    bool all_converged = true;
};

// Discrete AdaBoost with the candidates as base learners: sample weights
// start uniform; each round fits via the weighted hinge objective (penalty
// 1/n), measures the weighted 0-1 error eps, stops early when eps >= 1/2,
// clamps eps to [1e-8, 1-1e-8], sets alpha = ln((1-eps)/eps)/2, reweights
// by exp(-alpha y h(x)) and renormalizes. If the very first round stops
// early the model is degenerate and falls back to that learner's raw sign.
// weight_trace, when non-null, receives the sample weights after every
// completed round (for diagnostics).
AdaBoostModel fit_adaboost(const Matrix& x, const std::vector<double>& y,
                           const CandidateSet& cands, const EnsembleConfig& cfg,
                           std::vector<std::vector<double>>* weight_trace = nullptr);

// sign(sum_t alpha_t h_t(x)) with ties sent to +1.
double adaboost_predict(const AdaBoostModel& model, std::span<const double> x);
std::vector<double> adaboost_predict_labels(const AdaBoostModel& model, const Matrix& x);

}  // namespace svmma
