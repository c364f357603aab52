#pragma once

#include <cstddef>
#include <vector>

#include "svmma/l1_svm.hpp"
#include "svmma/matrix.hpp"

namespace svmma {

// Feature screening by tracking an L1-penalized linear SVM across an
// ascending penalty grid. Features are ranked by how long their
// coefficients stay away from zero as the penalty grows: the longer a
// feature survives, the stronger it is considered.

struct ScreeningConfig {
    double grid_start = 0.001;     // first (smallest) penalty value
    double grid_end = 10.0;        // last (largest) penalty value
    std::size_t grid_steps = 50;   // number of increments; the grid has grid_steps+1 points
    double tolerance = 1e-6;       // LP optimality tolerance for each fit
    double zero_threshold = 1e-8;  // |coefficient| at or below this counts as zero
};

// Ranking produced by screen_features.
//
// order: position 0 holds the intercept marker (0); positions 1..p hold the
//   1-based feature indices from strongest (last to reach zero on the grid,
//   or never) to weakest (first to reach zero).
// first_zero_step: indexed by the same 1-based feature index; the grid step
//   l (0-based) at which the feature's coefficient was first observed at
//   zero, or kNeverZero if it stayed active through the whole grid. Entry 0
//   (the intercept marker) is always kNeverZero: the intercept is never
//   penalized.
struct FeatureOrdering {
    static constexpr long kNeverZero = -1;

    std::vector<std::size_t> order;
    std::vector<long> first_zero_step;
    bool all_fits_converged = true;
    std::size_t failed_fits = 0;
};

// Fits the L1-penalized SVM at each grid penalty value (ascending,
// warm-started) and assembles the ordering:
//   * a feature "dies" at the first grid step where |coefficient| <=
//     zero_threshold; later revivals do not change its rank;
//   * features dying at the same step are ordered among themselves by
//     ascending |coefficient| at the previous grid step, then ascending
//     index (the smaller the previous coefficient, the weaker);
//   * features still active at the last grid point outrank every feature
//     that died; the block is assembled by appending them in descending
//     |coefficient| at the final penalty (ties by ascending index) before
//     the final reversal.
// Labels must be +/-1. Throws std::invalid_argument on malformed input.
FeatureOrdering screen_features(const Matrix& x, const std::vector<double>& y,
                                const ScreeningConfig& cfg = {});

}  // namespace svmma
