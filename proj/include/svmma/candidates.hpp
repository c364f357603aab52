#pragma once

#include <cstddef>
#include <vector>

#include "svmma/matrix.hpp"
#include "svmma/screening.hpp"
#include "svmma/svm_solver.hpp"
#include "svmma/weight_vector.hpp"

namespace svmma {

// One candidate model: a subset of features, always fit with an intercept.
// Indices are 1-based (matching FeatureOrdering) and kept in model order.
struct ModelSpec {
    std::vector<std::size_t> feature_indices;

    std::size_t size() const { return feature_indices.size(); }
};

struct CandidateSet {
    std::vector<ModelSpec> models;
    bool nested = false;

    std::size_t size() const { return models.size(); }
};

// Candidate s (1-based) = intercept + the strongest s features of the
// ordering, so the models form a strictly nested chain. count must be
// between 1 and the number of available features.
CandidateSet build_candidates(const FeatureOrdering& ordering, std::size_t count);

// Column subset of x in the model's order (1-based indices). Throws
// std::out_of_range on a bad index.
Matrix restrict_columns(const Matrix& x, const ModelSpec& spec);

// Places a submodel's coefficients into a full-length vector: entry k of
// sub.beta lands at position feature_indices[k], every other position is
// exactly zero, and the intercept is copied through. This is the selection-
// matrix mapping, applied by index instead of materializing the matrix.
Coefficients embed(const Coefficients& sub, const ModelSpec& spec, std::size_t p);

// Entrywise convex combination of same-length coefficient vectors.
Coefficients average_coefficients(const std::vector<Coefficients>& embedded,
                                  const WeightVector& w);

}  // namespace svmma
