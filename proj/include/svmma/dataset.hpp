#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "svmma/matrix.hpp"

namespace svmma {

// n samples by p features plus labels in {-1, +1}. The intercept column
// is implicit everywhere; features hold only the p covariates.
struct Dataset {
    Matrix features;                         // n x p
    std::vector<double> labels;              // n entries, each -1 or +1
    std::vector<std::string> feature_names;  // empty or p entries

    std::size_t n() const { return features.rows(); }
    std::size_t p() const { return features.cols(); }

    // Throws std::invalid_argument on any broken invariant.
    void validate() const;
};

struct StandardizationParams {
    std::vector<double> means;
    std::vector<double> scales;  // population sd; 0 marks a constant column
};

struct SplitSpec {
    double train_fraction = 0.8;  // g in (0,1)
    std::uint64_t seed = 0;
};

// Label column selector for CSV loading: by header name or 0-based index.
struct LabelColumn {
    std::string name;
    long index = -1;

    static LabelColumn by_name(std::string n) { return {std::move(n), -1}; }
    static LabelColumn by_index(long i) { return {{}, i}; }
    bool is_name() const { return index < 0; }
};

// Reads a comma-separated file with an optional header row. The label
// column must contain exactly two distinct values; the lexicographically
// larger one maps to +1. Remaining columns become features in file order.
Dataset load_csv(const std::string& path, const LabelColumn& label);

// Center each column and scale non-constant columns to unit population
// standard deviation. Constant columns are centered only.
std::pair<Dataset, StandardizationParams> standardize(const Dataset& train);

Dataset apply_standardization(const Dataset& data, const StandardizationParams& params);

// Random split into floor(g*N) training rows and the rest. Identical
// specs give identical partitions.
std::pair<Dataset, Dataset> split(const Dataset& data, const SplitSpec& spec);

}  // namespace svmma
