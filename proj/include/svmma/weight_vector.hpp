#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace svmma {

// Convex-combination weights over a set of candidate models.
struct WeightVector {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }

    // Nonnegative entries (each at most 1) summing to one within tol.
    bool on_simplex(double tol = 1e-10) const {
        if (values.empty()) return false;
        double sum = 0.0;
        for (double v : values) {
            if (v < -tol || v > 1.0 + tol) return false;
            sum += v;
        }
        return std::abs(sum - 1.0) <= tol;
    }
};

}  // namespace svmma
