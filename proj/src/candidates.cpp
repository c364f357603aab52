#include "svmma/candidates.hpp"

#include <set>
#include <stdexcept>

namespace svmma {

CandidateSet build_candidates(const FeatureOrdering& ordering, std::size_t count) {
    if (ordering.order.empty() || ordering.order[0] != 0)
        throw std::invalid_argument("build_candidates: ordering must start with the intercept marker");
    const std::size_t p = ordering.order.size() - 1;
    if (count < 1 || count > p)
        throw std::invalid_argument("build_candidates: need 1 <= count <= number of features");

    CandidateSet out;
    out.nested = true;
    out.models.resize(count);
    std::set<std::size_t> seen;
    for (std::size_t s = 0; s < count; ++s) {
        const std::size_t j = ordering.order[s + 1];
        if (j < 1 || j > p || !seen.insert(j).second)
            throw std::invalid_argument("build_candidates: ordering is not a valid permutation");
        if (s > 0) out.models[s].feature_indices = out.models[s - 1].feature_indices;
        out.models[s].feature_indices.push_back(j);
    }
    return out;
}

Matrix restrict_columns(const Matrix& x, const ModelSpec& spec) {
    const std::size_t p = x.cols();
    Matrix out(x.rows(), spec.feature_indices.size());
    for (std::size_t t = 0; t < spec.feature_indices.size(); ++t) {
        const std::size_t j = spec.feature_indices[t];
        if (j < 1 || j > p) throw std::out_of_range("restrict_columns: feature index out of range");
        for (std::size_t i = 0; i < x.rows(); ++i) out(i, t) = x(i, j - 1);
    }
    return out;
}

Coefficients embed(const Coefficients& sub, const ModelSpec& spec, std::size_t p) {
    if (sub.beta.size() != spec.feature_indices.size())
        throw std::invalid_argument("embed: coefficient/model dimension mismatch");
    Coefficients full;
    full.intercept = sub.intercept;
    full.beta.assign(p, 0.0);
    std::set<std::size_t> seen;
    for (std::size_t t = 0; t < spec.feature_indices.size(); ++t) {
        const std::size_t j = spec.feature_indices[t];
        if (j < 1 || j > p) throw std::out_of_range("embed: feature index out of range");
        if (!seen.insert(j).second) throw std::invalid_argument("embed: duplicate feature index");
        full.beta[j - 1] = sub.beta[t];
    }
    return full;
}

Coefficients average_coefficients(const std::vector<Coefficients>& embedded,
                                  const WeightVector& w) {
    if (embedded.empty() || embedded.size() != w.size())
        throw std::invalid_argument("average_coefficients: weight/model count mismatch");
    if (!w.on_simplex(1e-8))
        throw std::invalid_argument("average_coefficients: weights must lie on the simplex");
    const std::size_t p = embedded.front().beta.size();
    Coefficients out;
    out.beta.assign(p, 0.0);
    for (std::size_t s = 0; s < embedded.size(); ++s) {
        if (embedded[s].beta.size() != p)
            throw std::invalid_argument("average_coefficients: coefficient lengths differ");
        out.intercept += w.values[s] * embedded[s].intercept;
        for (std::size_t j = 0; j < p; ++j) out.beta[j] += w.values[s] * embedded[s].beta[j];
    }
    return out;
}

}  // namespace svmma
