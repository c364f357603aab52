#include "svmma/metrics.hpp"

#include <stdexcept>

namespace svmma {

double error_rate(const std::vector<double>& predictions, const std::vector<double>& truth) {
    if (predictions.size() != truth.size() || predictions.empty())
        throw std::invalid_argument("error_rate: need equal nonzero lengths");
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) wrong += predictions[i] != truth[i];
    return static_cast<double>(wrong) / static_cast<double>(truth.size());
}

Matrix margin_matrix(const Matrix& x, const std::vector<double>& y,
                     const std::vector<Coefficients>& embedded_fits) {
    if (y.size() != x.rows())
        throw std::invalid_argument("margin_matrix: row counts disagree");
    if (embedded_fits.empty())
        throw std::invalid_argument("margin_matrix: no fits");
    Matrix z(x.rows(), embedded_fits.size());
    for (std::size_t s = 0; s < embedded_fits.size(); ++s) {
        if (embedded_fits[s].beta.size() != x.cols())
            throw std::invalid_argument("margin_matrix: fits must be embedded to full length");
        for (std::size_t i = 0; i < x.rows(); ++i)
            z(i, s) = y[i] * margin(embedded_fits[s], x.row(i));
    }
    return z;
}

NhlDenominator nhl_denominator(const Matrix& margins, double tolerance) {
    const WeightSolution sol = solve_weights(margins, tolerance);
    NhlDenominator out;
    out.value = sol.objective;
    out.weights = sol.weights;
    out.converged = sol.converged;
    out.separable = sol.objective <= 1e-12;
    return out;
}

std::optional<double> nhl(const Matrix& margins, const std::vector<double>& w_method,
                          const NhlDenominator& denom) {
    if (denom.separable) return std::nullopt;
    return cv_criterion(margins, w_method) / denom.value;
}

std::optional<double> nhl(const Matrix& x_test, const std::vector<double>& y_test,
                          const std::vector<Coefficients>& embedded_fits,
                          const std::vector<double>& w_method) {
    const Matrix z = margin_matrix(x_test, y_test, embedded_fits);
    return nhl(z, w_method, nhl_denominator(z));
}

}  // namespace svmma
