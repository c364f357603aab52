#include "svmma/screening.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace svmma {

FeatureOrdering screen_features(const Matrix& x, const std::vector<double>& y,
                                const ScreeningConfig& cfg) {
    if (!(cfg.grid_start > 0.0) || !(cfg.grid_end > cfg.grid_start))
        throw std::invalid_argument("screen_features: need 0 < grid_start < grid_end");
    if (cfg.grid_steps < 1)
        throw std::invalid_argument("screen_features: grid_steps must be at least 1");
    if (cfg.tolerance < 0.0 || cfg.zero_threshold < 0.0)
        throw std::invalid_argument("screen_features: tolerances must be nonnegative");
    if (x.rows() != y.size())
        throw std::invalid_argument("screen_features: row/label count mismatch");
    validate_binary_labels(y);

    const std::size_t p = x.cols();
    FeatureOrdering out;
    out.first_zero_step.assign(p + 1, FeatureOrdering::kNeverZero);

    L1SolverConfig solver_cfg;
    solver_cfg.tol = cfg.tolerance;
    L1PathSolver path(x, y, solver_cfg);

    std::vector<std::size_t> ranked;  // earliest zero first; reversed at the end
    ranked.reserve(p + 1);
    std::vector<double> prev_abs(p, 0.0);  // |coefficient| at the previous grid step
    std::vector<char> done(p + 1, 0);
    std::vector<double> final_abs(p, 0.0);

    for (std::size_t l = 0; l <= cfg.grid_steps; ++l) {
        const double lambda =
            cfg.grid_start + (cfg.grid_end - cfg.grid_start) * static_cast<double>(l) /
                                 static_cast<double>(cfg.grid_steps);
        const L1FitResult fit = path.solve(lambda);
        if (!fit.report.converged) {
            out.all_fits_converged = false;
            ++out.failed_fits;
        }

        std::vector<std::size_t> newly;
        for (std::size_t j = 1; j <= p; ++j)
            if (!done[j] && std::abs(fit.coef.beta[j - 1]) <= cfg.zero_threshold)
                newly.push_back(j);
        // Weakest first within the step: smaller coefficient one step earlier,
        // then smaller index.
        std::sort(newly.begin(), newly.end(), [&](std::size_t a, std::size_t b) {
            if (prev_abs[a - 1] != prev_abs[b - 1]) return prev_abs[a - 1] < prev_abs[b - 1];
            return a < b;
        });
        for (std::size_t j : newly) {
            done[j] = 1;
            out.first_zero_step[j] = static_cast<long>(l);
            ranked.push_back(j);
        }

        for (std::size_t j = 1; j <= p; ++j) prev_abs[j - 1] = std::abs(fit.coef.beta[j - 1]);
        if (l == cfg.grid_steps)
            for (std::size_t j = 1; j <= p; ++j) final_abs[j - 1] = std::abs(fit.coef.beta[j - 1]);
    }

    // Features still active at the end of the grid are appended after all
    // deaths, ordered by descending final coefficient; the reversal below
    // then places the whole block ahead of every feature that died.
    std::vector<std::size_t> survivors;
    for (std::size_t j = 1; j <= p; ++j)
        if (!done[j]) survivors.push_back(j);
    std::sort(survivors.begin(), survivors.end(), [&](std::size_t a, std::size_t b) {
        if (final_abs[a - 1] != final_abs[b - 1]) return final_abs[a - 1] > final_abs[b - 1];
        return a < b;
    });
    ranked.insert(ranked.end(), survivors.begin(), survivors.end());

    ranked.push_back(0);  // the unpenalized intercept outranks everything
    std::reverse(ranked.begin(), ranked.end());
    out.order = std::move(ranked);
    return out;
}

}  // namespace svmma
