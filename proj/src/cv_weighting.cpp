#include "svmma/cv_weighting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "svmma/simplex.hpp"

namespace svmma {

FoldPlan make_folds(std::size_t n, std::size_t folds) {
    if (folds < 2 || folds > n)
        throw std::invalid_argument("make_folds: need 2 <= folds <= n");
    FoldPlan plan;
    plan.folds = folds;
    plan.base_size = n / folds;
    const std::size_t extra = n - folds * plan.base_size;
    plan.fold_of.resize(n);
    plan.rows.resize(folds);
    std::size_t next = 0;
    for (std::size_t j = 0; j < folds; ++j) {
        const std::size_t size = plan.base_size + (j < extra ? 1 : 0);
        plan.rows[j].reserve(size);
        for (std::size_t k = 0; k < size; ++k) {
            plan.fold_of[next] = j;
            plan.rows[j].push_back(next);
            ++next;
        }
    }
    return plan;
}

FoldFits fit_fold_models(const Matrix& x, const std::vector<double>& y,
                         const CandidateSet& cands, const FoldPlan& plan) {
    const std::size_t n = x.rows();
    if (plan.n() != n || y.size() != n)
        throw std::invalid_argument("fit_fold_models: row counts disagree");
    if (cands.models.empty())
        throw std::invalid_argument("fit_fold_models: no candidate models");

    FoldFits out;
    out.coef.resize(plan.folds);
    out.reports.resize(plan.folds);
    for (std::size_t j = 0; j < plan.folds; ++j) {
        std::vector<std::size_t> keep;
        keep.reserve(n - plan.rows[j].size());
        for (std::size_t i = 0; i < n; ++i)
            if (plan.fold_of[i] != j) keep.push_back(i);

        Matrix xsub(keep.size(), x.cols());
        std::vector<double> ysub(keep.size());
        for (std::size_t k = 0; k < keep.size(); ++k) {
            ysub[k] = y[keep[k]];
            for (std::size_t c = 0; c < x.cols(); ++c) xsub(k, c) = x(keep[k], c);
        }
        const double lambda = 1.0 / static_cast<double>(keep.size());

        std::vector<double> alpha;  // dual warm start carried along the nested chain
        out.coef[j].reserve(cands.size());
        out.reports[j].reserve(cands.size());
        for (std::size_t s = 0; s < cands.size(); ++s) {
            const Matrix xres = restrict_columns(xsub, cands.models[s]);
            const FitResult fit = train_l2_svm(xres, ysub, lambda, {}, nullptr,
                                               alpha.empty() ? nullptr : &alpha, &alpha);
            if (!fit.report.converged) out.all_converged = false;
            out.coef[j].push_back(fit.coef);
            out.reports[j].push_back(fit.report);
        }
    }
    return out;
}

Matrix build_cv_margins(const Matrix& x, const std::vector<double>& y,
                        const CandidateSet& cands, const FoldPlan& plan,
                        const FoldFits& fits) {
    const std::size_t n = x.rows();
    if (plan.n() != n || y.size() != n)
        throw std::invalid_argument("build_cv_margins: row counts disagree");
    if (fits.coef.size() != plan.folds)
        throw std::invalid_argument("build_cv_margins: fold fits do not match the plan");

    Matrix z(n, cands.size());
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = plan.fold_of[i];
        for (std::size_t s = 0; s < cands.size(); ++s) {
            const Coefficients& c = fits.coef[j][s];
            const auto& idx = cands.models[s].feature_indices;
            double score = c.intercept;
            for (std::size_t t = 0; t < idx.size(); ++t) score += c.beta[t] * x(i, idx[t] - 1);
            z(i, s) = y[i] * score;
        }
    }
    return z;
}

double cv_criterion(const Matrix& z, const std::vector<double>& w) {
    if (w.size() != z.cols())
        throw std::invalid_argument("cv_criterion: weight length mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < z.rows(); ++i) {
        double m = 0.0;
        for (std::size_t s = 0; s < z.cols(); ++s) m += z(i, s) * w[s];
        total += hinge(m);
    }
    return total / static_cast<double>(z.rows());
}

/*
 * Minimize f(w) = (1/n) sum_i max(0, 1 - z_i.w) over the simplex.
 *
 * As a linear program:
 *
 *   (primal)  min (1/n) 1'xi   s.t.  Z w + xi >= 1,  1'w = 1,  w, xi >= 0
 *
 * The convexity row has no natural slack for a crash basis, so we solve the
 * LP dual instead, which starts from an all-slack basis at b = 0:
 *
 *   (dual)    max 1'a + t      s.t.  0 <= a <= (1/n) 1,   Z'a + t 1 <= 0
 *
 * written for the minimizing solver as
 *
 *   min -1'a - t+ + t-   s.t.  Z'a + (t+ - t-) 1 + r = 0,  r >= 0,
 *                              0 <= a <= 1/n,  t+, t- >= 0.
 *
 * Strong duality gives f* = -(dual optimum), and the optimal primal weights
 * are the row multipliers of the dual constraints, recovered from the
 * returned duals (w_s = -pi_s), cleaned up to the simplex, and certified by
 * direct evaluation: cv_criterion(w) must come within tolerance of f*.
 */
WeightSolution solve_weights(const Matrix& z, double tolerance) {
    const std::size_t n = z.rows();
    const std::size_t s_count = z.cols();
    if (n == 0 || s_count == 0)
        throw std::invalid_argument("solve_weights: empty margin matrix");
    if (!(tolerance > 0.0))
        throw std::invalid_argument("solve_weights: tolerance must be positive");
    for (double v : z.data())
        if (!std::isfinite(v)) throw std::invalid_argument("solve_weights: margins must be finite");

    WeightSolution out;
    if (s_count == 1) {
        out.weights.values = {1.0};
        out.objective = cv_criterion(z, out.weights.values);
        out.converged = true;
        return out;
    }

    lp::Problem prob;
    prob.rows = s_count;
    prob.cols = n + 2 + s_count;
    prob.a = Matrix(prob.rows, prob.cols);
    prob.b.assign(prob.rows, 0.0);
    prob.c.assign(prob.cols, 0.0);
    prob.upper.assign(prob.cols, lp::kInf);

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t s = 0; s < s_count; ++s) prob.a(s, i) = z(i, s);
        prob.c[i] = -1.0;
        prob.upper[i] = 1.0 / static_cast<double>(n);
    }
    for (std::size_t s = 0; s < s_count; ++s) {
        prob.a(s, n) = 1.0;       // t+
        prob.a(s, n + 1) = -1.0;  // t-
        prob.a(s, n + 2 + s) = 1.0;
    }
    prob.c[n] = -1.0;
    prob.c[n + 1] = 1.0;

    std::vector<std::size_t> basis(s_count);
    for (std::size_t s = 0; s < s_count; ++s) basis[s] = n + 2 + s;

    lp::SimplexSolver solver(std::move(prob), std::move(basis));
    const lp::Result res = solver.solve();

    std::vector<double> w(s_count);
    double sum = 0.0;
    for (std::size_t s = 0; s < s_count; ++s) {
        w[s] = std::max(0.0, -res.duals[s]);
        sum += w[s];
    }
    if (sum <= 0.0) {
        w.assign(s_count, 1.0 / static_cast<double>(s_count));
    } else {
        for (auto& v : w) v /= sum;
    }

    out.weights.values = std::move(w);
    out.objective = cv_criterion(z, out.weights.values);
    // -res.objective is the LP's value for the optimum f*, so the distance
    // from the attained value certifies the solution.
    const double excess = out.objective + res.objective;
    out.converged = res.status == lp::Status::Optimal &&
                    excess <= tolerance * std::max(1.0, std::abs(out.objective)) &&
                    out.weights.on_simplex(1e-10);
    return out;
}

FullRefit refit_full(const Matrix& x, const std::vector<double>& y,
                     const CandidateSet& cands) {
    const std::size_t n = x.rows();
    if (y.size() != n) throw std::invalid_argument("refit_full: row counts disagree");
    if (n == 0 || cands.models.empty())
        throw std::invalid_argument("refit_full: empty data or candidate set");

    FullRefit out;
    const double lambda = 1.0 / static_cast<double>(n);
    std::vector<double> alpha;
    out.embedded.reserve(cands.size());
    out.reports.reserve(cands.size());
    for (std::size_t s = 0; s < cands.size(); ++s) {
        const Matrix xres = restrict_columns(x, cands.models[s]);
        const FitResult fit = train_l2_svm(xres, y, lambda, {}, nullptr,
                                           alpha.empty() ? nullptr : &alpha, &alpha);
        if (!fit.report.converged) out.all_converged = false;
        out.embedded.push_back(embed(fit.coef, cands.models[s], x.cols()));
        out.reports.push_back(fit.report);
    }
    return out;
}

double label_from_score(double score) { return score < 0.0 ? -1.0 : 1.0; }

std::vector<double> predict_labels(const Matrix& x, const Coefficients& coef) {
    if (coef.beta.size() != x.cols())
        throw std::invalid_argument("predict_labels: dimension mismatch");
    std::vector<double> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] = label_from_score(margin(coef, x.row(i)));
    return out;
}

}  // namespace svmma
