// L1-penalized linear SVM as a linear program. With b = b+ - b-,
// beta = u - g (all parts nonnegative) and xi_i an upper bound on the i-th
// hinge term, the problem
//
//   min_{b, beta}  lambda ||beta||_1 + (1/n) sum_i v_i max(0, 1 - y_i f(x_i))
//
// becomes
//
//   min  lambda 1'(u + g) + (1/n) v' xi
//   s.t. y_i (b+ - b-) + y_i x_i'(u - g) + xi_i - s_i = 1,   i = 1..n
//        b+, b-, u, g, xi, s >= 0
//
// The xi columns form an identity and the right-hand side is the all-ones
// vector, so they are a valid starting basis and no phase-one is needed.

#include "svmma/l1_svm.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace svmma {

double objective_l1(const Matrix& x, const std::vector<double>& y,
                    const Coefficients& coef, double lambda,
                    const std::vector<double>* sample_weights) {
    const std::size_t n = x.rows();
    if (y.size() != n)
        throw std::invalid_argument("label count does not match row count");
    if (coef.beta.size() != x.cols())
        throw std::invalid_argument("coefficient count does not match column count");
    const std::vector<double> v = normalize_sample_weights(n, sample_weights);
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        loss += v[i] * hinge(y[i] * margin(coef, x.row(i)));
    double l1 = 0.0;
    for (double b : coef.beta) l1 += std::abs(b);
    return lambda * l1 + loss / static_cast<double>(n);
}

L1PathSolver::L1PathSolver(const Matrix& x, std::vector<double> y,
                           const L1SolverConfig& cfg,
                           const std::vector<double>* sample_weights)
    : x_(x), y_(std::move(y)), cfg_(cfg), n_(x.rows()), p_(x.cols()) {
    if (n_ == 0) throw std::invalid_argument("training data is empty");
    if (y_.size() != n_)
        throw std::invalid_argument("label count does not match row count");
    validate_binary_labels(y_);
    v_ = normalize_sample_weights(n_, sample_weights);

    lp::Problem prob;
    prob.rows = n_;
    prob.cols = 2 + 2 * p_ + 2 * n_;
    prob.a = Matrix(n_, prob.cols);
    prob.b.assign(n_, 1.0);
    prob.c.assign(prob.cols, 0.0);
    prob.upper.assign(prob.cols, lp::kInf);
    for (std::size_t i = 0; i < n_; ++i) {
        const auto row = x_.row(i);
        prob.a(i, 0) = y_[i];
        prob.a(i, 1) = -y_[i];
        for (std::size_t j = 0; j < p_; ++j) {
            prob.a(i, 2 + j) = y_[i] * row[j];
            prob.a(i, 2 + p_ + j) = -y_[i] * row[j];
        }
        prob.a(i, 2 + 2 * p_ + i) = 1.0;
        prob.a(i, 2 + 2 * p_ + n_ + i) = -1.0;
    }
    std::vector<std::size_t> basis(n_);
    for (std::size_t i = 0; i < n_; ++i) basis[i] = 2 + 2 * p_ + i;
    solver_ = std::make_unique<lp::SimplexSolver>(std::move(prob), std::move(basis));
}

L1PathSolver::~L1PathSolver() = default;

std::vector<double> L1PathSolver::costs_for(double lambda) const {
    std::vector<double> c(2 + 2 * p_ + 2 * n_, 0.0);
    for (std::size_t j = 0; j < p_; ++j) {
        c[2 + j] = lambda;
        c[2 + p_ + j] = lambda;
    }
    for (std::size_t i = 0; i < n_; ++i)
        c[2 + 2 * p_ + i] = v_[i] / static_cast<double>(n_);
    return c;
}

L1FitResult L1PathSolver::extract(const lp::Result& res, double lambda) const {
    L1FitResult out;
    out.coef.intercept = res.x[0] - res.x[1];
    out.coef.beta.resize(p_);
    for (std::size_t j = 0; j < p_; ++j)
        out.coef.beta[j] = res.x[2 + j] - res.x[2 + p_ + j];
    out.report.objective = objective_l1(x_, y_, out.coef, lambda, &v_);
    out.report.iterations = res.pivots;
    const double gap = std::abs(res.objective - res.dual_objective) + res.dual_infeasibility;
    out.report.duality_gap = gap;
    out.report.converged = res.status == lp::Status::Optimal &&
                           gap <= cfg_.tol * std::max(1.0, std::abs(res.objective));
    return out;
}

L1FitResult L1PathSolver::solve(double lambda) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be nonnegative");
    lp::Result res = solver_->resolve(costs_for(lambda), cfg_.max_pivots);
    // Long warm-started runs can accumulate roundoff in the tableau; if the
    // recovered point has drifted off the constraints, redo this solve cold.
    if (solver_->feasibility_residual() > 1e-7) {
        lp::Problem fresh = solver_->problem();
        std::vector<std::size_t> basis(n_);
        for (std::size_t i = 0; i < n_; ++i) basis[i] = 2 + 2 * p_ + i;
        solver_ = std::make_unique<lp::SimplexSolver>(std::move(fresh), std::move(basis));
        res = solver_->resolve(costs_for(lambda), cfg_.max_pivots);
    }
    return extract(res, lambda);
}

L1FitResult train_l1_svm(const Matrix& x, const std::vector<double>& y,
                         double lambda, const L1SolverConfig& cfg,
                         const std::vector<double>* sample_weights) {
    L1PathSolver solver(x, y, cfg, sample_weights);
    return solver.solve(lambda);
}

}  // namespace svmma
