#include "svmma/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace svmma::lp {

namespace {

constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-10;
constexpr double kDegenerateStep = 1e-12;
constexpr std::size_t kNpos = static_cast<std::size_t>(-1);

}  // namespace

SimplexSolver::SimplexSolver(Problem problem, std::vector<std::size_t> basis)
    : prob_(std::move(problem)), basis_(std::move(basis)) {
    const std::size_t m = prob_.rows, ncol = prob_.cols;
    if (basis_.size() != m) throw std::invalid_argument("basis size must equal row count");
    if (prob_.a.rows() != m || prob_.a.cols() != ncol || prob_.b.size() != m ||
        prob_.c.size() != ncol || prob_.upper.size() != ncol) {
        throw std::invalid_argument("inconsistent LP dimensions");
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (prob_.b[i] < 0.0) throw std::invalid_argument("identity start requires b >= 0");
        for (std::size_t r = 0; r < m; ++r) {
            const double want = (r == i) ? 1.0 : 0.0;
            if (prob_.a(r, basis_[i]) != want) {
                throw std::invalid_argument("starting basis columns must form the identity");
            }
        }
    }
    tableau_ = prob_.a;
    xb_ = prob_.b;
    initial_basis_ = basis_;
    at_upper_.assign(ncol, 0);
    row_of_.assign(ncol, kNpos);
    for (std::size_t i = 0; i < m; ++i) row_of_[basis_[i]] = i;
    zrow_.resize(ncol);
    recompute_reduced_costs();
}

void SimplexSolver::recompute_reduced_costs() {
    const std::size_t m = prob_.rows, ncol = prob_.cols;
    for (std::size_t j = 0; j < ncol; ++j) {
        double z = prob_.c[j];
        for (std::size_t i = 0; i < m; ++i) {
            const double cb = prob_.c[basis_[i]];
            if (cb != 0.0) z -= cb * tableau_(i, j);
        }
        zrow_[j] = z;
    }
    for (std::size_t i = 0; i < m; ++i) zrow_[basis_[i]] = 0.0;
}

std::vector<double> SimplexSolver::current_x() const {
    std::vector<double> x(prob_.cols, 0.0);
    for (std::size_t j = 0; j < prob_.cols; ++j) {
        if (at_upper_[j]) x[j] = prob_.upper[j];
    }
    for (std::size_t i = 0; i < prob_.rows; ++i) x[basis_[i]] = xb_[i];
    return x;
}

double SimplexSolver::feasibility_residual() const {
    const std::vector<double> x = current_x();
    double worst = 0.0;
    for (std::size_t i = 0; i < prob_.rows; ++i) {
        double r = -prob_.b[i];
        for (std::size_t j = 0; j < prob_.cols; ++j) r += prob_.a(i, j) * x[j];
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

Result SimplexSolver::solve(std::size_t max_pivots) {
    bland_ = false;
    return run(max_pivots);
}

Result SimplexSolver::resolve(const std::vector<double>& new_c, std::size_t max_pivots) {
    if (new_c.size() != prob_.cols) throw std::invalid_argument("cost vector size mismatch");
    prob_.c = new_c;
    recompute_reduced_costs();
    bland_ = false;
    return run(max_pivots);
}

Result SimplexSolver::run(std::size_t max_pivots) {
    const std::size_t m = prob_.rows, ncol = prob_.cols;
    if (max_pivots == 0) max_pivots = 20000 + 200 * (m + ncol);
    const std::size_t stall_limit = 100 + 2 * m;

    std::size_t pivots = 0;
    std::size_t degenerate_run = 0;

    while (pivots < max_pivots) {
        // Entering column. A nonbasic at lower bound is attractive when its
        // reduced cost is negative; one at upper bound when positive.
        std::size_t enter = kNpos;
        double best = kReducedCostTol;
        for (std::size_t j = 0; j < ncol; ++j) {
            if (row_of_[j] != kNpos) continue;
            const double viol = at_upper_[j] ? zrow_[j] : -zrow_[j];
            if (viol > best) {
                enter = j;
                best = viol;
                if (bland_) break;  // lowest index wins
            }
        }
        if (enter == kNpos) return extract(Status::Optimal, pivots);

        const int dir = at_upper_[enter] ? -1 : +1;

        // Ratio test: largest step theta keeping every basic variable in
        // its bounds and the entering variable within its own span. Ties
        // prefer the larger pivot element (lowest basic index under Bland).
        double theta = prob_.upper[enter];  // bound-flip span (may be inf)
        std::size_t leave_row = kNpos;
        bool leave_at_upper = false;
        for (std::size_t i = 0; i < m; ++i) {
            const double delta = dir * tableau_(i, enter);
            double t;
            bool hits_upper;
            if (delta > kPivotTol) {
                t = xb_[i] / delta;
                hits_upper = false;
            } else if (delta < -kPivotTol) {
                const double ub = prob_.upper[basis_[i]];
                if (ub == kInf) continue;
                t = (ub - xb_[i]) / (-delta);
                hits_upper = true;
            } else {
                continue;
            }
            bool better = false;
            if (t < theta - kDegenerateStep) {
                better = true;
            } else if (t < theta + kDegenerateStep && leave_row != kNpos) {
                if (bland_) {
                    better = basis_[i] < basis_[leave_row];
                } else {
                    better = std::abs(tableau_(i, enter)) > std::abs(tableau_(leave_row, enter));
                }
            }
            if (better) {
                theta = std::min(theta, t);
                leave_row = i;
                leave_at_upper = hits_upper;
            }
        }

        if (theta == kInf) return extract(Status::Unbounded, pivots);
        if (theta < 0.0) theta = 0.0;

        ++pivots;
        if (theta <= kDegenerateStep) {
            if (++degenerate_run > stall_limit) bland_ = true;
        } else {
            degenerate_run = 0;
        }

        if (leave_row == kNpos) {
            // Bound flip: the entering variable crosses its whole span.
            for (std::size_t i = 0; i < m; ++i) {
                xb_[i] -= theta * dir * tableau_(i, enter);
            }
            at_upper_[enter] = static_cast<char>(!at_upper_[enter]);
            continue;
        }

        // Pivot: entering becomes basic at its new value, the leaving
        // variable exits at the bound it ran into.
        const std::size_t leave = basis_[leave_row];
        const double enter_value = at_upper_[enter] ? prob_.upper[enter] - theta : theta;
        for (std::size_t i = 0; i < m; ++i) xb_[i] -= theta * dir * tableau_(i, enter);
        xb_[leave_row] = enter_value;

        const double pivot = tableau_(leave_row, enter);
        const double inv = 1.0 / pivot;
        double* prow = &tableau_(leave_row, 0);
        for (std::size_t j = 0; j < ncol; ++j) prow[j] *= inv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave_row) continue;
            const double f = tableau_(i, enter);
            if (f == 0.0) continue;
            double* row = &tableau_(i, 0);
            for (std::size_t j = 0; j < ncol; ++j) row[j] -= f * prow[j];
        }
        const double zf = zrow_[enter];
        if (zf != 0.0) {
            for (std::size_t j = 0; j < ncol; ++j) zrow_[j] -= zf * prow[j];
        }

        basis_[leave_row] = enter;
        row_of_[enter] = leave_row;
        row_of_[leave] = kNpos;
        at_upper_[enter] = 0;
        at_upper_[leave] = static_cast<char>(leave_at_upper);
        zrow_[enter] = 0.0;
    }
    return extract(Status::IterationLimit, max_pivots);
}

Result SimplexSolver::extract(Status status, std::size_t pivots) const {
    Result res;
    res.status = status;
    res.pivots = pivots;
    res.x = current_x();
    for (double& v : res.x) {
        if (std::abs(v) < 1e-12) v = 0.0;
    }
    res.objective = 0.0;
    for (std::size_t j = 0; j < prob_.cols; ++j) res.objective += prob_.c[j] * res.x[j];

    // Multipliers: the starting basis columns are the identity, so their
    // reduced costs reveal pi directly (z_j = c_j - pi_i for column e_i).
    res.duals.resize(prob_.rows);
    for (std::size_t i = 0; i < prob_.rows; ++i) {
        const std::size_t j = initial_basis_[i];
        res.duals[i] = prob_.c[j] - zrow_[j];
    }
    double g = 0.0;
    for (std::size_t i = 0; i < prob_.rows; ++i) g += res.duals[i] * prob_.b[i];
    double infeas = 0.0;
    for (std::size_t j = 0; j < prob_.cols; ++j) {
        const double excess = -zrow_[j];  // pi'A_j - c_j
        if (excess <= 0.0) continue;
        if (prob_.upper[j] == kInf) {
            infeas = std::max(infeas, excess);
        } else {
            g -= prob_.upper[j] * excess;
        }
    }
    res.dual_objective = g;
    res.dual_infeasibility = infeas;
    return res;
}

}  // namespace svmma::lp
