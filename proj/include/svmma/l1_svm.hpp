#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "svmma/matrix.hpp"
#include "svmma/simplex.hpp"
#include "svmma/svm_solver.hpp"

namespace svmma {

// lambda ||beta||_1 + (1/n) sum_i v_i max(0, 1 - y_i f(x_i)); the intercept
// is not penalized.
double objective_l1(const Matrix& x, const std::vector<double>& y,
                    const Coefficients& coef, double lambda,
                    const std::vector<double>* sample_weights = nullptr);

struct L1SolverConfig {
    double tol = 1e-6;          // certificate tolerance on the LP gap
    std::size_t max_pivots = 0; // 0 = simplex default
};

// Trains an L1-penalized linear SVM:
//
//   min_{b, beta}  lambda ||beta||_1
//                  + (1/n) sum_i v_i max(0, 1 - y_i (beta' x_i + b))
//
// Exact solution by linear programming: write b = b+ - b-, beta = u - g with
// u, g >= 0, and xi_i >= the i-th hinge term, giving
//
//   min  lambda 1'(u + g) + (1/n) v' xi
//   s.t. y_i (b + x_i' beta) + xi_i - s_i = 1,  all variables >= 0.
//
// lambda == 0 is allowed (pure hinge minimization).
struct L1FitResult {
    Coefficients coef;
    FitReport report;
};

L1FitResult train_l1_svm(const Matrix& x, const std::vector<double>& y,
                         double lambda, const L1SolverConfig& cfg = {},
                         const std::vector<double>* sample_weights = nullptr);

// Solves the same problem for many penalties on one fixed dataset. The LP
// constraint rows do not depend on lambda, so subsequent solves restart the
// simplex from the previous optimal basis with swapped objective costs;
// this is roughly an order of magnitude faster than cold solves along a
// penalty grid.
class L1PathSolver {
  public:
    L1PathSolver(const Matrix& x, std::vector<double> y,
                 const L1SolverConfig& cfg = {},
                 const std::vector<double>* sample_weights = nullptr);
    ~L1PathSolver();

    L1FitResult solve(double lambda);

  private:
    std::vector<double> costs_for(double lambda) const;
    L1FitResult extract(const lp::Result& res, double lambda) const;

    Matrix x_;
    std::vector<double> y_;
    std::vector<double> v_;
    L1SolverConfig cfg_;
    std::size_t n_ = 0;
    std::size_t p_ = 0;
    std::unique_ptr<lp::SimplexSolver> solver_;
};

}  // namespace svmma
