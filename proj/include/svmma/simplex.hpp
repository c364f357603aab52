#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "svmma/matrix.hpp"

namespace svmma::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// min c'x  subject to  A x = b,  0 <= x_j <= upper_j (upper_j may be +inf).
struct Problem {
    std::size_t rows = 0;
    std::size_t cols = 0;
    Matrix a;                   // rows x cols
    std::vector<double> b;      // rows
    std::vector<double> c;      // cols
    std::vector<double> upper;  // cols
};

enum class Status { Optimal, IterationLimit, Unbounded };

struct Result {
    Status status = Status::Optimal;
    std::vector<double> x;
    std::vector<double> duals;  // row multipliers
    double objective = 0.0;
    double dual_objective = 0.0;  // lower bound on the optimum (up to dual_infeasibility)
    double dual_infeasibility = 0.0;
    std::size_t pivots = 0;
};

// Dense full-tableau primal simplex with variable upper bounds.
//
// The caller must supply a starting basis whose columns form the identity
// in order (column basis[i] equals e_i) with b >= 0, so the initial point
// x_B = b is feasible and no phase-1 is needed. Pricing is Dantzig with a
// deterministic lowest-index tie break; after a run of degenerate pivots
// the solver switches to Bland's rule, which guarantees termination.
//
// The tableau does not depend on the objective, so the objective can be
// swapped and the solve continued from the current basis (used by the
// L1 path over a penalty grid).
class SimplexSolver {
public:
    SimplexSolver(Problem problem, std::vector<std::size_t> basis);

    Result solve(std::size_t max_pivots = 0);  // 0 -> automatic cap

    // Keep the current basis, replace c, re-optimize.
    Result resolve(const std::vector<double>& new_c, std::size_t max_pivots = 0);

    // max |A x - b| at the current iterate; detects tableau drift.
    double feasibility_residual() const;

    const Problem& problem() const { return prob_; }

private:
    Result run(std::size_t max_pivots);
    Result extract(Status status, std::size_t pivots) const;
    std::vector<double> current_x() const;
    void recompute_reduced_costs();

    Problem prob_;
    Matrix tableau_;                    // B^{-1} A, maintained by pivoting
    std::vector<double> xb_;            // basic variable values
    std::vector<std::size_t> basis_;    // column index per row
    std::vector<std::size_t> initial_basis_;
    std::vector<double> zrow_;          // reduced costs
    std::vector<char> at_upper_;        // nonbasic-at-upper flags
    std::vector<std::size_t> row_of_;   // column -> row when basic, npos otherwise
    bool bland_ = false;
};

}  // namespace svmma::lp
