// L2-penalized linear SVM, solved in the dual:
//
//   min_a  (1/(2 lambda)) || sum_i a_i y_i x_i ||^2 - sum_i a_i
//   s.t.   0 <= a_i <= v_i / n,   sum_i a_i y_i = 0
//
// with beta = (1/lambda) sum_i a_i y_i x_i. The equality constraint is the
// dual image of the unpenalized intercept. Pairs are picked by maximal
// violation: with G_t = y_t x_t' beta - 1,
//
//   I_up  = { t : a_t < C_t, y_t = +1 } u { t : a_t > 0, y_t = -1 }
//   I_low = { t : a_t < C_t, y_t = -1 } u { t : a_t > 0, y_t = +1 }
//
// and the selected pair maximizes / minimizes -y_t G_t over I_up / I_low.
// Each two-variable subproblem is solved in closed form and clipped to the
// box. Progress is certified by the primal-dual gap, where the primal uses
// the exact one-dimensional minimizer of the hinge sum over the intercept.

#include "svmma/svm_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "svmma/l1_svm.hpp"

namespace svmma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNpos = static_cast<std::size_t>(-1);
constexpr double kPairTol = 1e-12;

// Exact minimizer of g(b) = (1/n) sum_i v_i hinge(y_i (b + m_i)), a convex
// piecewise-linear function of b. The slope starts at -sum_{y=+1} v_i / n
// and increases by v_i / n at b = 1 - m_i for positive samples and at
// b = -1 - m_i for negative ones; the minimum sits where the slope first
// reaches zero. A flat stretch of minimizers resolves to its midpoint, or
// to its finite endpoint when it extends to infinity.
double exact_intercept(const std::vector<double>& y,
                       const std::vector<double>& margins,
                       const std::vector<double>& v) {
    const std::size_t n = y.size();
    struct Event {
        double pos;
        double jump;
    };
    std::vector<Event> events;
    events.reserve(n);
    double slope = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (v[i] <= 0.0) continue;
        const double w = v[i] / static_cast<double>(n);
        total += w;
        if (y[i] > 0.0) {
            slope -= w;
            events.push_back({1.0 - margins[i], w});
        } else {
            events.push_back({-1.0 - margins[i], w});
        }
    }
    if (events.empty()) return 0.0;
    std::sort(events.begin(), events.end(),
              [](const Event& a, const Event& b) { return a.pos < b.pos; });
    const double zero_tol = 1e-12 * std::max(1.0, total);
    if (slope >= -zero_tol) return events.front().pos;  // no descent anywhere
    std::size_t k = 0;
    while (k < events.size()) {
        const double pos = events[k].pos;
        double jump = 0.0;
        while (k < events.size() && events[k].pos == pos) {
            jump += events[k].jump;
            ++k;
        }
        const double next = slope + jump;
        if (next > zero_tol) return pos;  // slope crosses zero here
        if (next >= -zero_tol) {          // flat stretch of minimizers
            if (k < events.size()) return 0.5 * (pos + events[k].pos);
            return pos;
        }
        slope = next;
    }
    return events.back().pos;
}

}  // namespace

double hinge(double m) { return m >= 1.0 ? 0.0 : 1.0 - m; }

double margin(const Coefficients& coef, std::span<const double> x) {
    if (x.size() != coef.beta.size())
        throw std::invalid_argument("margin: feature count does not match coefficients");
    return coef.intercept + dot(std::span<const double>(coef.beta), x);
}

std::vector<double> normalize_sample_weights(std::size_t n,
                                             const std::vector<double>* raw) {
    if (raw == nullptr) return std::vector<double>(n, 1.0);
    if (raw->size() != n)
        throw std::invalid_argument("sample weight count does not match row count");
    double sum = 0.0;
    for (double w : *raw) {
        if (!(w >= 0.0))
            throw std::invalid_argument("sample weights must be nonnegative");
        sum += w;
    }
    if (!(sum > 0.0))
        throw std::invalid_argument("sample weights must not all be zero");
    std::vector<double> out(*raw);
    const double scale = static_cast<double>(n) / sum;
    for (double& w : out) w *= scale;
    return out;
}

void validate_binary_labels(const std::vector<double>& y) {
    for (double v : y)
        if (v != 1.0 && v != -1.0)
            throw std::invalid_argument("labels must be +1 or -1");
}

double objective_l2(const Matrix& x, const std::vector<double>& y,
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
    const std::span<const double> b(coef.beta);
    return 0.5 * lambda * dot(b, b) + loss / static_cast<double>(n);
}

FitResult train_l2_svm(const Matrix& x, const std::vector<double>& y,
                       double lambda, const L2SolverConfig& cfg,
                       const std::vector<double>* sample_weights,
                       const std::vector<double>* warm_alpha,
                       std::vector<double>* alpha_out) {
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    if (n == 0) throw std::invalid_argument("training data is empty");
    if (y.size() != n)
        throw std::invalid_argument("label count does not match row count");
    validate_binary_labels(y);
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be nonnegative");
    const std::vector<double> v = normalize_sample_weights(n, sample_weights);

    if (lambda == 0.0) {
        // Unpenalized hinge minimization is a linear program; reuse the
        // L1 trainer with a zero penalty, which solves it exactly.
        L1FitResult r = train_l1_svm(x, y, 0.0, L1SolverConfig{}, sample_weights);
        if (alpha_out != nullptr) alpha_out->assign(n, 0.0);
        return {std::move(r.coef), r.report};
    }

    FitResult out;
    out.coef.beta.assign(p, 0.0);

    if (p == 0) {
        const std::vector<double> zeros(n, 0.0);
        out.coef.intercept = exact_intercept(y, zeros, v);
        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            loss += v[i] * hinge(y[i] * out.coef.intercept);
        out.report.objective = loss / static_cast<double>(n);
        out.report.converged = true;
        if (alpha_out != nullptr) alpha_out->assign(n, 0.0);
        return out;
    }

    std::vector<double> cbox(n);
    for (std::size_t i = 0; i < n; ++i) cbox[i] = v[i] / static_cast<double>(n);

    std::vector<double> alpha(n, 0.0);
    if (warm_alpha != nullptr && warm_alpha->size() == n) {
        alpha = *warm_alpha;
        double balance = 0.0;
        double mass = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            alpha[i] = std::clamp(alpha[i], 0.0, cbox[i]);
            balance += alpha[i] * y[i];
            mass += alpha[i];
        }
        // A seed that violates the equality constraint is useless; restart.
        if (std::abs(balance) > 1e-10 * std::max(1.0, mass)) alpha.assign(n, 0.0);
    }

    const double inv_lambda = 1.0 / lambda;
    std::vector<double> u(p, 0.0);  // sum_i a_i y_i x_i
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] == 0.0) continue;
        const double a = alpha[i] * y[i];
        const auto row = x.row(i);
        for (std::size_t j = 0; j < p; ++j) u[j] += a * row[j];
    }

    std::vector<double> qd(n);  // Q_tt = x_t' x_t / lambda
    for (std::size_t i = 0; i < n; ++i)
        qd[i] = dot(x.row(i), x.row(i)) * inv_lambda;

    std::vector<double> margins(n);
    std::vector<double> grad(n);

    auto certify = [&]() -> bool {
        for (std::size_t t = 0; t < n; ++t)
            margins[t] = dot(x.row(t), std::span<const double>(u)) * inv_lambda;
        const double b = exact_intercept(y, margins, v);
        double loss = 0.0;
        for (std::size_t t = 0; t < n; ++t)
            loss += v[t] * hinge(y[t] * (b + margins[t]));
        const double unorm = dot(std::span<const double>(u), std::span<const double>(u));
        const double primal = 0.5 * inv_lambda * unorm + loss / static_cast<double>(n);
        const double asum = std::accumulate(alpha.begin(), alpha.end(), 0.0);
        const double dual = asum - 0.5 * inv_lambda * unorm;
        out.coef.intercept = b;
        for (std::size_t j = 0; j < p; ++j) out.coef.beta[j] = u[j] * inv_lambda;
        out.report.objective = primal;
        out.report.duality_gap = primal - dual;
        return out.report.duality_gap <= cfg.tol * std::max(1.0, std::abs(primal));
    };

    std::size_t iter = 0;
    std::size_t stalled = 0;
    bool done = false;
    while (iter < cfg.max_iterations) {
        double best_up = -kInf;
        double best_low = kInf;
        std::size_t i_up = kNpos;
        std::size_t i_low = kNpos;
        for (std::size_t t = 0; t < n; ++t) {
            const double g =
                y[t] * (dot(x.row(t), std::span<const double>(u)) * inv_lambda) - 1.0;
            grad[t] = g;
            const double score = -y[t] * g;
            const bool in_up = (y[t] > 0.0) ? (alpha[t] < cbox[t]) : (alpha[t] > 0.0);
            const bool in_low = (y[t] > 0.0) ? (alpha[t] > 0.0) : (alpha[t] < cbox[t]);
            if (in_up && score > best_up) {
                best_up = score;
                i_up = t;
            }
            if (in_low && score < best_low) {
                best_low = score;
                i_low = t;
            }
        }
        if (i_up == kNpos || i_low == kNpos || best_up - best_low <= kPairTol) {
            done = certify();  // no violating pair left: dual optimum
            break;
        }
        ++iter;

        const std::size_t i = i_up;
        const std::size_t j = i_low;
        const double kij = dot(x.row(i), x.row(j)) * inv_lambda;
        double quad = qd[i] + qd[j] - 2.0 * kij;
        if (quad <= 0.0) quad = 1e-12;
        const double old_ai = alpha[i];
        const double old_aj = alpha[j];

        if (y[i] != y[j]) {
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else {
                if (alpha[i] < 0.0) {
                    alpha[i] = 0.0;
                    alpha[j] = -diff;
                }
            }
            if (diff > cbox[i] - cbox[j]) {
                if (alpha[i] > cbox[i]) {
                    alpha[i] = cbox[i];
                    alpha[j] = cbox[i] - diff;
                }
            } else {
                if (alpha[j] > cbox[j]) {
                    alpha[j] = cbox[j];
                    alpha[i] = cbox[j] + diff;
                }
            }
        } else {
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > cbox[i]) {
                if (alpha[i] > cbox[i]) {
                    alpha[i] = cbox[i];
                    alpha[j] = sum - cbox[i];
                }
            } else {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = sum;
                }
            }
            if (sum > cbox[j]) {
                if (alpha[j] > cbox[j]) {
                    alpha[j] = cbox[j];
                    alpha[i] = sum - cbox[j];
                }
            } else {
                if (alpha[i] < 0.0) {
                    alpha[i] = 0.0;
                    alpha[j] = sum;
                }
            }
        }

        const double dai = (alpha[i] - old_ai) * y[i];
        const double daj = (alpha[j] - old_aj) * y[j];
        if (dai != 0.0 || daj != 0.0) {
            const auto ri = x.row(i);
            const auto rj = x.row(j);
            for (std::size_t k = 0; k < p; ++k) u[k] += dai * ri[k] + daj * rj[k];
            stalled = 0;
        } else if (++stalled >= 2) {
            // The same pair keeps being selected with no feasible movement;
            // report whatever the certificate says rather than spin.
            done = certify();
            break;
        }

        if (iter % cfg.check_interval == 0 && certify()) {
            done = true;
            break;
        }
    }
    if (!done) done = certify();

    out.report.converged = done;
    out.report.iterations = iter;
    if (alpha_out != nullptr) *alpha_out = alpha;
    return out;
}

}  // namespace svmma
