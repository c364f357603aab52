#include "svmma/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "svmma/cv_weighting.hpp"
#include "svmma/rng.hpp"

namespace svmma {

IcScore ic_scores(const Matrix& x, const std::vector<double>& y,
                  const std::vector<Coefficients>& embedded_fits,
                  const CandidateSet& cands, IcKind which) {
    const std::size_t n = x.rows();
    if (y.size() != n) throw std::invalid_argument("ic_scores: row counts disagree");
    if (embedded_fits.size() != cands.size() || cands.models.empty())
        throw std::invalid_argument("ic_scores: fits do not match the candidate set");

    const double ln_n = std::log(static_cast<double>(n));
    const double penalty_unit = which == IcKind::SVMICL ? ln_n : std::pow(ln_n, 1.5);

    IcScore out;
    out.which = which;
    out.per_model.reserve(cands.size());
    out.model_sizes.reserve(cands.size());
    for (std::size_t s = 0; s < cands.size(); ++s) {
        if (embedded_fits[s].beta.size() != x.cols())
            throw std::invalid_argument("ic_scores: fits must be embedded to full length");
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            total += hinge(y[i] * margin(embedded_fits[s], x.row(i)));
        const std::size_t p_s = cands.models[s].size();
        out.per_model.push_back(total + static_cast<double>(p_s) * penalty_unit);
        out.model_sizes.push_back(p_s);
    }
    return out;
}

WeightVector select_by_ic(const IcScore& scores) {
    const std::size_t count = scores.per_model.size();
    if (count == 0 || scores.model_sizes.size() != count)
        throw std::invalid_argument("select_by_ic: malformed scores");
    std::size_t best = 0;
    for (std::size_t s = 1; s < count; ++s) {
        const bool better =
            scores.per_model[s] < scores.per_model[best] ||
            (scores.per_model[s] == scores.per_model[best] &&
             scores.model_sizes[s] < scores.model_sizes[best]);
        if (better) best = s;
    }
    WeightVector w;
    w.values.assign(count, 0.0);
    w.values[best] = 1.0;
    return w;
}

WeightVector smoothed_ic_weights(const IcScore& scores, std::size_t n) {
    const std::size_t count = scores.per_model.size();
    if (count == 0) throw std::invalid_argument("smoothed_ic_weights: empty scores");
    if (n == 0) throw std::invalid_argument("smoothed_ic_weights: n must be positive");

    std::vector<double> a(count);
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < count; ++s) {
        a[s] = -scores.per_model[s] / static_cast<double>(n);
        peak = std::max(peak, a[s]);
    }
    WeightVector w;
    w.values.resize(count);
    double sum = 0.0;
    for (std::size_t s = 0; s < count; ++s) {
        w.values[s] = std::exp(a[s] - peak);
        sum += w.values[s];
    }
    for (auto& v : w.values) v /= sum;
    return w;
}

WeightVector uniform_weights(std::size_t count) {
    if (count == 0) throw std::invalid_argument("uniform_weights: count must be positive");
    WeightVector w;
    w.values.assign(count, 1.0 / static_cast<double>(count));
    return w;
}

BaggingModel fit_bagging(const Matrix& x, const std::vector<double>& y,
                         const CandidateSet& cands, const EnsembleConfig& cfg) {
    const std::size_t n = x.rows();
    if (y.size() != n) throw std::invalid_argument("fit_bagging: row counts disagree");
    if (cands.models.empty() || cfg.rounds == 0)
        throw std::invalid_argument("fit_bagging: need candidates and at least one round");

    // All resampling randomness comes from one stream, drawn in round order.
    RngStream rng(cfg.seed);
    const double lambda = 1.0 / static_cast<double>(n);

    BaggingModel out;
    out.learners.reserve(cfg.rounds);
    Matrix xboot(n, x.cols());
    std::vector<double> yboot(n);
    for (std::size_t t = 0; t < cfg.rounds; ++t) {
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t r = rng.uniform_index(n);
            yboot[k] = y[r];
            for (std::size_t c = 0; c < x.cols(); ++c) xboot(k, c) = x(r, c);
        }
        const ModelSpec& spec = cands.models[t % cands.size()];
        const Matrix xres = restrict_columns(xboot, spec);
        const FitResult fit = train_l2_svm(xres, yboot, lambda);
        if (!fit.report.converged) out.all_converged = false;
        out.learners.push_back(embed(fit.coef, spec, x.cols()));
    }
    return out;
}

double bagging_predict(const BaggingModel& model, std::span<const double> x) {
    double votes = 0.0;
    for (const auto& learner : model.learners) votes += label_from_score(margin(learner, x));
    return label_from_score(votes);
}

std::vector<double> bagging_predict_labels(const BaggingModel& model, const Matrix& x) {
    std::vector<double> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] = bagging_predict(model, x.row(i));
    return out;
}

AdaBoostModel fit_adaboost(const Matrix& x, const std::vector<double>& y,
                           const CandidateSet& cands, const EnsembleConfig& cfg,
                           std::vector<std::vector<double>>* weight_trace) {
    const std::size_t n = x.rows();
    if (y.size() != n) throw std::invalid_argument("fit_adaboost: row counts disagree");
    if (cands.models.empty() || cfg.rounds == 0)
        throw std::invalid_argument("fit_adaboost: need candidates and at least one round");

    const double lambda = 1.0 / static_cast<double>(n);
    std::vector<double> d(n, 1.0 / static_cast<double>(n));

    AdaBoostModel out;
    for (std::size_t t = 0; t < cfg.rounds; ++t) {
        const ModelSpec& spec = cands.models[t % cands.size()];
        const Matrix xres = restrict_columns(x, spec);
        const FitResult fit = train_l2_svm(xres, y, lambda, {}, &d);
        if (!fit.report.converged) out.all_converged = false;
        const Coefficients learner = embed(fit.coef, spec, x.cols());

        double eps = 0.0;
        std::vector<double> h(n);
        for (std::size_t i = 0; i < n; ++i) {
            h[i] = label_from_score(margin(learner, x.row(i)));
            if (h[i] != y[i]) eps += d[i];
        }

        if (eps >= 0.5) {
            if (t == 0) {
                // No better than chance from the start: fall back to the raw
                // first learner.
                out.degenerate = true;
                out.learners.push_back(learner);
                out.alphas.push_back(1.0);
            }
            break;
        }

        const double clamped = std::min(std::max(eps, 1e-8), 1.0 - 1e-8);
        const double alpha = 0.5 * std::log((1.0 - clamped) / clamped);
        out.learners.push_back(learner);
        out.alphas.push_back(alpha);

        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d[i] *= std::exp(-alpha * y[i] * h[i]);
            sum += d[i];
        }
        for (auto& v : d) v /= sum;
        if (weight_trace) weight_trace->push_back(d);
    }
    return out;
}

double adaboost_predict(const AdaBoostModel& model, std::span<const double> x) {
    double score = 0.0;
    for (std::size_t t = 0; t < model.learners.size(); ++t)
        score += model.alphas[t] * label_from_score(margin(model.learners[t], x));
    return label_from_score(score);
}

std::vector<double> adaboost_predict_labels(const AdaBoostModel& model, const Matrix& x) {
    std::vector<double> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] = adaboost_predict(model, x.row(i));
    return out;
}

}  // namespace svmma
