#include "svmma/dgp.hpp"

#include <cmath>
#include <stdexcept>

#include "svmma/rng.hpp"

namespace svmma {

namespace {

void check(const DgpConfig& cfg) {
    if (cfg.n < 1 || cfg.p < 1) throw std::invalid_argument("dgp needs n >= 1 and p >= 1");
    if (cfg.q < 1 || cfg.q > cfg.p) throw std::invalid_argument("dgp needs 1 <= q <= p");
}

// Draw one row as L*z with z iid standard normal.
void draw_correlated(const Matrix& chol, RngStream& rng, std::span<double> out,
                     std::vector<double>& z) {
    const std::size_t p = chol.rows();
    for (std::size_t j = 0; j < p; ++j) z[j] = rng.normal();
    for (std::size_t i = 0; i < p; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k <= i; ++k) s += chol(i, k) * z[k];
        out[i] = s;
    }
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

Dataset gen_dgp1(const DgpConfig& cfg) {
    check(cfg);
    const std::size_t n = cfg.n, p = cfg.p;

    Matrix sigma(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) sigma(i, j) = (i == j) ? 1.0 : 0.2;
    if (!cholesky_lower(sigma)) throw std::runtime_error("covariance not positive definite");

    Dataset ds;
    ds.features = Matrix(n, p);
    ds.labels.resize(n);
    RngStream rng(cfg.seed);
    std::vector<double> z(p);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = rng.bernoulli(0.5) ? 1.0 : -1.0;
        ds.labels[i] = y;
        auto row = ds.features.row(i);
        draw_correlated(sigma, rng, row, z);
        for (std::size_t j = 0; j < cfg.q; ++j) row[j] += y * 0.6;
    }
    return ds;
}

Dataset gen_dgp2(const DgpConfig& cfg) {
    check(cfg);
    const std::size_t n = cfg.n, p = cfg.p;

    Matrix sigma(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
            sigma(i, j) = std::pow(0.4, std::abs(static_cast<double>(i) - static_cast<double>(j)));
    if (!cholesky_lower(sigma)) throw std::runtime_error("covariance not positive definite");

    Dataset ds;
    ds.features = Matrix(n, p);
    ds.labels.resize(n);
    RngStream rng(cfg.seed);
    std::vector<double> z(p);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = ds.features.row(i);
        draw_correlated(sigma, rng, row, z);
        double score = 0.0;
        for (std::size_t j = 0; j < cfg.q; ++j) score += 2.0 * row[j];
        ds.labels[i] = rng.bernoulli(std_normal_cdf(score)) ? 1.0 : -1.0;
    }
    return ds;
}

Dataset generate(const DgpConfig& cfg) {
    return cfg.which == DgpKind::DGP1 ? gen_dgp1(cfg) : gen_dgp2(cfg);
}

}  // namespace svmma
