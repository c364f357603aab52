#pragma once

#include <cstdint>

#include "svmma/dataset.hpp"

namespace svmma {

enum class DgpKind { DGP1, DGP2 };

struct DgpConfig {
    DgpKind which = DgpKind::DGP1;
    std::size_t n = 100;
    std::size_t p = 50;
    std::size_t q = 5;  // number of signal covariates, 1 <= q <= p
    std::uint64_t seed = 0;
};

// Gaussian class-conditional design: fair-coin labels, x | y=+1 ~ N(mu, Sigma)
// and x | y=-1 ~ N(-mu, Sigma), mu = (0.6 repeated q times, 0, ...),
// Sigma with unit diagonal and 0.2 off-diagonal.
Dataset gen_dgp1(const DgpConfig& cfg);

// Probit design: x ~ N(0, Sigma) with Sigma_ij = 0.4^|i-j|, and
// Pr(y=+1 | x) = Phi(x' beta), beta = (2 repeated q times, 0, ...).
Dataset gen_dgp2(const DgpConfig& cfg);

Dataset generate(const DgpConfig& cfg);

}  // namespace svmma
