#include "svmma/matrix.hpp"

#include <cmath>

namespace svmma {

bool cholesky_lower(Matrix& a) {
    const std::size_t n = a.rows();
    assert(a.cols() == n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
        if (d <= 0.0) return false;
        const double ljj = std::sqrt(d);
        a(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
            a(i, j) = s / ljj;
        }
        for (std::size_t i = 0; i < j; ++i) a(i, j) = 0.0;
    }
    return true;
}

}  // namespace svmma
