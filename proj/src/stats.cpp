#include "ura/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace ura {

double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double q_inv(double eps) {
    if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("q_inv: eps must be in (0,1)");
    // Bisection on Q, which is strictly decreasing.
    double lo = -40.0, hi = 40.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (q_func(mid) > eps)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double gauss_interval_mass(double lo, double hi, double var) {
    if (var <= 0.0) {
        // Degenerate at zero.
        return (lo < 0.0 && hi >= 0.0) ? 1.0 : 0.0;
    }
    const double s = std::sqrt(2.0 * var);
    return 0.5 * (std::erf(hi / s) - std::erf(lo / s));
}

WilsonInterval wilson95(std::size_t k, std::size_t n) {
    if (n == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double p = static_cast<double>(k) / static_cast<double>(n);
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    double lo = center - half;
    double hi = center + half;
    if (lo < 0.0) lo = 0.0;
    if (hi > 1.0) hi = 1.0;
    return {lo, hi};
}

double chi2_critical(std::size_t df, double alpha) {
    if (df == 0) throw std::invalid_argument("chi2_critical: df must be positive");
    const double z = q_inv(alpha);
    const double d = static_cast<double>(df);
    const double t = 1.0 - 2.0 / (9.0 * d) + z * std::sqrt(2.0 / (9.0 * d));
    return d * t * t * t;
}

}  // namespace ura
