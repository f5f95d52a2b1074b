#pragma once

#include <cstddef>
#include <utility>

namespace ura {

// Standard normal tail Q(x) and its inverse.
double q_func(double x);
double q_inv(double eps);

// Gaussian N(0, var) mass on the interval (lo, hi].
double gauss_interval_mass(double lo, double hi, double var);

// 95% Wilson score interval for k successes in n trials.
struct WilsonInterval {
    double lo;
    double hi;
};
WilsonInterval wilson95(std::size_t k, std::size_t n);

// Upper critical value of the chi-square distribution (Wilson-Hilferty
// approximation), adequate for goodness-of-fit gates at alpha ~ 0.01.
double chi2_critical(std::size_t df, double alpha);

}  // namespace ura
