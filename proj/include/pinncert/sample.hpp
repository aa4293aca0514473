#pragma once

#include <cstdint>
#include <vector>

#include "pinncert/quad.hpp"

namespace pinncert {

// n i.i.d. uniform draws on the open interval, reproducible per seed.
struct SampleSet {
    std::uint64_t seed = 0;
    double x1 = 0.0, x2 = 1.0;
    std::vector<double> points;

    static SampleSet draw(std::uint64_t seed, int n, double x1, double x2);
    int n() const { return static_cast<int>(points.size()); }
};

// Monte Carlo mean of a nonnegative integrand with a distribution-free
// (Chebyshev) confidence halfwidth. The mean estimates the interval average
// (1/|I|) * integral. alpha_hat is the sample mean itself; beta_hat is the
// plug-in standard deviation sqrt(mean of psi^2 - mean^2).
struct McEstimate {
    int n = 0;
    double mean = 0.0;
    double beta_hat = 0.0;

    double alpha_hat() const { return mean; }
    // deviation |sample mean - interval average| <= k*beta/sqrt(n) holds with
    // probability at least 1 - 1/k^2 when beta is the true std deviation
    double chebyshev_halfwidth(double k) const;
};

// Throws NumericError on a negative or non-finite value of psi.
McEstimate mc_mean(const RealFn& psi, const SampleSet& s);

}  // namespace pinncert
