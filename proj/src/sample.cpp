#include "pinncert/sample.hpp"

#include <cmath>

#include "pinncert/errors.hpp"
#include "pinncert/rng.hpp"
#include "pinncert/util.hpp"

namespace pinncert {

SampleSet SampleSet::draw(std::uint64_t seed, int n, double x1, double x2) {
    if (n < 1) throw NumericError("sample size must be at least 1");
    if (!(x1 < x2)) throw NumericError("sample interval requires x1 < x2");
    SampleSet s;
    s.seed = seed;
    s.x1 = x1;
    s.x2 = x2;
    s.points.reserve(static_cast<std::size_t>(n));
    RngStream rng = RngStream::from_seed(seed, /*tag=*/0x5a11);
    for (int i = 0; i < n; ++i) s.points.push_back(x1 + (x2 - x1) * rng.next_unit());
    return s;
}

double McEstimate::chebyshev_halfwidth(double k) const {
    return k * beta_hat / std::sqrt(static_cast<double>(n));
}

McEstimate mc_mean(const RealFn& psi, const SampleSet& s) {
    if (s.points.empty()) throw NumericError("empty sample set");
    double sum = 0.0, sum_sq = 0.0;
    for (double x : s.points) {
        double v = psi(x);
        if (!std::isfinite(v))
            throw NumericError("non-finite integrand value at x = " + format_double(x));
        if (v < 0.0)
            throw NumericError("integrand must be nonnegative; got " + format_double(v) +
                               " at x = " + format_double(x));
        sum += v;
        sum_sq += v * v;
    }
    McEstimate est;
    est.n = s.n();
    est.mean = sum / est.n;
    est.beta_hat = std::sqrt(std::max(0.0, sum_sq / est.n - est.mean * est.mean));
    return est;
}

}  // namespace pinncert
