#include "pinncert/util.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace pinncert {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::string best;
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) != v) continue;
        // shortest round-tripping form wins ("10", not "1e+01")
        if (best.empty() || std::char_traits<char>::length(buf) < best.size()) best = buf;
    }
    if (!best.empty()) return best;
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<double> linspace(double a, double b, int n) {
    if (n < 1) throw std::invalid_argument("linspace: n must be >= 1");
    if (n == 1) return {a};
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
    out.back() = b;
    return out;
}

std::vector<double> logspace(double a, double b, int n) {
    if (a <= 0 || b <= 0) throw std::invalid_argument("logspace: endpoints must be positive");
    if (n < 1) throw std::invalid_argument("logspace: n must be >= 1");
    if (n == 1) return {a};
    std::vector<double> out(n);
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < n; ++i) out[i] = std::exp(la + (lb - la) * i / (n - 1));
    out.front() = a;
    out.back() = b;
    return out;
}

}  // namespace pinncert
