#pragma once

#include <string>
#include <vector>

namespace pinncert {

/// Shortest decimal string that parses back to exactly `v`.
/// "nan" / "inf" / "-inf" for non-finite values.
std::string format_double(double v);

/// n evenly spaced values from a to b inclusive (n >= 2), or {a} for n == 1.
std::vector<double> linspace(double a, double b, int n);

/// n log-spaced values from a to b inclusive; requires a, b > 0.
std::vector<double> logspace(double a, double b, int n);

}  // namespace pinncert
