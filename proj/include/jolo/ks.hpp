#pragma once

#include <utility>
#include <vector>

#include "jolo/lomax.hpp"

namespace jolo {

// One-sample Kolmogorov-Smirnov against a fully specified Lomax:
//   D = max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n)
double ks_statistic(const std::vector<double>& x, const LomaxParams& p);

// Asymptotic tail probability 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 n D^2).
double ks_pvalue(double d, int n);

std::pair<double, double> ks_test(const std::vector<double>& x, const LomaxParams& p);

} // namespace jolo
