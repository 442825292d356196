#include "jolo/ks.hpp"

#include <algorithm>
#include <cmath>

#include "jolo/errors.hpp"

namespace jolo {

double ks_statistic(const std::vector<double>& x, const LomaxParams& p) {
    if (x.size() < 2) throw data_error("ks_statistic: need at least 2 observations");
    std::vector<double> s = x;
    std::sort(s.begin(), s.end());
    double n = static_cast<double>(s.size());
    double d = 0.0;
    for (size_t i = 0; i < s.size(); ++i) {
        double f = cdf(p, s[i]);
        double up = (static_cast<double>(i) + 1.0) / n - f;
        double lo = f - static_cast<double>(i) / n;
        d = std::max(d, std::max(up, lo));
    }
    return d;
}

double ks_pvalue(double d, int n) {
    if (d <= 0.0) return 1.0;
    double t = std::sqrt(static_cast<double>(n)) * d;
    double acc = 0.0;
    for (int k = 1; k <= 100; ++k) {
        double term = std::exp(-2.0 * k * k * t * t);
        acc += (k % 2 == 1 ? term : -term);
        if (term < 1e-16) break;
    }
    double p = 2.0 * acc;
    return std::clamp(p, 0.0, 1.0);
}

std::pair<double, double> ks_test(const std::vector<double>& x, const LomaxParams& p) {
    double d = ks_statistic(x, p);
    return {d, ks_pvalue(d, static_cast<int>(x.size()))};
}

} // namespace jolo
