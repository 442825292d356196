#include "jolo/lomax.hpp"

#include <cmath>
#include <stdexcept>

#include "jolo/errors.hpp"

namespace jolo {

LomaxParams::LomaxParams(double a, double b) : alpha(a), beta(b) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw data_error("LomaxParams: alpha and beta must be positive finite");
}

static void check_x(double x) {
    if (!(x >= 0.0)) throw data_error("lomax: x must be nonnegative");
}

double log_pdf(const LomaxParams& p, double x) {
    check_x(x);
    return std::log(p.alpha) + std::log(p.beta) - (p.alpha + 1.0) * std::log1p(p.beta * x);
}

double pdf(const LomaxParams& p, double x) {
    return std::exp(log_pdf(p, x));
}

double log_survival(const LomaxParams& p, double x) {
    check_x(x);
    return -p.alpha * std::log1p(p.beta * x);
}

double survival(const LomaxParams& p, double x) {
    return std::exp(log_survival(p, x));
}

double cdf(const LomaxParams& p, double x) {
    // 1 - (1+bx)^(-a) via expm1 so small x keeps full precision
    return -std::expm1(log_survival(p, x));
}

double quantile(const LomaxParams& p, double u) {
    if (!(u >= 0.0 && u < 1.0)) throw data_error("lomax quantile: u must lie in [0,1)");
    // ((1-u)^(-1/alpha) - 1)/beta, with expm1 keeping precision near u = 0
    return std::expm1(-std::log1p(-u) / p.alpha) / p.beta;
}

double sample_one(const LomaxParams& p, Rng& rng) {
    return quantile(p, rng.uniform());
}

std::vector<double> sample(const LomaxParams& p, Rng& rng, int count) {
    if (count < 1) throw data_error("lomax sample: count must be >= 1");
    std::vector<double> out(static_cast<size_t>(count));
    for (auto& v : out) v = sample_one(p, rng);
    return out;
}

double trunc_e1(const LomaxParams& p, double w_r) {
    if (!(w_r >= 0.0)) throw data_error("trunc_e1: w_r must be nonnegative");
    return std::log1p(p.beta * w_r) + 1.0 / p.alpha;
}

double trunc_e2(const LomaxParams& p, double w_r) {
    if (!(w_r >= 0.0)) throw data_error("trunc_e2: w_r must be nonnegative");
    double bw = p.beta * w_r;
    return (1.0 + (p.alpha + 1.0) * bw) / (p.beta * (p.alpha + 1.0) * (1.0 + bw));
}

} // namespace jolo
