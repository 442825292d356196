#pragma once

#include <vector>

#include "jolo/rng.hpp"

namespace jolo {

// One population's Lomax parameter pair, rate convention:
//   pdf  f(x) = alpha * beta * (1 + beta x)^(-alpha - 1),  x > 0
//   cdf  F(x) = 1 - (1 + beta x)^(-alpha)
// alpha is the shape; beta has units 1/time.
struct LomaxParams {
    double alpha;
    double beta;

    LomaxParams(double a, double b);
};

double pdf(const LomaxParams& p, double x);
double log_pdf(const LomaxParams& p, double x);
double cdf(const LomaxParams& p, double x);
double survival(const LomaxParams& p, double x);      // 1 - cdf, stable for large alpha
double log_survival(const LomaxParams& p, double x);  // -alpha * log1p(beta x)
double quantile(const LomaxParams& p, double u);      // u in [0,1)

double sample_one(const LomaxParams& p, Rng& rng);
std::vector<double> sample(const LomaxParams& p, Rng& rng, int count);

// Conditional expectations over the censored tail (Z > w_r), the two kernels
// the censored-data fitter needs in its expectation step:
//   trunc_e1 = E[ln(1 + beta Z) | Z > w_r] = ln(1 + beta w_r) + 1/alpha
//   trunc_e2 = E[Z / (1 + beta Z) | Z > w_r]
//            = (1 + (alpha+1) beta w_r) / (beta (alpha+1) (1 + beta w_r))
double trunc_e1(const LomaxParams& p, double w_r);
double trunc_e2(const LomaxParams& p, double w_r);

} // namespace jolo
