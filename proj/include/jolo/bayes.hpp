#pragma once

#include <functional>
#include <string>
#include <vector>

#include "jolo/interval.hpp"
#include "jolo/likelihood.hpp"
#include "jolo/rng.hpp"

namespace jolo {

// Independent gamma priors, rate convention (density ~ x^{a-1} e^{-b x}):
//   alpha1 ~ G(a1, b1), beta1 ~ G(c1, d1), alpha2 ~ G(a2, b2), beta2 ~ G(c2, d2)
struct PriorHyper {
    double a1, b1, c1, d1;
    double a2, b2, c2, d2;

    void validate() const;
};

struct LossSpec {
    enum class Kind { SEL, LINEX, GEL };
    Kind kind = Kind::SEL;
    double param = 0.0;  // LINEX nu or GEL kappa; unused for SEL

    static LossSpec sel() { return {Kind::SEL, 0.0}; }
    static LossSpec linex(double nu);
    static LossSpec gel(double kappa);
    // accepts "sel", "linex:<nu>", "gel:<kappa>"
    static LossSpec parse(const std::string& text);
    std::string label() const;
};

// Importance-sampling output: T posterior draws with unnormalized log-weights.
struct WeightedDraws {
    std::vector<Psi> draws;
    std::vector<double> log_weights;
    int T = 0;
};

// Samples the gamma-factorized proposal
//   beta1 ~ G(m_r+c1, d1), alpha1|beta1 ~ G(m_r+a1, K1), (population 2 alike)
// where K1 = b1 + (m-m_r) ln(1+beta1 w_r) + sum nu_i ln(1+beta1 w_i), and
// attaches the log importance weight
//   -sum nu_i ln(1+beta1 w_i) - sum (1-nu_i) ln(1+beta2 w_i)
//   - (m_r+a1) ln K1 - (n_r+a2) ln K2,
// which makes proposal x weight proportional to the posterior density.
WeightedDraws draw_posterior(const CensoredSample& s, const PriorHyper& prior, int T, Rng& rng);

// Self-normalized point estimate of target(psi) under the given loss:
//   SEL:    weighted mean
//   LINEX:  -(1/nu) ln E[e^{-nu t}]
//   GEL:    (E[t^{-kappa}])^{-1/kappa}
// All aggregation runs through log-sum-exp.
double estimate(const WeightedDraws& d, const LossSpec& loss,
                const std::function<double(const Psi&)>& target);
double estimate(const WeightedDraws& d, const LossSpec& loss, int coordinate);

// Shortest interval covering `level` posterior mass: draws are sorted by the
// target coordinate and every window whose cumulative normalized weight
// reaches the level is considered, the shortest winning.
IntervalEstimate credible_interval(const WeightedDraws& d, int coordinate, double level);

// Weighted quantile of one coordinate (0.5 gives the posterior median).
double weighted_quantile(const WeightedDraws& d, int coordinate, double q);

// Effective sample size (sum w)^2 / sum w^2 of the normalized weights.
double ess(const WeightedDraws& d);

} // namespace jolo
