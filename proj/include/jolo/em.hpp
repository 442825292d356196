#pragma once

#include <array>

#include "jolo/interval.hpp"
#include "jolo/likelihood.hpp"

namespace jolo {

// Conditional expectations of the censored observations' sufficient
// statistics given the data and the current parameter iterate.
struct EStepExpectations {
    double e1_x = 0.0;  // E[ln(1+b1 Z) | Z > w_r] at (a1, b1)
    double e2_x = 0.0;  // E[Z/(1+b1 Z) | Z > w_r]
    double e1_y = 0.0;
    double e2_y = 0.0;
    int n_missing_x = 0;  // m - m_r
    int n_missing_y = 0;  // n - n_r
};

using Mat4 = std::array<std::array<double, 4>, 4>;

// Louis decomposition: observed information = complete - missing. All three
// are block-diagonal across the two populations; covariance inverts observed.
struct InfoMatrices {
    Mat4 complete{};
    Mat4 missing{};
    Mat4 observed{};
    Mat4 covariance{};
};

EStepExpectations e_step(const Psi& psi, const CensoredSample& s);

// One fixed-point update: fresh shapes from the expectation-filled shape
// scores, then fresh rates using those shapes with the previous iterate's
// rates inside the sums and tail expectations.
Psi em_step(const Psi& psi, const CensoredSample& s);

// Iterates em_step until the largest relative parameter change drops to tol
// (default 1e-8) or max_iter (default 5000) is hit. final_gradient_norm holds
// the observed-data gradient sup-norm at the last iterate; min_step_delta_ll
// tracks the worst per-step change in observed log-likelihood.
FitResult fit_em(const CensoredSample& s, const Psi& init,
                 const SolverConfig& cfg = SolverConfig{1e-8, 5000});

InfoMatrices observed_info(const Psi& psi, const CensoredSample& s);

// Normal-theory two-sided intervals psi_i +/- z sqrt(cov_ii), lower bounds
// clamped at zero (the parameters are positive).
std::array<IntervalEstimate, 4> approx_ci(const FitResult& fit, const InfoMatrices& info,
                                          double level);

} // namespace jolo
