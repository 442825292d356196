#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "jolo/em.hpp"
#include "jolo/interval.hpp"
#include "jolo/likelihood.hpp"

namespace jolo {

enum class BootScheme { NonparametricPairs, Parametric };

struct BootstrapConfig {
    int D = 500;          // resampled datasets entering the quantiles (>= 100)
    double level = 0.95;
    BootScheme scheme = BootScheme::NonparametricPairs;
    std::uint64_t seed = 0;
};

struct BootResult {
    std::array<IntervalEstimate, 4> ci;
    FitResult base_fit;  // the estimate on the original sample
    int redraw_count = 0;
};

// Percentile bootstrap: D resampled datasets are refit, each coordinate's
// estimates sorted, and the (D alpha/2, D (1-alpha/2)) order statistics taken.
BootResult boot_p(const CensoredSample& s, const BootstrapConfig& cfg);

// Studentized bootstrap: per-replicate t-statistics (psi* - psi_hat)/se(psi*)
// with se from the observed-information covariance at the replicate; the
// interval is psi_hat + t-quantiles times se(psi_hat), lower clamped at 0.
BootResult boot_t(const CensoredSample& s, const BootstrapConfig& cfg);

// Draws one bootstrap dataset: either r pairs (w_i, nu_i) with replacement
// re-sorted under the original m, n (NonparametricPairs), or a fresh
// joint-censored sample simulated from psi_hat (Parametric).
CensoredSample boot_resample(const CensoredSample& s, const Psi& psi_hat, BootScheme scheme,
                             Rng& rng);

// Both interval families from one shared set of replicate fits (the Monte
// Carlo harness path; refitting twice would double the dominant cost). The
// base fit may be supplied when the caller already has it.
std::pair<BootResult, BootResult> boot_pt(const CensoredSample& s, const BootstrapConfig& cfg);
std::pair<BootResult, BootResult> boot_pt(const CensoredSample& s, const BootstrapConfig& cfg,
                                          const FitResult& base);

} // namespace jolo
