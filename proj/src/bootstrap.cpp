#include "jolo/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "jolo/errors.hpp"
#include "jolo/rng.hpp"

namespace jolo {

CensoredSample boot_resample(const CensoredSample& s, const Psi& psi_hat, BootScheme scheme,
                             Rng& rng) {
    if (scheme == BootScheme::Parametric)
        return generate(psi_hat.pop1(), psi_hat.pop2(), s.m, s.n, s.r, rng);
    // r pairs drawn i.i.d. with replacement, re-sorted by failure time; the
    // sample sizes m, n stay those of the original experiment
    std::vector<std::pair<double, int>> pairs(static_cast<size_t>(s.r));
    for (auto& pr : pairs) {
        int idx = static_cast<int>(rng.uniform() * s.r);
        if (idx >= s.r) idx = s.r - 1;
        pr = {s.w[static_cast<size_t>(idx)], s.nu[static_cast<size_t>(idx)]};
    }
    std::sort(pairs.begin(), pairs.end());
    std::vector<double> w(static_cast<size_t>(s.r));
    std::vector<int> nu(static_cast<size_t>(s.r));
    for (int i = 0; i < s.r; ++i) {
        w[static_cast<size_t>(i)] = pairs[static_cast<size_t>(i)].first;
        nu[static_cast<size_t>(i)] = pairs[static_cast<size_t>(i)].second;
    }
    return CensoredSample(std::move(w), std::move(nu), s.m, s.n);
}

namespace {

// order statistic at probability q over D sorted values: index ceil(D q),
// clamped into [1, D] (1-based)
double order_stat(const std::vector<double>& sorted, double q) {
    int D = static_cast<int>(sorted.size());
    int idx = static_cast<int>(std::ceil(q * D));
    idx = std::clamp(idx, 1, D);
    return sorted[static_cast<size_t>(idx - 1)];
}

struct Replicates {
    // per-coordinate estimates (and t-statistics when requested)
    std::array<std::vector<double>, 4> est;
    std::array<std::vector<double>, 4> tstat;
    int redraws = 0;
};

// Common driver: fit the original sample, then collect exactly D usable
// replicate fits. A replicate is unusable when resampling degenerates (one
// population vanishes from the failures) or the refit produces non-finite
// values; those are redrawn and counted. Hitting D failed draws aborts.
Replicates collect(const CensoredSample& s, const FitResult& base, const BootstrapConfig& cfg,
                   bool want_t) {
    Replicates out;
    for (int i = 0; i < 4; ++i) {
        out.est[static_cast<size_t>(i)].reserve(static_cast<size_t>(cfg.D));
        if (want_t) out.tstat[static_cast<size_t>(i)].reserve(static_cast<size_t>(cfg.D));
    }
    int collected = 0;
    for (int d = 0; collected < cfg.D; ++d) {
        if (out.redraws > cfg.D)
            throw numerical_error(
                "bootstrap: more than half of the resampled datasets were unusable");
        Rng rng = derive_stream({cfg.seed, 0xb00737ULL, static_cast<std::uint64_t>(d)});
        try {
            CensoredSample rs = boot_resample(s, base.psi, cfg.scheme, rng);
            // warm-start each refit at the original estimate
            FitResult fr = fit_em(rs, base.psi);
            if (!fr.psi.valid()) throw numerical_error("non-finite replicate estimate");
            std::array<double, 4> se{};
            if (want_t) {
                InfoMatrices info = observed_info(fr.psi, rs);
                for (int i = 0; i < 4; ++i) {
                    double v = info.covariance[i][i];
                    if (!(v > 0.0) || !std::isfinite(v))
                        throw numerical_error("nonpositive replicate variance");
                    se[static_cast<size_t>(i)] = std::sqrt(v);
                }
            }
            for (int i = 0; i < 4; ++i) {
                out.est[static_cast<size_t>(i)].push_back(fr.psi[i]);
                if (want_t)
                    out.tstat[static_cast<size_t>(i)].push_back(
                        (fr.psi[i] - base.psi[i]) / se[static_cast<size_t>(i)]);
            }
            ++collected;
        } catch (const data_error&) {
            // covers degenerate indicator vectors and pair draws whose
            // indicator counts exceed a sample size: both invalid resamples
            ++out.redraws;
        } catch (const numerical_error&) {
            ++out.redraws;
        }
    }
    return out;
}

FitResult fit_base(const CensoredSample& s) {
    FitResult base = fit_em(s, default_init(s));
    if (!base.psi.valid())
        throw numerical_error("bootstrap: estimation failed on the original sample");
    return base;
}

void check_cfg(const BootstrapConfig& cfg) {
    if (cfg.D < 100) throw data_error("bootstrap: need D >= 100");
    if (!(cfg.level > 0.0 && cfg.level < 1.0))
        throw data_error("bootstrap: level must lie in (0,1)");
}

} // namespace

namespace {

BootResult intervals_p(const Replicates& reps, const FitResult& base,
                       const BootstrapConfig& cfg) {
    BootResult out;
    out.base_fit = base;
    out.redraw_count = reps.redraws;
    double half_alpha = 0.5 * (1.0 - cfg.level);
    for (int i = 0; i < 4; ++i) {
        std::vector<double> v = reps.est[static_cast<size_t>(i)];
        std::sort(v.begin(), v.end());
        IntervalEstimate ci;
        ci.level = cfg.level;
        ci.method = IntervalMethod::BootP;
        ci.lower = order_stat(v, half_alpha);
        ci.upper = order_stat(v, 1.0 - half_alpha);
        out.ci[static_cast<size_t>(i)] = ci;
    }
    return out;
}

BootResult intervals_t(const Replicates& reps, const FitResult& base, const CensoredSample& s,
                       const BootstrapConfig& cfg) {
    InfoMatrices info = observed_info(base.psi, s);
    std::array<double, 4> se{};
    for (int i = 0; i < 4; ++i) {
        double v = info.covariance[i][i];
        if (!(v > 0.0) || !std::isfinite(v))
            throw numerical_error("boot_t: nonpositive variance on the original sample");
        se[static_cast<size_t>(i)] = std::sqrt(v);
    }
    BootResult out;
    out.base_fit = base;
    out.redraw_count = reps.redraws;
    double half_alpha = 0.5 * (1.0 - cfg.level);
    for (int i = 0; i < 4; ++i) {
        std::vector<double> t = reps.tstat[static_cast<size_t>(i)];
        std::sort(t.begin(), t.end());
        IntervalEstimate ci;
        ci.level = cfg.level;
        ci.method = IntervalMethod::BootT;
        ci.lower = base.psi[i] + order_stat(t, half_alpha) * se[static_cast<size_t>(i)];
        ci.upper = base.psi[i] + order_stat(t, 1.0 - half_alpha) * se[static_cast<size_t>(i)];
        if (ci.lower < 0.0) {
            ci.lower = 0.0;
            ci.clamped_lower = true;
        }
        out.ci[static_cast<size_t>(i)] = ci;
    }
    return out;
}

} // namespace

BootResult boot_p(const CensoredSample& s, const BootstrapConfig& cfg) {
    check_cfg(cfg);
    FitResult base = fit_base(s);
    Replicates reps = collect(s, base, cfg, false);
    return intervals_p(reps, base, cfg);
}

BootResult boot_t(const CensoredSample& s, const BootstrapConfig& cfg) {
    check_cfg(cfg);
    FitResult base = fit_base(s);
    Replicates reps = collect(s, base, cfg, true);
    return intervals_t(reps, base, s, cfg);
}

std::pair<BootResult, BootResult> boot_pt(const CensoredSample& s, const BootstrapConfig& cfg,
                                          const FitResult& base) {
    check_cfg(cfg);
    Replicates reps = collect(s, base, cfg, true);
    return {intervals_p(reps, base, cfg), intervals_t(reps, base, s, cfg)};
}

std::pair<BootResult, BootResult> boot_pt(const CensoredSample& s, const BootstrapConfig& cfg) {
    check_cfg(cfg);
    return boot_pt(s, cfg, fit_base(s));
}

} // namespace jolo
