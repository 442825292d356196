#include "jolo/em.hpp"

#include <cmath>

#include "jolo/errors.hpp"
#include "jolo/rng.hpp"

namespace jolo {

const char* interval_method_name(IntervalMethod m) {
    switch (m) {
        case IntervalMethod::ACI: return "ACI";
        case IntervalMethod::BootP: return "BootP";
        case IntervalMethod::BootT: return "BootT";
        case IntervalMethod::Bayes: return "Bayes";
    }
    return "?";
}

EStepExpectations e_step(const Psi& psi, const CensoredSample& s) {
    EStepExpectations e;
    e.e1_x = trunc_e1(psi.pop1(), s.w_r());
    e.e2_x = trunc_e2(psi.pop1(), s.w_r());
    e.e1_y = trunc_e1(psi.pop2(), s.w_r());
    e.e2_y = trunc_e2(psi.pop2(), s.w_r());
    e.n_missing_x = s.m - s.m_r();
    e.n_missing_y = s.n - s.n_r();
    return e;
}

Psi em_step(const Psi& psi, const CensoredSample& s) {
    if (s.degenerate())
        throw degenerate_indicator_error("em_step: MLE undefined when one sample never fails");
    EStepExpectations e = e_step(psi, s);
    double s1 = 0.0, s2 = 0.0;  // observed sums of ln(1+b w_i)
    double f1 = 0.0, f2 = 0.0;  // observed sums of w_i/(1+b w_i)
    for (int i = 0; i < s.r; ++i) {
        double wi = s.w[static_cast<size_t>(i)];
        if (s.nu[static_cast<size_t>(i)] == 1) {
            s1 += std::log1p(psi.b1 * wi);
            f1 += wi / (1.0 + psi.b1 * wi);
        } else {
            s2 += std::log1p(psi.b2 * wi);
            f2 += wi / (1.0 + psi.b2 * wi);
        }
    }
    Psi next;
    next.a1 = s.m / (s1 + e.n_missing_x * e.e1_x);
    next.a2 = s.n / (s2 + e.n_missing_y * e.e1_y);
    next.b1 = s.m / ((next.a1 + 1.0) * (f1 + e.n_missing_x * e.e2_x));
    next.b2 = s.n / ((next.a2 + 1.0) * (f2 + e.n_missing_y * e.e2_y));
    return next;
}

FitResult fit_em(const CensoredSample& s, const Psi& init, const SolverConfig& cfg) {
    if (s.degenerate())
        throw degenerate_indicator_error("fit_em: MLE undefined when one sample never fails");
    if (!init.valid()) throw data_error("fit_em: init must be positive finite");

    FitResult res;
    res.method = FitMethod::EM;
    Psi cur = init;
    double ll = loglik(cur, s);
    double worst_delta = std::numeric_limits<double>::infinity();
    bool converged = false;
    int k = 0;
    for (; k < cfg.max_iter; ++k) {
        Psi next = em_step(cur, s);
        double rel = 0.0;
        for (int i = 0; i < 4; ++i)
            rel = std::max(rel, std::abs(next[i] - cur[i]) / std::abs(cur[i]));
        double ll_next = loglik(next, s);
        worst_delta = std::min(worst_delta, ll_next - ll);
        cur = next;
        ll = ll_next;
        if (rel <= cfg.tol) {
            converged = true;
            ++k;
            break;
        }
    }
    res.psi = cur;
    res.iterations = k;
    res.converged = converged;
    res.final_gradient_norm = grad_sup_norm(gradient(cur, s));
    res.min_step_delta_ll = worst_delta;
    return res;
}

namespace {

// Per-population 2x2 information blocks, complete-data and per-censored-item.
struct Block {
    double aa, ab, bb;
};

Block complete_block(double alpha, double beta, int size) {
    return {size / (alpha * alpha), size / (beta * (alpha + 1.0)),
            size * alpha / (beta * beta * (alpha + 2.0))};
}

Block missing_block(double alpha, double beta, double w_r, int count) {
    double t = 1.0 + beta * w_r;
    return {count / (alpha * alpha), count / (beta * (alpha + 1.0) * t),
            count * alpha / (beta * beta * (alpha + 2.0) * t * t)};
}

void place(Mat4& m, int off, const Block& b) {
    m[off][off] = b.aa;
    m[off][off + 1] = m[off + 1][off] = b.ab;
    m[off + 1][off + 1] = b.bb;
}

// Inverts one symmetric 2x2 block in place of the 4x4 layout.
void invert_block(const Mat4& src, Mat4& dst, int off) {
    double a = src[off][off], b = src[off][off + 1], d = src[off + 1][off + 1];
    double det = a * d - b * b;
    if (!(std::abs(det) > 0.0) || !std::isfinite(det))
        throw numerical_error("observed_info: singular observed-information block");
    dst[off][off] = d / det;
    dst[off][off + 1] = dst[off + 1][off] = -b / det;
    dst[off + 1][off + 1] = a / det;
}

} // namespace

InfoMatrices observed_info(const Psi& psi, const CensoredSample& s) {
    if (!psi.valid()) throw data_error("observed_info: psi must be positive finite");
    InfoMatrices out;
    place(out.complete, 0, complete_block(psi.a1, psi.b1, s.m));
    place(out.complete, 2, complete_block(psi.a2, psi.b2, s.n));
    place(out.missing, 0, missing_block(psi.a1, psi.b1, s.w_r(), s.m - s.m_r()));
    place(out.missing, 2, missing_block(psi.a2, psi.b2, s.w_r(), s.n - s.n_r()));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out.observed[i][j] = out.complete[i][j] - out.missing[i][j];
    invert_block(out.observed, out.covariance, 0);
    invert_block(out.observed, out.covariance, 2);
    return out;
}

std::array<IntervalEstimate, 4> approx_ci(const FitResult& fit, const InfoMatrices& info,
                                          double level) {
    if (!(level > 0.0 && level < 1.0)) throw data_error("approx_ci: level must lie in (0,1)");
    double z = normal_quantile(0.5 + 0.5 * level);
    std::array<IntervalEstimate, 4> out;
    for (int i = 0; i < 4; ++i) {
        double var = info.covariance[i][i];
        if (!(var >= 0.0) || !std::isfinite(var))
            throw numerical_error("approx_ci: nonpositive variance estimate");
        double half = z * std::sqrt(var);
        IntervalEstimate ci;
        ci.level = level;
        ci.method = IntervalMethod::ACI;
        ci.lower = fit.psi[i] - half;
        ci.upper = fit.psi[i] + half;
        if (ci.lower < 0.0) {
            ci.lower = 0.0;
            ci.clamped_lower = true;
        }
        out[static_cast<size_t>(i)] = ci;
    }
    return out;
}

} // namespace jolo
