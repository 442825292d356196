#include "jolo/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "jolo/errors.hpp"

namespace jolo {

double Psi::operator[](int i) const {
    switch (i) {
        case 0: return a1;
        case 1: return b1;
        case 2: return a2;
        case 3: return b2;
    }
    throw data_error("Psi: index out of range");
}

double& Psi::at(int i) {
    switch (i) {
        case 0: return a1;
        case 1: return b1;
        case 2: return a2;
        case 3: return b2;
    }
    throw data_error("Psi: index out of range");
}

bool Psi::valid() const {
    for (int i = 0; i < 4; ++i)
        if (!(operator[](i) > 0.0) || !std::isfinite(operator[](i))) return false;
    return true;
}

namespace {

// Per-population sufficient pieces of the censored likelihood. For pop 1 the
// relevant indicators are nu_i, for pop 2 they are 1-nu_i.
struct PopView {
    const CensoredSample& s;
    int pop;  // 1 or 2

    int r_obs() const { return pop == 1 ? s.m_r() : s.n_r(); }
    int size() const { return pop == 1 ? s.m : s.n; }
    int censored() const { return size() - r_obs(); }
    bool uses(int i) const { return (s.nu[static_cast<size_t>(i)] == 1) == (pop == 1); }

    // sum over observed failures of ln(1+beta w_i)
    double sum_log(double beta) const {
        double acc = 0.0;
        for (int i = 0; i < s.r; ++i)
            if (uses(i)) acc += std::log1p(beta * s.w[static_cast<size_t>(i)]);
        return acc;
    }
    // sum over observed failures of w_i/(1+beta w_i)
    double sum_frac(double beta) const {
        double acc = 0.0;
        for (int i = 0; i < s.r; ++i)
            if (uses(i)) {
                double wi = s.w[static_cast<size_t>(i)];
                acc += wi / (1.0 + beta * wi);
            }
        return acc;
    }
    // sum over observed failures of w_i^2/(1+beta w_i)^2
    double sum_frac2(double beta) const {
        double acc = 0.0;
        for (int i = 0; i < s.r; ++i)
            if (uses(i)) {
                double wi = s.w[static_cast<size_t>(i)];
                double f = wi / (1.0 + beta * wi);
                acc += f * f;
            }
        return acc;
    }
    // the alpha-score denominator L(beta); positive whenever anything was observed
    double shape_denom(double beta) const {
        return sum_log(beta) + censored() * std::log1p(beta * s.w_r());
    }
};

} // namespace

double loglik(const Psi& psi, const CensoredSample& s) {
    PopView p1{s, 1}, p2{s, 2};
    double l = 0.0;
    l += p1.r_obs() * (std::log(psi.a1) + std::log(psi.b1)) - (psi.a1 + 1.0) * p1.sum_log(psi.b1);
    l += p2.r_obs() * (std::log(psi.a2) + std::log(psi.b2)) - (psi.a2 + 1.0) * p2.sum_log(psi.b2);
    l -= psi.a1 * p1.censored() * std::log1p(psi.b1 * s.w_r());
    l -= psi.a2 * p2.censored() * std::log1p(psi.b2 * s.w_r());
    return l;
}

std::array<double, 4> gradient(const Psi& psi, const CensoredSample& s) {
    PopView p1{s, 1}, p2{s, 2};
    double lw_r1 = std::log1p(psi.b1 * s.w_r());
    double lw_r2 = std::log1p(psi.b2 * s.w_r());
    std::array<double, 4> g;
    g[0] = p1.r_obs() / psi.a1 - p1.sum_log(psi.b1) - p1.censored() * lw_r1;
    g[1] = p1.r_obs() / psi.b1 - (psi.a1 + 1.0) * p1.sum_frac(psi.b1) -
           psi.a1 * p1.censored() * s.w_r() / (1.0 + psi.b1 * s.w_r());
    g[2] = p2.r_obs() / psi.a2 - p2.sum_log(psi.b2) - p2.censored() * lw_r2;
    g[3] = p2.r_obs() / psi.b2 - (psi.a2 + 1.0) * p2.sum_frac(psi.b2) -
           psi.a2 * p2.censored() * s.w_r() / (1.0 + psi.b2 * s.w_r());
    return g;
}

double grad_sup_norm(const std::array<double, 4>& g) {
    double m = 0.0;
    for (double v : g) m = std::max(m, std::abs(v));
    return m;
}

std::pair<double, double> profile_alpha(double beta1, double beta2, const CensoredSample& s) {
    if (s.degenerate())
        throw degenerate_indicator_error(
            "profile_alpha: both populations must appear among the failures");
    PopView p1{s, 1}, p2{s, 2};
    return {p1.r_obs() / p1.shape_denom(beta1), p2.r_obs() / p2.shape_denom(beta2)};
}

double profile_score(double beta, const CensoredSample& s, int pop) {
    PopView pv{s, pop};
    double L = pv.shape_denom(beta);
    double alpha = pv.r_obs() / L;
    double A = pv.sum_frac(beta);
    double B = pv.censored() * s.w_r() / (1.0 + beta * s.w_r());
    return pv.r_obs() / beta - (alpha + 1.0) * A - alpha * B;
}

double profile_score_deriv(double beta, const CensoredSample& s, int pop) {
    PopView pv{s, pop};
    double L = pv.shape_denom(beta);
    double alpha = pv.r_obs() / L;
    double A = pv.sum_frac(beta);
    double wf = s.w_r() / (1.0 + beta * s.w_r());
    double B = pv.censored() * wf;
    double Lp = A + B;                                 // dL/dbeta
    double Ap = -pv.sum_frac2(beta);
    double Bp = -pv.censored() * wf * wf;
    // alpha'(beta) = -alpha L'/L
    return -pv.r_obs() / (beta * beta) + alpha * Lp * Lp / L - (alpha + 1.0) * Ap - alpha * Bp;
}

double profile_loglik(double beta, const CensoredSample& s, int pop) {
    PopView pv{s, pop};
    double L = pv.shape_denom(beta);
    double alpha = pv.r_obs() / L;
    // the (alpha+1)*sum_log and censored terms collapse to -sum_log - r_obs
    return pv.r_obs() * (std::log(alpha) + std::log(beta)) - pv.sum_log(beta) - pv.r_obs();
}

namespace {

struct RootSolve {
    double beta = 1.0;
    bool converged = false;
    int iterations = 0;
};

constexpr double kBetaLo = 1e-8;
constexpr double kBetaHi = 1e8;

// Safeguarded Newton on a 1-D score: a coarse log-grid scan locates a
// bracketing sign change (preferring one near the supplied start), then Newton
// steps run with bisection fallback whenever they leave the bracket or fail to
// shrink the score. With no sign change anywhere the score has no interior
// zero; the scan's best point is returned non-converged.
RootSolve solve_score_root(const std::function<double(double)>& g,
                           const std::function<double(double)>& gp,
                           const std::function<double(double)>& obj, double start, double tol,
                           int max_iter) {
    RootSolve out;
    start = std::clamp(start, kBetaLo, kBetaHi);

    const int per_decade = 4;
    const int steps = 16 * per_decade;  // 1e-8 .. 1e8
    double lo = 0.0, hi = 0.0;
    double glo = 0.0;
    bool have_bracket = false;
    double best_beta = start, best_obj = -std::numeric_limits<double>::infinity();
    double prev_b = 0.0, prev_g = 0.0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= steps; ++k) {
        double b = kBetaLo * std::pow(10.0, static_cast<double>(k) / per_decade);
        double gb = g(b);
        double ob = obj(b);
        if (std::isfinite(ob) && ob > best_obj) {
            best_obj = ob;
            best_beta = b;
        }
        if (k > 0 && std::isfinite(prev_g) && std::isfinite(gb) &&
            ((prev_g > 0.0) != (gb > 0.0))) {
            // prefer the sign change closest to the requested start (log scale)
            double mid = std::sqrt(prev_b * b);
            double dist = std::abs(std::log(mid / start));
            if (!have_bracket || dist < best_dist) {
                lo = prev_b;
                hi = b;
                glo = prev_g;
                best_dist = dist;
                have_bracket = true;
            }
        }
        prev_b = b;
        prev_g = gb;
    }
    if (!have_bracket) {
        out.beta = best_beta;
        out.converged = false;
        return out;
    }

    double x = (start > lo && start < hi) ? start : std::sqrt(lo * hi);
    double gx = g(x);
    for (out.iterations = 1; out.iterations <= max_iter; ++out.iterations) {
        if (std::abs(gx) <= tol) {
            out.converged = true;
            break;
        }
        // keep the bracket current
        if ((gx > 0.0) == (glo > 0.0)) {
            lo = x;
            glo = gx;
        } else {
            hi = x;
        }
        double d = gp(x);
        double xn = x - gx / d;
        if (!std::isfinite(xn) || xn <= lo || xn >= hi) xn = 0.5 * (lo + hi);
        double gn = g(xn);
        if (!std::isfinite(gn)) {
            xn = 0.5 * (lo + hi);
            gn = g(xn);
        }
        x = xn;
        gx = gn;
    }
    out.beta = x;
    if (!out.converged && std::abs(gx) <= tol) out.converged = true;
    return out;
}

} // namespace

Psi default_init(const CensoredSample& s) {
    auto moments_pair = [](const std::vector<double>& v) -> std::pair<double, double> {
        if (v.size() < 2) return {1.0, 1.0};
        double mu = 0.0;
        for (double x : v) mu += x;
        mu /= static_cast<double>(v.size());
        double var = 0.0;
        for (double x : v) var += (x - mu) * (x - mu);
        var /= static_cast<double>(v.size() - 1);
        if (!(mu > 0.0) || !(var > mu * mu)) return {1.0, 1.0};
        double t = var / (mu * mu);
        double alpha = 2.0 * t / (t - 1.0);
        double beta = 1.0 / (mu * (alpha - 1.0));
        if (!std::isfinite(alpha) || !std::isfinite(beta) || alpha <= 0.0 || beta <= 0.0)
            return {1.0, 1.0};
        return {alpha, beta};
    };
    std::vector<double> xs, ys;
    for (int i = 0; i < s.r; ++i)
        (s.nu[static_cast<size_t>(i)] == 1 ? xs : ys).push_back(s.w[static_cast<size_t>(i)]);
    auto [a1, b1] = moments_pair(xs);
    auto [a2, b2] = moments_pair(ys);
    return Psi{a1, b1, a2, b2};
}

FitResult fit_nr(const CensoredSample& s, const Psi& init, const SolverConfig& cfg) {
    if (s.degenerate())
        throw degenerate_indicator_error("fit_nr: MLE undefined when one sample never fails");
    if (!init.valid()) throw data_error("fit_nr: init must be positive finite");

    FitResult res;
    res.method = FitMethod::NR;
    int iters = 0;
    double beta_hat[2];
    bool ok = true;
    for (int pop = 1; pop <= 2; ++pop) {
        auto g = [&](double b) { return profile_score(b, s, pop); };
        auto gp = [&](double b) { return profile_score_deriv(b, s, pop); };
        auto obj = [&](double b) { return profile_loglik(b, s, pop); };
        RootSolve sol = solve_score_root(g, gp, obj, pop == 1 ? init.b1 : init.b2, cfg.tol,
                                         cfg.max_iter);
        beta_hat[pop - 1] = sol.beta;
        iters += sol.iterations;
        ok = ok && sol.converged;
    }
    auto [a1, a2] = profile_alpha(beta_hat[0], beta_hat[1], s);
    res.psi = Psi{a1, beta_hat[0], a2, beta_hat[1]};
    res.iterations = iters;
    res.final_gradient_norm = grad_sup_norm(gradient(res.psi, s));
    res.converged = ok && res.final_gradient_norm <= cfg.tol;
    return res;
}

double complete_loglik(const LomaxParams& p, const std::vector<double>& x) {
    double sl = 0.0;
    for (double xi : x) sl += std::log1p(p.beta * xi);
    return static_cast<double>(x.size()) * (std::log(p.alpha) + std::log(p.beta)) -
           (p.alpha + 1.0) * sl;
}

std::array<double, 2> complete_gradient(const LomaxParams& p, const std::vector<double>& x) {
    double sl = 0.0, sf = 0.0;
    for (double xi : x) {
        sl += std::log1p(p.beta * xi);
        sf += xi / (1.0 + p.beta * xi);
    }
    double q = static_cast<double>(x.size());
    return {q / p.alpha - sl, q / p.beta - (p.alpha + 1.0) * sf};
}

CompleteFitResult fit_complete(const std::vector<double>& x, const SolverConfig& cfg) {
    if (x.size() < 2) throw data_error("fit_complete: need at least 2 observations");
    bool distinct = false;
    for (size_t i = 1; i < x.size(); ++i)
        if (x[i] != x[0]) distinct = true;
    if (!distinct) throw data_error("fit_complete: need at least 2 distinct observations");
    for (double xi : x)
        if (!(xi > 0.0) || !std::isfinite(xi))
            throw data_error("fit_complete: observations must be positive finite");

    double q = static_cast<double>(x.size());
    auto denom = [&](double b) {
        double sl = 0.0;
        for (double xi : x) sl += std::log1p(b * xi);
        return sl;
    };
    auto g = [&](double b) {
        double sl = 0.0, sf = 0.0;
        for (double xi : x) {
            sl += std::log1p(b * xi);
            sf += xi / (1.0 + b * xi);
        }
        return q / b - (q / sl + 1.0) * sf;
    };
    auto gp = [&](double b) {
        double sl = 0.0, sf = 0.0, sf2 = 0.0;
        for (double xi : x) {
            sl += std::log1p(b * xi);
            double f = xi / (1.0 + b * xi);
            sf += f;
            sf2 += f * f;
        }
        double alpha = q / sl;
        return -q / (b * b) + alpha * sf * sf / sl + (alpha + 1.0) * sf2;
    };
    auto obj = [&](double b) {
        double sl = denom(b);
        double alpha = q / sl;
        return q * (std::log(alpha) + std::log(b)) - sl - q;
    };

    RootSolve sol = solve_score_root(g, gp, obj, 1.0, cfg.tol, cfg.max_iter);
    CompleteFitResult out;
    out.params = LomaxParams(q / denom(sol.beta), sol.beta);
    out.iterations = sol.iterations;
    auto grad = complete_gradient(out.params, x);
    out.final_gradient_norm = std::max(std::abs(grad[0]), std::abs(grad[1]));
    out.converged = sol.converged && out.final_gradient_norm <= cfg.tol;
    return out;
}

} // namespace jolo
