#include "jolo/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "jolo/errors.hpp"

namespace jolo {

void PriorHyper::validate() const {
    const double v[] = {a1, b1, c1, d1, a2, b2, c2, d2};
    for (double x : v)
        if (!(x > 0.0) || !std::isfinite(x))
            throw data_error("PriorHyper: all hyper-parameters must be positive finite");
}

LossSpec LossSpec::linex(double nu) {
    if (nu == 0.0 || !std::isfinite(nu)) throw data_error("LINEX loss: nu must be nonzero");
    return {Kind::LINEX, nu};
}

LossSpec LossSpec::gel(double kappa) {
    if (kappa == 0.0 || !std::isfinite(kappa))
        throw data_error("GEL loss: kappa must be nonzero");
    return {Kind::GEL, kappa};
}

LossSpec LossSpec::parse(const std::string& text) {
    if (text == "sel") return sel();
    auto colon = text.find(':');
    if (colon != std::string::npos) {
        std::string head = text.substr(0, colon);
        std::string tail = text.substr(colon + 1);
        try {
            size_t used = 0;
            double v = std::stod(tail, &used);
            if (used == tail.size()) {
                if (head == "linex") return linex(v);
                if (head == "gel") return gel(v);
            }
        } catch (const std::exception&) {
            // falls through to the usage error below
        }
    }
    throw usage_error("loss must be sel, linex:<nu>, or gel:<kappa>; got '" + text + "'");
}

std::string LossSpec::label() const {
    char buf[32];
    switch (kind) {
        case Kind::SEL: return "SEL";
        case Kind::LINEX: std::snprintf(buf, sizeof buf, "LINEX%+g", param); return buf;
        case Kind::GEL: std::snprintf(buf, sizeof buf, "GEL%+g", param); return buf;
    }
    return "?";
}

WeightedDraws draw_posterior(const CensoredSample& s, const PriorHyper& prior, int T, Rng& rng) {
    prior.validate();
    if (T < 1) throw data_error("draw_posterior: T must be >= 1");
    WeightedDraws out;
    out.T = T;
    out.draws.reserve(static_cast<size_t>(T));
    out.log_weights.reserve(static_cast<size_t>(T));

    int m_r = s.m_r(), n_r = s.n_r();
    for (int j = 0; j < T; ++j) {
        double beta1 = rng.gamma(m_r + prior.c1, prior.d1);
        double beta2 = rng.gamma(n_r + prior.c2, prior.d2);
        double S1 = 0.0, S2 = 0.0;  // observed sums of ln(1+beta w_i) per population
        for (int i = 0; i < s.r; ++i) {
            double wi = s.w[static_cast<size_t>(i)];
            if (s.nu[static_cast<size_t>(i)] == 1)
                S1 += std::log1p(beta1 * wi);
            else
                S2 += std::log1p(beta2 * wi);
        }
        double K1 = prior.b1 + (s.m - m_r) * std::log1p(beta1 * s.w_r()) + S1;
        double K2 = prior.b2 + (s.n - n_r) * std::log1p(beta2 * s.w_r()) + S2;
        double alpha1 = rng.gamma(m_r + prior.a1, K1);
        double alpha2 = rng.gamma(n_r + prior.a2, K2);
        double log_w =
            -S1 - S2 - (m_r + prior.a1) * std::log(K1) - (n_r + prior.a2) * std::log(K2);
        out.draws.push_back(Psi{alpha1, beta1, alpha2, beta2});
        out.log_weights.push_back(log_w);
    }
    return out;
}

namespace {

double log_sum_exp(const std::vector<double>& v) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double x : v) mx = std::max(mx, x);
    if (!std::isfinite(mx)) throw numerical_error("log_sum_exp: no finite terms");
    double acc = 0.0;
    for (double x : v) acc += std::exp(x - mx);
    return mx + std::log(acc);
}

} // namespace

double estimate(const WeightedDraws& d, const LossSpec& loss,
                const std::function<double(const Psi&)>& target) {
    if (d.T < 1 || d.draws.empty()) throw data_error("estimate: empty draw set");
    std::vector<double> shifted(d.log_weights.size());
    double denom = log_sum_exp(d.log_weights);

    switch (loss.kind) {
        case LossSpec::Kind::SEL: {
            // targets can change sign in principle, so fold signs explicitly
            double mx = *std::max_element(d.log_weights.begin(), d.log_weights.end());
            double num = 0.0, den = 0.0;
            for (size_t j = 0; j < d.draws.size(); ++j) {
                double wj = std::exp(d.log_weights[j] - mx);
                num += wj * target(d.draws[j]);
                den += wj;
            }
            return num / den;
        }
        case LossSpec::Kind::LINEX: {
            for (size_t j = 0; j < d.draws.size(); ++j)
                shifted[j] = d.log_weights[j] - loss.param * target(d.draws[j]);
            return -(log_sum_exp(shifted) - denom) / loss.param;
        }
        case LossSpec::Kind::GEL: {
            for (size_t j = 0; j < d.draws.size(); ++j) {
                double t = target(d.draws[j]);
                if (!(t > 0.0))
                    throw numerical_error("GEL estimate: target must be positive");
                shifted[j] = d.log_weights[j] - loss.param * std::log(t);
            }
            return std::exp(-(log_sum_exp(shifted) - denom) / loss.param);
        }
    }
    throw numerical_error("estimate: unknown loss");
}

double estimate(const WeightedDraws& d, const LossSpec& loss, int coordinate) {
    return estimate(d, loss, [coordinate](const Psi& p) { return p[coordinate]; });
}

namespace {

// sorted (value, normalized weight) pairs of one coordinate
std::vector<std::pair<double, double>> sorted_weighted(const WeightedDraws& d, int coordinate) {
    std::vector<std::pair<double, double>> vw(d.draws.size());
    double mx = *std::max_element(d.log_weights.begin(), d.log_weights.end());
    double total = 0.0;
    for (size_t j = 0; j < d.draws.size(); ++j) {
        double wj = std::exp(d.log_weights[j] - mx);
        vw[j] = {d.draws[j][coordinate], wj};
        total += wj;
    }
    for (auto& p : vw) p.second /= total;
    std::sort(vw.begin(), vw.end());
    return vw;
}

} // namespace

double weighted_quantile(const WeightedDraws& d, int coordinate, double q) {
    if (d.draws.empty()) throw data_error("weighted_quantile: empty draw set");
    auto vw = sorted_weighted(d, coordinate);
    double acc = 0.0;
    for (const auto& p : vw) {
        acc += p.second;
        if (acc >= q) return p.first;
    }
    return vw.back().first;
}

IntervalEstimate credible_interval(const WeightedDraws& d, int coordinate, double level) {
    if (d.draws.size() < 100) throw data_error("credible_interval: need at least 100 draws");
    if (!(level > 0.0 && level < 1.0))
        throw data_error("credible_interval: level must lie in (0,1)");
    auto vw = sorted_weighted(d, coordinate);
    size_t M = vw.size();
    // cum[k] = weight of the first k draws
    std::vector<double> cum(M + 1, 0.0);
    for (size_t k = 0; k < M; ++k) cum[k + 1] = cum[k] + vw[k].second;

    IntervalEstimate best;
    best.level = level;
    best.method = IntervalMethod::Bayes;
    double best_len = std::numeric_limits<double>::infinity();
    size_t hi = 0;
    for (size_t lo = 0; lo < M; ++lo) {
        if (hi < lo + 1) hi = lo + 1;
        // smallest upper index whose window mass reaches the level
        while (hi < M && cum[hi] - cum[lo] < level) ++hi;
        if (cum[hi] - cum[lo] < level) break;
        double len = vw[hi - 1].first - vw[lo].first;
        if (len < best_len) {
            best_len = len;
            best.lower = vw[lo].first;
            best.upper = vw[hi - 1].first;
        }
    }
    if (!std::isfinite(best_len))
        throw numerical_error("credible_interval: could not accumulate the requested mass");
    return best;
}

double ess(const WeightedDraws& d) {
    if (d.log_weights.empty()) return 0.0;
    double mx = *std::max_element(d.log_weights.begin(), d.log_weights.end());
    double s1 = 0.0, s2 = 0.0;
    for (double lw : d.log_weights) {
        double w = std::exp(lw - mx);
        s1 += w;
        s2 += w * w;
    }
    return s1 * s1 / s2;
}

} // namespace jolo
