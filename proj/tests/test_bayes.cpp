#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "jolo/bayes.hpp"
#include "jolo/censoring.hpp"
#include "jolo/errors.hpp"
#include "jolo/rng.hpp"
#include "oracle_helpers.hpp"

using jolo::CensoredSample;
using jolo::LomaxParams;
using jolo::LossSpec;
using jolo::PriorHyper;
using jolo::Psi;
using jolo::WeightedDraws;

namespace {

WeightedDraws two_point() {
    WeightedDraws d;
    d.draws = {Psi{1.0, 1.0, 1.0, 1.0}, Psi{3.0, 1.0, 1.0, 1.0}};
    d.log_weights = {std::log(0.25), std::log(0.75)};
    d.T = 2;
    return d;
}

WeightedDraws constant_draws(double v, int count) {
    WeightedDraws d;
    d.T = count;
    for (int i = 0; i < count; ++i) {
        d.draws.push_back(Psi{v, v, v, v});
        d.log_weights.push_back(-0.3 * i);  // unequal weights must not matter
    }
    return d;
}

}  // namespace

TEST_CASE("loss parsing and labels") {
    CHECK(LossSpec::parse("sel").kind == LossSpec::Kind::SEL);
    auto lx = LossSpec::parse("linex:-0.5");
    CHECK(lx.kind == LossSpec::Kind::LINEX);
    CHECK(lx.param == -0.5);
    auto ge = LossSpec::parse("gel:0.5");
    CHECK(ge.kind == LossSpec::Kind::GEL);
    CHECK(ge.param == 0.5);
    CHECK_THROWS_AS(LossSpec::parse("quadratic"), jolo::usage_error);
    CHECK_THROWS_AS(LossSpec::parse("linex:abc"), jolo::usage_error);
    CHECK_THROWS_AS(LossSpec::parse("linex:"), jolo::usage_error);
    CHECK(LossSpec::sel().label() == "SEL");
    CHECK(LossSpec::linex(0.5).label() == "LINEX+0.5");
    CHECK(LossSpec::gel(-0.5).label() == "GEL-0.5");
}

TEST_CASE("hand-checked two-point estimates") {
    auto d = two_point();
    CHECK(jolo::estimate(d, LossSpec::sel(), 0) == doctest::Approx(2.5).epsilon(1e-14));
    // LINEX nu=2: -(1/2) ln(0.25 e^-2 + 0.75 e^-6)
    double want_lx = -0.5 * std::log(0.25 * std::exp(-2.0) + 0.75 * std::exp(-6.0));
    CHECK(jolo::estimate(d, LossSpec::linex(2.0), 0) ==
          doctest::Approx(want_lx).epsilon(1e-12));
    // GEL kappa=2: (0.25 * 1 + 0.75 / 9)^(-1/2) = sqrt(3)
    CHECK(jolo::estimate(d, LossSpec::gel(2.0), 0) ==
          doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("degenerate draw sets return the constant under every loss") {
    auto d = constant_draws(2.7, 50);
    for (auto loss : {LossSpec::sel(), LossSpec::linex(0.5), LossSpec::linex(-2.0),
                      LossSpec::gel(0.5), LossSpec::gel(-1.0)}) {
        CHECK(jolo::estimate(d, loss, 0) == doctest::Approx(2.7).epsilon(1e-12));
    }
}

TEST_CASE("entropy loss at kappa = -1 collapses to the squared-error estimate") {
    jolo::Rng gen(12);
    auto s = jolo::generate(LomaxParams{2.0, 3.0}, LomaxParams{3.0, 5.0}, 20, 20, 20, gen);
    PriorHyper prior{4, 2, 12, 4, 6, 2, 20, 4};
    jolo::Rng rng(33);
    auto d = jolo::draw_posterior(s, prior, 5000, rng);
    for (int c = 0; c < 4; ++c) {
        double sel = jolo::estimate(d, LossSpec::sel(), c);
        double gelm1 = jolo::estimate(d, LossSpec::gel(-1.0), c);
        CHECK(gelm1 == doctest::Approx(sel).epsilon(1e-10));
        double lx = jolo::estimate(d, LossSpec::linex(1e-6), c);
        CHECK(std::fabs(lx - sel) < 1e-4);
    }
}

TEST_CASE("estimates are invariant to a constant shift of all log-weights") {
    auto d = two_point();
    auto shifted = d;
    for (auto& lw : shifted.log_weights) lw += 700.0;  // would overflow naive exp
    for (auto loss : {LossSpec::sel(), LossSpec::linex(1.5), LossSpec::gel(0.7)}) {
        CHECK(jolo::estimate(shifted, loss, 0) ==
              doctest::Approx(jolo::estimate(d, loss, 0)).epsilon(1e-12));
    }
}

TEST_CASE("entropy loss refuses nonpositive targets") {
    auto d = two_point();
    CHECK_THROWS_AS(jolo::estimate(d, LossSpec::gel(0.5),
                                   [](const Psi& p) { return p.a1 - 10.0; }),
                    jolo::numerical_error);
}

TEST_CASE("posterior sampler is deterministic and structurally sound") {
    jolo::Rng gen(12);
    auto s = jolo::generate(LomaxParams{2.0, 3.0}, LomaxParams{3.0, 5.0}, 20, 20, 20, gen);
    PriorHyper prior{4, 2, 12, 4, 6, 2, 20, 4};
    jolo::Rng r1(5), r2(5);
    auto d1 = jolo::draw_posterior(s, prior, 2000, r1);
    auto d2 = jolo::draw_posterior(s, prior, 2000, r2);
    CHECK(d1.T == 2000);
    CHECK(d1.draws.size() == 2000);
    CHECK(d1.log_weights.size() == 2000);
    for (size_t j = 0; j < d1.draws.size(); ++j) {
        CHECK(d1.draws[j].a1 == d2.draws[j].a1);
        CHECK(d1.log_weights[j] == d2.log_weights[j]);
        CHECK(d1.draws[j].valid());
        CHECK(std::isfinite(d1.log_weights[j]));
    }
    double e = jolo::ess(d1);
    CHECK(e >= 1.0);
    CHECK(e <= 2000.0);
}

TEST_CASE("equal weights give effective size T") {
    auto d = constant_draws(1.0, 40);
    for (auto& lw : d.log_weights) lw = -2.0;
    CHECK(jolo::ess(d) == doctest::Approx(40.0).epsilon(1e-12));
}

TEST_CASE("invalid prior and empty draw sets are rejected") {
    PriorHyper bad{4, 2, 12, 4, 6, 2, 0.0, 4};
    CHECK_THROWS_AS(bad.validate(), jolo::data_error);
    WeightedDraws empty;
    CHECK_THROWS_AS(jolo::estimate(empty, LossSpec::sel(), 0), jolo::data_error);
}

TEST_CASE("weighted quantiles on a known small set") {
    WeightedDraws d;
    for (double v : {4.0, 1.0, 3.0, 2.0}) {
        d.draws.push_back(Psi{v, 1.0, 1.0, 1.0});
        d.log_weights.push_back(0.0);
    }
    d.T = 4;
    CHECK(jolo::weighted_quantile(d, 0, 0.25) == 1.0);
    CHECK(jolo::weighted_quantile(d, 0, 0.5) == 2.0);
    CHECK(jolo::weighted_quantile(d, 0, 0.9) == 4.0);
}

TEST_CASE("shortest credible window on equally weighted ladder") {
    WeightedDraws d;
    for (int v = 1; v <= 100; ++v) {
        d.draws.push_back(Psi{double(v), 1.0, 1.0, 1.0});
        d.log_weights.push_back(0.0);
    }
    d.T = 100;
    auto ci = jolo::credible_interval(d, 0, 0.9);
    // every 90-point window has the same length; the first wins
    CHECK(ci.lower == 1.0);
    CHECK(ci.upper == 90.0);
    CHECK(ci.method == jolo::IntervalMethod::Bayes);
    CHECK(ci.level == 0.9);
}

TEST_CASE("credible interval matches a brute-force search on weighted draws") {
    jolo::Rng rng(246);
    WeightedDraws d;
    for (int j = 0; j < 400; ++j) {
        d.draws.push_back(Psi{rng.gamma(3.0, 1.0), 1.0, 1.0, 1.0});
        d.log_weights.push_back(-0.5 * rng.uniform());
    }
    d.T = 400;
    double level = 0.8;
    auto got = jolo::credible_interval(d, 0, level);

    // brute force over all sorted windows
    std::vector<std::pair<double, double>> vw;
    double mx = *std::max_element(d.log_weights.begin(), d.log_weights.end());
    double total = 0.0;
    for (size_t j = 0; j < d.draws.size(); ++j) {
        double w = std::exp(d.log_weights[j] - mx);
        vw.push_back({d.draws[j].a1, w});
        total += w;
    }
    std::sort(vw.begin(), vw.end());
    double best_len = 1e300, best_lo = 0, best_hi = 0;
    for (size_t lo = 0; lo < vw.size(); ++lo) {
        double mass = 0.0;
        for (size_t hi = lo; hi < vw.size(); ++hi) {
            mass += vw[hi].second / total;
            if (mass >= level) {
                double len = vw[hi].first - vw[lo].first;
                if (len < best_len) {
                    best_len = len;
                    best_lo = vw[lo].first;
                    best_hi = vw[hi].first;
                }
                break;
            }
        }
    }
    CHECK(got.lower == doctest::Approx(best_lo).epsilon(1e-12));
    CHECK(got.upper == doctest::Approx(best_hi).epsilon(1e-12));
    CHECK(got.length() == doctest::Approx(best_len).epsilon(1e-12));
}

TEST_CASE("credible interval input validation") {
    auto d = constant_draws(1.0, 50);
    CHECK_THROWS_AS(jolo::credible_interval(d, 0, 0.95), jolo::data_error);
    auto e = constant_draws(1.0, 200);
    CHECK_THROWS_AS(jolo::credible_interval(e, 0, 1.5), jolo::data_error);
}

TEST_CASE("importance sampling agrees with a Metropolis oracle") {
    // a beta-informative prior keeps the proposal overlapping the posterior
    // (effective size ~25% of T), which is the regime where the weighted-mean
    // standard error is trustworthy enough for a 3-sigma comparison
    jolo::Rng gen(12);
    auto s = jolo::generate(LomaxParams{2.0, 3.0}, LomaxParams{3.0, 5.0}, 20, 20, 20, gen);
    PriorHyper prior{4, 2, 120, 40, 6, 2, 200, 40};
    jolo::Rng rng(501);
    auto d = jolo::draw_posterior(s, prior, 100000, rng);
    CHECK(jolo::ess(d) > 10000.0);

    auto mh = oracle::mh_posterior(s, {4, 2, 120, 40, 6, 2, 200, 40}, Psi{2, 3, 3, 5},
                                   50000, 500000, 0.12, 777);
    CHECK(mh.accept_rate > 0.15);
    CHECK(mh.accept_rate < 0.6);

    double mx = *std::max_element(d.log_weights.begin(), d.log_weights.end());
    double sw = 0.0;
    for (double lw : d.log_weights) sw += std::exp(lw - mx);
    for (int c = 0; c < 4; ++c) {
        double mean = jolo::estimate(d, LossSpec::sel(), c);
        double s2 = 0.0;
        for (size_t j = 0; j < d.draws.size(); ++j) {
            double w = std::exp(d.log_weights[j] - mx) / sw;
            double dev = d.draws[j][c] - mean;
            s2 += w * w * dev * dev;
        }
        double comb = std::sqrt(s2 + mh.mcse[c] * mh.mcse[c]);
        INFO("coordinate ", c, ": IS ", mean, " vs MH ", mh.mean[c]);
        CHECK(std::fabs(mean - mh.mean[c]) <= 3.0 * comb);
    }
}
