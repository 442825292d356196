#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cfloat>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "jolo/errors.hpp"
#include "jolo/mc.hpp"

using jolo::CellReport;
using jolo::ExperimentConfig;
using jolo::GridCell;
using jolo::IntervalEstimate;
using jolo::LossSpec;
using jolo::PriorHyper;
using jolo::Psi;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.true_psi = Psi{2.0, 3.0, 3.0, 5.0};
    cfg.grid = {GridCell{15, 15, 12}};
    cfg.R = 30;
    cfg.T = 400;
    cfg.level = 0.90;
    cfg.seed = 99;
    cfg.losses = {LossSpec::sel(), LossSpec::linex(0.5)};
    cfg.prior_schedule[{15, 15, 12}] = PriorHyper{4, 2, 12, 4, 6, 2, 20, 4};
    return cfg;
}

}  // namespace

TEST_CASE("risk aggregation under each loss, by hand") {
    std::vector<double> est{1.0, 3.0};
    CHECK(jolo::mse_under_loss(est, 2.0, LossSpec::sel()) ==
          doctest::Approx(1.0).epsilon(1e-14));
    // LINEX nu=0.5: mean of exp(.5(e-2)) - .5(e-2) - 1 over e in {1, 3}
    double want = 0.5 * ((std::exp(-0.5) + 0.5 - 1.0) + (std::exp(0.5) - 0.5 - 1.0));
    CHECK(jolo::mse_under_loss(est, 2.0, LossSpec::linex(0.5)) ==
          doctest::Approx(want).epsilon(1e-14));
    // GEL kappa=2: mean of (e/2)^2 - 2 ln(e/2) - 1
    double g1 = 0.25 - 2.0 * std::log(0.5) - 1.0;
    double g2 = 2.25 - 2.0 * std::log(1.5) - 1.0;
    CHECK(jolo::mse_under_loss(est, 2.0, LossSpec::gel(2.0)) ==
          doctest::Approx(0.5 * (g1 + g2)).epsilon(1e-14));
}

TEST_CASE("risk aggregation edge cases") {
    CHECK_THROWS_AS(jolo::mse_under_loss({}, 1.0, LossSpec::sel()), jolo::data_error);
    CHECK_THROWS_AS(jolo::mse_under_loss({-1.0}, 1.0, LossSpec::gel(1.0)),
                    jolo::data_error);
    // overflowing LINEX terms clamp to DBL_MAX instead of reporting inf
    double r = jolo::mse_under_loss({2000.0}, 1.0, LossSpec::linex(1.0));
    CHECK(r == DBL_MAX);
}

TEST_CASE("coverage counts hits and averages lengths") {
    IntervalEstimate a{1.0, 3.0, 0.95, jolo::IntervalMethod::ACI, false};
    IntervalEstimate b{2.5, 6.0, 0.95, jolo::IntervalMethod::ACI, false};
    IntervalEstimate c{0.0, 1.9, 0.95, jolo::IntervalMethod::ACI, true};
    auto st = jolo::coverage({a, b, c}, 2.0);
    CHECK(st.cp == doctest::Approx(100.0 / 3.0).epsilon(1e-12));
    CHECK(st.il == doctest::Approx((2.0 + 3.5 + 1.9) / 3.0).epsilon(1e-12));
}

TEST_CASE("a small cell runs end to end and aggregates consistently") {
    auto cfg = small_config();
    auto rep = jolo::run_cell(cfg, cfg.grid[0]);

    CHECK(rep.m == 15);
    CHECK(rep.n == 15);
    CHECK(rep.r == 12);

    REQUIRE(rep.point.size() == 3);  // EM + two losses
    CHECK(rep.point[0].first == "EM");
    CHECK(rep.point[1].first == "SEL");
    CHECK(rep.point[2].first == "LINEX+0.5");
    for (const auto& [label, st] : rep.point)
        for (int i = 0; i < 4; ++i) {
            CHECK(std::isfinite(st[i].avg));
            CHECK(st[i].avg > 0.0);
            CHECK(st[i].mse >= 0.0);
        }

    REQUIRE(rep.interval.size() == 2);  // ACI + Bayes
    CHECK(rep.interval[0].first == "ACI");
    CHECK(rep.interval[1].first == "Bayes");
    for (const auto& [label, st] : rep.interval)
        for (int i = 0; i < 4; ++i) {
            CHECK(st[i].cp >= 0.0);
            CHECK(st[i].cp <= 100.0);
            CHECK(st[i].il >= 0.0);
        }

    CHECK(rep.converged_count + rep.em_nonconverged == cfg.R);
    CHECK(rep.mean_ess > 0.0);
    CHECK(rep.mean_ess <= cfg.T);
    if (rep.converged_count > 0) {
        CHECK(rep.worst_converged_step_delta >= -1e-10);
        CHECK(rep.worst_converged_grad_norm >= 0.0);
    }
}

TEST_CASE("cell runs are deterministic") {
    auto cfg = small_config();
    cfg.R = 10;
    auto r1 = jolo::run_cell(cfg, cfg.grid[0]);
    auto r2 = jolo::run_cell(cfg, cfg.grid[0]);
    CHECK(jolo::reports_to_json(cfg, {r1}) == jolo::reports_to_json(cfg, {r2}));
}

TEST_CASE("bootstrap intervals join the cell report when configured") {
    ExperimentConfig cfg;
    cfg.true_psi = Psi{2.0, 3.0, 3.0, 5.0};
    cfg.grid = {GridCell{15, 15, 12}};
    cfg.R = 6;
    cfg.level = 0.90;
    cfg.seed = 7;
    jolo::BootstrapConfig bc;
    bc.D = 100;
    cfg.bootstrap = bc;
    auto rep = jolo::run_cell(cfg, cfg.grid[0]);
    REQUIRE(rep.interval.size() == 3);
    CHECK(rep.interval[0].first == "ACI");
    CHECK(rep.interval[1].first == "BootP");
    CHECK(rep.interval[2].first == "BootT");
    CHECK(rep.point.size() == 1);  // EM only, no losses configured
}

TEST_CASE("a configured loss without a prior for the cell is an error") {
    auto cfg = small_config();
    cfg.prior_schedule.clear();
    CHECK_THROWS_AS(jolo::run_cell(cfg, cfg.grid[0]), jolo::data_error);
}

TEST_CASE("the bundled experiment configuration loads") {
    std::string path = std::string(JOLO_PROJECT_ROOT) + "/configs/mc_default.json";
    auto cfg = jolo::load_experiment_config(path);
    CHECK(cfg.grid.size() == 9);
    CHECK(cfg.R == 1000);
    CHECK(cfg.T == 10000);
    CHECK(cfg.level == 0.95);
    CHECK(cfg.true_psi.a1 == 2.0);
    CHECK(cfg.true_psi.b2 == 5.0);
    CHECK(cfg.losses.size() == 5);
    CHECK(cfg.prior_schedule.size() == 9);
    for (const auto& cell : cfg.grid)
        CHECK(cfg.prior_schedule.count(cell.key()) == 1);
}

TEST_CASE("config parsing rejects malformed input") {
    std::string p1 = "/tmp/jolo_cfg_bad1.json";
    std::ofstream(p1) << "{ not json";
    CHECK_THROWS_AS(jolo::load_experiment_config(p1), jolo::data_error);

    std::string p2 = "/tmp/jolo_cfg_bad2.json";
    std::ofstream(p2) << R"({"true_psi":[2,3,3],"grid":[[5,5,5]],"R":10})";
    CHECK_THROWS_AS(jolo::load_experiment_config(p2), jolo::data_error);

    CHECK_THROWS_AS(jolo::load_experiment_config("/tmp/definitely_missing.json"),
                    jolo::data_error);

    std::string p3 = "/tmp/jolo_cfg_bad3.json";
    std::ofstream(p3)
        << R"({"true_psi":[2,3,3,5],"grid":[[5,5,5]],"R":10,"bootstrap":{"D":200,"scheme":"wild"}})";
    CHECK_THROWS_AS(jolo::load_experiment_config(p3), jolo::data_error);
}

TEST_CASE("round trip through a written config file") {
    std::string path = "/tmp/jolo_cfg_roundtrip.json";
    std::ofstream(path) << R"({
      "true_psi": [2, 3, 3, 5],
      "grid": [[10, 12, 8], [20, 20, 10]],
      "R": 55,
      "T": 2000,
      "level": 0.9,
      "seed": 31,
      "losses": ["sel", "gel:-0.5"],
      "prior_schedule": [
        {"m": 10, "n": 12, "r": 8, "a1": 4, "b1": 2, "c1": 3, "d1": 1,
         "a2": 6, "b2": 2, "c2": 15, "d2": 3}
      ],
      "bootstrap": {"D": 150, "scheme": "parametric"}
    })";
    auto cfg = jolo::load_experiment_config(path);
    CHECK(cfg.R == 55);
    CHECK(cfg.T == 2000);
    CHECK(cfg.seed == 31);
    CHECK(cfg.grid.size() == 2);
    CHECK(cfg.grid[1].r == 10);
    CHECK(cfg.losses[1].label() == "GEL-0.5");
    REQUIRE(cfg.bootstrap.has_value());
    CHECK(cfg.bootstrap->D == 150);
    CHECK(cfg.bootstrap->scheme == jolo::BootScheme::Parametric);
    auto it = cfg.prior_schedule.find({10, 12, 8});
    REQUIRE(it != cfg.prior_schedule.end());
    CHECK(it->second.c2 == 15.0);
}

TEST_CASE("CSV report layout") {
    auto cfg = small_config();
    cfg.R = 8;
    auto rep = jolo::run_cell(cfg, cfg.grid[0]);
    auto csv = jolo::reports_to_csv({rep});
    REQUIRE(csv.rfind("m,n,r,method,parameter,avg,mse,cp,il\n", 0) == 0);
    // 3 point methods x 4 params + 2 interval methods x 4 params + header
    int lines = 0;
    for (char ch : csv)
        if (ch == '\n') ++lines;
    CHECK(lines == 1 + 12 + 8);
    CHECK(csv.find("15,15,12,EM,alpha1,") != std::string::npos);
    CHECK(csv.find("15,15,12,Bayes,beta2,,,") != std::string::npos);
}
