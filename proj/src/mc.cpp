#include "jolo/mc.hpp"

#include <cfloat>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "jolo/errors.hpp"
#include "jolo/parallel.hpp"

namespace jolo {

double mse_under_loss(const std::vector<double>& estimates, double truth, const LossSpec& loss) {
    if (estimates.empty()) throw data_error("mse_under_loss: no estimates");
    double acc = 0.0;
    for (double e : estimates) {
        double term = 0.0;
        switch (loss.kind) {
            case LossSpec::Kind::SEL:
                term = (e - truth) * (e - truth);
                break;
            case LossSpec::Kind::LINEX: {
                double d = loss.param * (e - truth);
                term = std::exp(d) - d - 1.0;
                break;
            }
            case LossSpec::Kind::GEL: {
                if (!(e > 0.0) || !(truth > 0.0))
                    throw data_error("mse_under_loss: GEL needs positive estimates and truth");
                double lr = std::log(e / truth);
                term = std::exp(loss.param * lr) - loss.param * lr - 1.0;
                break;
            }
        }
        acc += term;
    }
    double out = acc / static_cast<double>(estimates.size());
    if (!std::isfinite(out)) out = DBL_MAX;  // keep reports orderable and serializable
    return out;
}

IntervalStats coverage(const std::vector<IntervalEstimate>& intervals, double truth) {
    if (intervals.empty()) throw data_error("coverage: no intervals");
    int hits = 0;
    double len = 0.0;
    for (const auto& ci : intervals) {
        if (ci.contains(truth)) ++hits;
        len += ci.length();
    }
    double cnt = static_cast<double>(intervals.size());
    return {100.0 * hits / cnt, len / cnt};
}

namespace {

// everything one replication produces, kept in its own slot so the parallel
// schedule cannot affect aggregation order
struct RepOut {
    Psi em;
    bool em_converged = false;
    double em_grad = 0.0;
    double em_min_delta = 0.0;
    int redraws = 0;

    bool aci_ok = false;
    std::array<IntervalEstimate, 4> aci;

    std::vector<std::array<double, 4>> bayes_point;  // one entry per configured loss
    std::array<IntervalEstimate, 4> bayes_ci;
    double ess_value = 0.0;

    bool boot_ok = false;
    std::array<IntervalEstimate, 4> boot_p_ci;
    std::array<IntervalEstimate, 4> boot_t_ci;
    int boot_redraws = 0;
};

enum StreamPurpose : std::uint64_t { kGenerate = 1, kBayes = 2, kBoot = 3 };

std::uint64_t cell_key(const ExperimentConfig& cfg, const GridCell& cell, int rep,
                       StreamPurpose purpose, int attempt) {
    return derive_seed({cfg.seed, static_cast<std::uint64_t>(cell.m),
                        static_cast<std::uint64_t>(cell.n), static_cast<std::uint64_t>(cell.r),
                        static_cast<std::uint64_t>(rep), static_cast<std::uint64_t>(purpose),
                        static_cast<std::uint64_t>(attempt)});
}

} // namespace

CellReport run_cell(const ExperimentConfig& cfg, const GridCell& cell) {
    if (cfg.R < 1) throw data_error("run_cell: R must be >= 1");
    const bool want_bayes = !cfg.losses.empty();
    const PriorHyper* prior = nullptr;
    if (want_bayes) {
        auto it = cfg.prior_schedule.find(cell.key());
        if (it == cfg.prior_schedule.end())
            throw data_error("run_cell: no prior hyper-parameters for this grid cell");
        prior = &it->second;
    }

    std::vector<RepOut> reps(static_cast<size_t>(cfg.R));
    parallel_for(cfg.R, [&](int k) {
        RepOut& out = reps[static_cast<size_t>(k)];

        // draw until both populations appear among the failures
        CensoredSample s;
        for (int attempt = 0;; ++attempt) {
            if (attempt >= 100)
                throw numerical_error("run_cell: degenerate-sample redraw cap exceeded");
            Rng rng(cell_key(cfg, cell, k, kGenerate, attempt));
            s = generate(cfg.true_psi.pop1(), cfg.true_psi.pop2(), cell.m, cell.n, cell.r, rng);
            if (!s.degenerate()) break;
            ++out.redraws;
        }

        FitResult em = fit_em(s, default_init(s));
        out.em = em.psi;
        out.em_converged = em.converged;
        out.em_grad = em.final_gradient_norm;
        out.em_min_delta = em.min_step_delta_ll;

        try {
            InfoMatrices info = observed_info(em.psi, s);
            out.aci = approx_ci(em, info, cfg.level);
            out.aci_ok = true;
        } catch (const numerical_error&) {
            out.aci_ok = false;
        }

        if (want_bayes) {
            Rng rng(cell_key(cfg, cell, k, kBayes, 0));
            WeightedDraws d = draw_posterior(s, *prior, cfg.T, rng);
            out.bayes_point.reserve(cfg.losses.size());
            for (const auto& loss : cfg.losses) {
                std::array<double, 4> est{};
                for (int i = 0; i < 4; ++i) est[static_cast<size_t>(i)] = estimate(d, loss, i);
                out.bayes_point.push_back(est);
            }
            for (int i = 0; i < 4; ++i)
                out.bayes_ci[static_cast<size_t>(i)] = credible_interval(d, i, cfg.level);
            out.ess_value = ess(d);
        }

        if (cfg.bootstrap) {
            BootstrapConfig bc = *cfg.bootstrap;
            bc.level = cfg.level;
            bc.seed = cell_key(cfg, cell, k, kBoot, 0);
            try {
                auto [bp, bt] = boot_pt(s, bc, em);
                out.boot_p_ci = bp.ci;
                out.boot_t_ci = bt.ci;
                out.boot_redraws = bp.redraw_count;
                out.boot_ok = true;
            } catch (const numerical_error&) {
                out.boot_ok = false;
            }
        }
    });

    CellReport rep;
    rep.m = cell.m;
    rep.n = cell.n;
    rep.r = cell.r;
    rep.worst_converged_step_delta = std::numeric_limits<double>::infinity();

    // EM point statistics
    {
        std::array<PointStats, 4> st{};
        for (int i = 0; i < 4; ++i) {
            std::vector<double> est;
            est.reserve(reps.size());
            for (const auto& ro : reps) est.push_back(ro.em[i]);
            double avg = 0.0;
            for (double e : est) avg += e;
            st[static_cast<size_t>(i)].avg = avg / static_cast<double>(est.size());
            st[static_cast<size_t>(i)].mse =
                mse_under_loss(est, cfg.true_psi[i], LossSpec::sel());
        }
        rep.point.emplace_back("EM", st);
    }
    for (size_t li = 0; li < cfg.losses.size(); ++li) {
        std::array<PointStats, 4> st{};
        for (int i = 0; i < 4; ++i) {
            std::vector<double> est;
            est.reserve(reps.size());
            for (const auto& ro : reps) est.push_back(ro.bayes_point[li][static_cast<size_t>(i)]);
            double avg = 0.0;
            for (double e : est) avg += e;
            st[static_cast<size_t>(i)].avg = avg / static_cast<double>(est.size());
            st[static_cast<size_t>(i)].mse = mse_under_loss(est, cfg.true_psi[i], cfg.losses[li]);
        }
        rep.point.emplace_back(cfg.losses[li].label(), st);
    }

    // interval statistics; failed constructions count as non-covering but do
    // not drag the mean length
    auto interval_stats = [&](auto member, auto ok_member) {
        std::array<IntervalStats, 4> st{};
        for (int i = 0; i < 4; ++i) {
            int hits = 0, usable = 0;
            double len = 0.0;
            for (const auto& ro : reps) {
                if (!(ro.*ok_member)) continue;
                const IntervalEstimate& ci = (ro.*member)[static_cast<size_t>(i)];
                ++usable;
                if (ci.contains(cfg.true_psi[i])) ++hits;
                len += ci.length();
            }
            st[static_cast<size_t>(i)].cp = 100.0 * hits / static_cast<double>(cfg.R);
            st[static_cast<size_t>(i)].il = usable > 0 ? len / usable : 0.0;
        }
        return st;
    };
    rep.interval.emplace_back("ACI", interval_stats(&RepOut::aci, &RepOut::aci_ok));
    if (cfg.bootstrap) {
        rep.interval.emplace_back("BootP", interval_stats(&RepOut::boot_p_ci, &RepOut::boot_ok));
        rep.interval.emplace_back("BootT", interval_stats(&RepOut::boot_t_ci, &RepOut::boot_ok));
    }
    if (want_bayes) {
        std::vector<IntervalEstimate> tmp;
        std::array<IntervalStats, 4> st{};
        for (int i = 0; i < 4; ++i) {
            tmp.clear();
            for (const auto& ro : reps) tmp.push_back(ro.bayes_ci[static_cast<size_t>(i)]);
            st[static_cast<size_t>(i)] = coverage(tmp, cfg.true_psi[i]);
        }
        rep.interval.emplace_back("Bayes", st);
    }

    for (const auto& ro : reps) {
        rep.redraw_count += ro.redraws;
        if (!ro.em_converged) ++rep.em_nonconverged;
        if (!ro.aci_ok) ++rep.aci_failures;
        rep.boot_redraw_count += ro.boot_redraws;
        rep.mean_ess += ro.ess_value;
        if (ro.em_converged) {
            ++rep.converged_count;
            rep.worst_converged_step_delta =
                std::min(rep.worst_converged_step_delta, ro.em_min_delta);
            rep.worst_converged_grad_norm = std::max(rep.worst_converged_grad_norm, ro.em_grad);
        }
    }
    rep.mean_ess /= static_cast<double>(cfg.R);
    if (rep.converged_count == 0) rep.worst_converged_step_delta = 0.0;
    return rep;
}

std::vector<CellReport> run_experiment(const ExperimentConfig& cfg) {
    std::vector<CellReport> out;
    out.reserve(cfg.grid.size());
    for (const auto& cell : cfg.grid) out.push_back(run_cell(cfg, cell));
    return out;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw data_error("config parse error in " + path + ": " + e.what());
    }
    try {
        ExperimentConfig cfg;
        auto tp = j.at("true_psi");
        if (!tp.is_array() || tp.size() != 4)
            throw data_error("config: true_psi must be a 4-element array");
        cfg.true_psi = Psi{tp[0].get<double>(), tp[1].get<double>(), tp[2].get<double>(),
                           tp[3].get<double>()};
        for (const auto& c : j.at("grid")) {
            if (!c.is_array() || c.size() != 3)
                throw data_error("config: grid entries must be [m, n, r]");
            cfg.grid.push_back({c[0].get<int>(), c[1].get<int>(), c[2].get<int>()});
        }
        cfg.R = j.at("R").get<int>();
        cfg.T = j.value("T", 10000);
        cfg.level = j.value("level", 0.95);
        cfg.seed = j.value("seed", std::uint64_t{0});
        if (j.contains("losses"))
            for (const auto& l : j.at("losses"))
                cfg.losses.push_back(LossSpec::parse(l.get<std::string>()));
        if (j.contains("prior_schedule"))
            for (const auto& p : j.at("prior_schedule")) {
                PriorHyper h{p.at("a1").get<double>(), p.at("b1").get<double>(),
                             p.at("c1").get<double>(), p.at("d1").get<double>(),
                             p.at("a2").get<double>(), p.at("b2").get<double>(),
                             p.at("c2").get<double>(), p.at("d2").get<double>()};
                h.validate();
                cfg.prior_schedule[{p.at("m").get<int>(), p.at("n").get<int>(),
                                    p.at("r").get<int>()}] = h;
            }
        if (j.contains("bootstrap")) {
            BootstrapConfig bc;
            bc.D = j.at("bootstrap").at("D").get<int>();
            std::string scheme = j.at("bootstrap").value("scheme", "nonparametric-pairs");
            if (scheme == "nonparametric-pairs")
                bc.scheme = BootScheme::NonparametricPairs;
            else if (scheme == "parametric")
                bc.scheme = BootScheme::Parametric;
            else
                throw data_error("config: bootstrap scheme must be nonparametric-pairs or "
                                 "parametric");
            cfg.bootstrap = bc;
        }
        if (!cfg.true_psi.valid()) throw data_error("config: true_psi must be positive");
        if (cfg.grid.empty()) throw data_error("config: grid must be nonempty");
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw data_error("config field error in " + path + ": " + e.what());
    }
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

const char* kParamNames[4] = {"alpha1", "beta1", "alpha2", "beta2"};

} // namespace

std::string reports_to_csv(const std::vector<CellReport>& reports) {
    std::string out = "m,n,r,method,parameter,avg,mse,cp,il\n";
    for (const auto& rep : reports) {
        std::string prefix = std::to_string(rep.m) + "," + std::to_string(rep.n) + "," +
                             std::to_string(rep.r) + ",";
        for (const auto& [method, st] : rep.point)
            for (int i = 0; i < 4; ++i)
                out += prefix + method + "," + kParamNames[i] + "," +
                       fmt_double(st[static_cast<size_t>(i)].avg) + "," +
                       fmt_double(st[static_cast<size_t>(i)].mse) + ",,\n";
        for (const auto& [method, st] : rep.interval)
            for (int i = 0; i < 4; ++i)
                out += prefix + method + "," + kParamNames[i] + ",,," +
                       fmt_double(st[static_cast<size_t>(i)].cp) + "," +
                       fmt_double(st[static_cast<size_t>(i)].il) + "\n";
    }
    return out;
}

std::string reports_to_json(const ExperimentConfig& cfg,
                            const std::vector<CellReport>& reports) {
    nlohmann::ordered_json root;
    root["true_psi"] = {cfg.true_psi.a1, cfg.true_psi.b1, cfg.true_psi.a2, cfg.true_psi.b2};
    root["R"] = cfg.R;
    root["T"] = cfg.T;
    root["level"] = cfg.level;
    root["seed"] = cfg.seed;
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (const auto& rep : reports) {
        nlohmann::ordered_json c;
        c["m"] = rep.m;
        c["n"] = rep.n;
        c["r"] = rep.r;
        nlohmann::ordered_json pt;
        for (const auto& [method, st] : rep.point) {
            nlohmann::ordered_json entry;
            for (int i = 0; i < 4; ++i) {
                entry[kParamNames[i]] = {{"avg", st[static_cast<size_t>(i)].avg},
                                         {"mse", st[static_cast<size_t>(i)].mse}};
            }
            pt[method] = entry;
        }
        c["point"] = pt;
        nlohmann::ordered_json iv;
        for (const auto& [method, st] : rep.interval) {
            nlohmann::ordered_json entry;
            for (int i = 0; i < 4; ++i) {
                entry[kParamNames[i]] = {{"cp", st[static_cast<size_t>(i)].cp},
                                         {"il", st[static_cast<size_t>(i)].il}};
            }
            iv[method] = entry;
        }
        c["interval"] = iv;
        c["diagnostics"] = {{"redraws", rep.redraw_count},
                            {"em_nonconverged", rep.em_nonconverged},
                            {"aci_failures", rep.aci_failures},
                            {"boot_redraws", rep.boot_redraw_count},
                            {"mean_ess", rep.mean_ess},
                            {"converged_count", rep.converged_count},
                            {"worst_converged_step_delta", rep.worst_converged_step_delta},
                            {"worst_converged_grad_norm", rep.worst_converged_grad_norm}};
        cells.push_back(c);
    }
    root["cells"] = cells;
    return root.dump(2) + "\n";
}

} // namespace jolo
