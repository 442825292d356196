#include "jolo/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "jolo/bayes.hpp"
#include "jolo/bootstrap.hpp"
#include "jolo/data_io.hpp"
#include "jolo/em.hpp"
#include "jolo/errors.hpp"
#include "jolo/ks.hpp"
#include "jolo/likelihood.hpp"
#include "jolo/mc.hpp"

namespace jolo {

namespace {

using nlohmann::ordered_json;

const char* kParamNames[4] = {"alpha1", "beta1", "alpha2", "beta2"};

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void emit(const std::string& rendered, const std::string& out_path) {
    if (out_path.empty())
        std::fputs(rendered.c_str(), stdout);
    else
        write_text_file(out_path, rendered);
}

ordered_json psi_json(const Psi& psi) {
    ordered_json j;
    for (int i = 0; i < 4; ++i) j[kParamNames[i]] = psi[i];
    return j;
}

ordered_json intervals_json(const std::array<IntervalEstimate, 4>& ci) {
    ordered_json j;
    for (int i = 0; i < 4; ++i) {
        const auto& c = ci[static_cast<size_t>(i)];
        j[kParamNames[i]] = {{"lower", c.lower}, {"upper", c.upper}};
    }
    return j;
}

std::string interval_text(const IntervalEstimate& c) {
    return "(" + fmt6(c.lower) + ", " + fmt6(c.upper) + ")";
}

// shared state for all subcommands
struct Args {
    std::string data_path;
    std::string prior_path;
    std::string config_path;
    std::string out_path;
    std::string format = "text";
    std::string loss_text = "sel";
    std::string boot_kind;
    std::string scheme_text = "pairs";
    std::string psi_text = "1,1,1,1";
    int m = 0, n = 0, r = 0;
    int reps = 0;
    double level = 0.95;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

std::uint64_t resolve_seed(const Args& a) {
    if (a.seed_given) return a.seed;
    const char* env = std::getenv("JOLO_SEED");
    if (env != nullptr && *env != '\0') {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end == nullptr || *end != '\0')
            throw usage_error("JOLO_SEED must be a nonnegative integer");
        return static_cast<std::uint64_t>(v);
    }
    return a.seed;
}

Psi parse_psi(const std::string& text) {
    Psi psi;
    std::stringstream ss(text);
    std::string part;
    int i = 0;
    while (std::getline(ss, part, ',')) {
        if (i >= 4) throw usage_error("--psi needs exactly four comma-separated values");
        try {
            psi.at(i) = std::stod(part);
        } catch (const std::exception&) {
            throw usage_error("--psi component '" + part + "' is not a number");
        }
        ++i;
    }
    if (i != 4 || !psi.valid())
        throw usage_error("--psi needs four positive comma-separated values");
    return psi;
}

PriorHyper load_prior(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open prior file: " + path);
    nlohmann::json j;
    try {
        in >> j;
        PriorHyper h{j.at("a1").get<double>(), j.at("b1").get<double>(),
                     j.at("c1").get<double>(), j.at("d1").get<double>(),
                     j.at("a2").get<double>(), j.at("b2").get<double>(),
                     j.at("c2").get<double>(), j.at("d2").get<double>()};
        h.validate();
        return h;
    } catch (const nlohmann::json::exception& e) {
        throw data_error("prior file " + path + ": " + e.what());
    }
}

void check_level(double level) {
    if (!(level > 0.0 && level < 1.0)) throw usage_error("--level must lie in (0,1)");
}

// a data file is either a raw two-sample dataset or an already-censored
// sample; the header line tells them apart ("# m=.. n=.. r=..")
bool looks_censored(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open data file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        auto pos = line.find_first_not_of(" \t\r\n");
        if (pos == std::string::npos) continue;
        return line[pos] == '#' && line.find("r=") != std::string::npos;
    }
    return false;
}

CensoredSample load_censored(const Args& a) {
    if (a.data_path.empty()) throw usage_error("--data is required");
    if (looks_censored(a.data_path)) {
        CensoredSample s = read_censored_csv(a.data_path);
        if (a.r >= 1 && a.r != s.r)
            throw usage_error("--r disagrees with the censored sample's r=" +
                              std::to_string(s.r));
        return s;
    }
    if (a.r < 1) throw usage_error("--r is required and must be >= 1");
    Dataset d = ingest(a.data_path);
    return apply_joint_censoring(d, a.r);
}

int cmd_simulate(const Args& a) {
    if (a.m < 1 || a.n < 1 || a.r < 1) throw usage_error("simulate needs --m, --n, --r >= 1");
    Psi psi = parse_psi(a.psi_text);
    std::uint64_t seed = resolve_seed(a);
    Rng rng(seed);
    CensoredSample s = generate(psi.pop1(), psi.pop2(), a.m, a.n, a.r, rng);

    if (a.format == "csv") {
        emit(censored_to_csv(s), a.out_path);
    } else if (a.format == "json") {
        ordered_json j;
        j["command"] = "simulate";
        j["m"] = s.m;
        j["n"] = s.n;
        j["r"] = s.r;
        j["seed"] = seed;
        j["psi"] = psi_json(psi);
        j["m_r"] = s.m_r();
        j["n_r"] = s.n_r();
        j["w"] = s.w;
        j["nu"] = s.nu;
        emit(j.dump(2) + "\n", a.out_path);
    } else {
        std::string t = "joint type-II censored sample  m=" + std::to_string(s.m) +
                        " n=" + std::to_string(s.n) + " r=" + std::to_string(s.r) +
                        " m_r=" + std::to_string(s.m_r()) + " seed=" + std::to_string(seed) +
                        "\n  i      w_i  nu_i\n";
        for (int i = 0; i < s.r; ++i) {
            char line[64];
            std::snprintf(line, sizeof line, "%3d %12.6g %4d\n", i + 1,
                          s.w[static_cast<size_t>(i)], s.nu[static_cast<size_t>(i)]);
            t += line;
        }
        emit(t, a.out_path);
    }
    return exit_ok;
}

int cmd_fit(const Args& a, bool use_em) {
    check_level(a.level);
    CensoredSample s = load_censored(a);
    FitResult fit = use_em ? fit_em(s, default_init(s)) : fit_nr(s, default_init(s));
    std::array<IntervalEstimate, 4> aci{};
    bool have_aci = false;
    std::string aci_note;
    try {
        aci = approx_ci(fit, observed_info(fit.psi, s), a.level);
        have_aci = true;
    } catch (const numerical_error& e) {
        aci_note = e.what();
    }

    const char* cmd = use_em ? "fit-em" : "fit-nr";
    if (a.format == "json" || a.format == "csv") {
        ordered_json j;
        j["command"] = cmd;
        j["data"] = a.data_path;
        j["r"] = s.r;
        j["m"] = s.m;
        j["n"] = s.n;
        j["m_r"] = s.m_r();
        j["n_r"] = s.n_r();
        j["estimate"] = psi_json(fit.psi);
        j["converged"] = fit.converged;
        j["iterations"] = fit.iterations;
        j["final_gradient_norm"] = fit.final_gradient_norm;
        j["loglik"] = loglik(fit.psi, s);
        j["level"] = a.level;
        if (have_aci)
            j["intervals"] = {{"ACI", intervals_json(aci)}};
        else
            j["interval_error"] = aci_note;
        emit(j.dump(2) + "\n", a.out_path);
    } else {
        std::string t = std::string(cmd) + "  " + a.data_path + "  r=" + std::to_string(s.r) +
                        "  (m_r=" + std::to_string(s.m_r()) +
                        ", n_r=" + std::to_string(s.n_r()) + ")\n";
        t += std::string("converged=") + (fit.converged ? "yes" : "no") +
             "  iterations=" + std::to_string(fit.iterations) +
             "  |gradient|=" + fmt6(fit.final_gradient_norm) + "\n";
        for (int i = 0; i < 4; ++i) {
            char line[128];
            std::snprintf(line, sizeof line, "%-8s %12.6g", kParamNames[i], fit.psi[i]);
            t += line;
            if (have_aci)
                t += "   ACI " + interval_text(aci[static_cast<size_t>(i)]);
            t += "\n";
        }
        if (!have_aci) t += "ACI unavailable: " + aci_note + "\n";
        emit(t, a.out_path);
    }
    return exit_ok;
}

int cmd_fit_bayes(const Args& a) {
    check_level(a.level);
    if (a.prior_path.empty()) throw usage_error("fit-bayes requires --prior");
    LossSpec loss = LossSpec::parse(a.loss_text);
    int T = a.reps > 0 ? a.reps : 10000;
    CensoredSample s = load_censored(a);
    PriorHyper prior = load_prior(a.prior_path);
    std::uint64_t seed = resolve_seed(a);
    Rng rng(seed);
    WeightedDraws d = draw_posterior(s, prior, T, rng);
    Psi est;
    for (int i = 0; i < 4; ++i) est.at(i) = estimate(d, loss, i);
    std::array<IntervalEstimate, 4> ci{};
    for (int i = 0; i < 4; ++i) ci[static_cast<size_t>(i)] = credible_interval(d, i, a.level);
    double e = ess(d);

    if (a.format == "json" || a.format == "csv") {
        ordered_json j;
        j["command"] = "fit-bayes";
        j["data"] = a.data_path;
        j["r"] = s.r;
        j["loss"] = loss.label();
        j["T"] = T;
        j["seed"] = seed;
        j["ess"] = e;
        j["estimate"] = psi_json(est);
        j["level"] = a.level;
        j["intervals"] = {{"Bayes", intervals_json(ci)}};
        emit(j.dump(2) + "\n", a.out_path);
    } else {
        std::string t = "fit-bayes  " + a.data_path + "  r=" + std::to_string(s.r) + "  loss=" +
                        loss.label() + "  T=" + std::to_string(T) +
                        "  seed=" + std::to_string(seed) + "  ess=" + fmt6(e) + "\n";
        for (int i = 0; i < 4; ++i) {
            char line[128];
            std::snprintf(line, sizeof line, "%-8s %12.6g", kParamNames[i], est[i]);
            t += line;
            t += "   credible " + interval_text(ci[static_cast<size_t>(i)]) + "\n";
        }
        emit(t, a.out_path);
    }
    return exit_ok;
}

int cmd_bootstrap(const Args& a) {
    check_level(a.level);
    if (a.boot_kind != "p" && a.boot_kind != "t")
        throw usage_error("--boot must be 'p' or 't'");
    BootstrapConfig cfg;
    cfg.D = a.reps > 0 ? a.reps : 1000;
    cfg.level = a.level;
    cfg.seed = resolve_seed(a);
    if (a.scheme_text == "pairs")
        cfg.scheme = BootScheme::NonparametricPairs;
    else if (a.scheme_text == "parametric")
        cfg.scheme = BootScheme::Parametric;
    else
        throw usage_error("--scheme must be 'pairs' or 'parametric'");
    CensoredSample s = load_censored(a);
    BootResult res = a.boot_kind == "p" ? boot_p(s, cfg) : boot_t(s, cfg);
    const char* method = a.boot_kind == "p" ? "BootP" : "BootT";

    if (a.format == "json" || a.format == "csv") {
        ordered_json j;
        j["command"] = "bootstrap";
        j["data"] = a.data_path;
        j["r"] = s.r;
        j["kind"] = a.boot_kind;
        j["D"] = cfg.D;
        j["seed"] = cfg.seed;
        j["level"] = a.level;
        j["base_estimate"] = psi_json(res.base_fit.psi);
        j["base_converged"] = res.base_fit.converged;
        j["redraws"] = res.redraw_count;
        j["intervals"] = {{method, intervals_json(res.ci)}};
        emit(j.dump(2) + "\n", a.out_path);
    } else {
        std::string t = "bootstrap(" + a.boot_kind + ")  " + a.data_path +
                        "  r=" + std::to_string(s.r) + "  D=" + std::to_string(cfg.D) +
                        "  seed=" + std::to_string(cfg.seed) +
                        "  redraws=" + std::to_string(res.redraw_count) + "\n";
        for (int i = 0; i < 4; ++i) {
            char line[128];
            std::snprintf(line, sizeof line, "%-8s %12.6g", kParamNames[i], res.base_fit.psi[i]);
            t += line;
            t += "   " + std::string(method) + " " + interval_text(res.ci[static_cast<size_t>(i)]) +
                 "\n";
        }
        emit(t, a.out_path);
    }
    return exit_ok;
}

int cmd_ks(const Args& a) {
    if (a.data_path.empty()) throw usage_error("--data is required");
    Dataset d = ingest(a.data_path);
    CompleteFitResult fx = fit_complete(d.x);
    CompleteFitResult fy = fit_complete(d.y);
    auto [dx, px] = ks_test(d.x, fx.params);
    auto [dy, py] = ks_test(d.y, fy.params);

    if (a.format == "json" || a.format == "csv") {
        ordered_json j;
        j["command"] = "ks";
        j["data"] = a.data_path;
        j["X"] = {{"count", d.x.size()},   {"alpha", fx.params.alpha},
                  {"beta", fx.params.beta}, {"converged", fx.converged},
                  {"D", dx},               {"p_value", px}};
        j["Y"] = {{"count", d.y.size()},   {"alpha", fy.params.alpha},
                  {"beta", fy.params.beta}, {"converged", fy.converged},
                  {"D", dy},               {"p_value", py}};
        emit(j.dump(2) + "\n", a.out_path);
    } else {
        char buf[256];
        std::string t = "goodness of fit  " + a.data_path + "\n";
        t += "sample  count      alpha       beta          D    p-value\n";
        std::snprintf(buf, sizeof buf, "X      %6zu %10.4f %10.4f %10.4f %10.4f\n", d.x.size(),
                      fx.params.alpha, fx.params.beta, dx, px);
        t += buf;
        std::snprintf(buf, sizeof buf, "Y      %6zu %10.4f %10.4f %10.4f %10.4f\n", d.y.size(),
                      fy.params.alpha, fy.params.beta, dy, py);
        t += buf;
        emit(t, a.out_path);
    }
    return exit_ok;
}

int cmd_mc_run(const Args& a) {
    if (a.config_path.empty()) throw usage_error("mc-run requires --config");
    ExperimentConfig cfg = load_experiment_config(a.config_path);
    if (a.seed_given) cfg.seed = a.seed;
    std::vector<CellReport> reports = run_experiment(cfg);
    std::string json_text = reports_to_json(cfg, reports);
    std::string csv_text = reports_to_csv(reports);
    if (!a.out_path.empty()) {
        write_text_file(a.out_path + ".json", json_text);
        write_text_file(a.out_path + ".csv", csv_text);
    } else {
        std::fputs(a.format == "csv" ? csv_text.c_str() : json_text.c_str(), stdout);
    }
    return exit_ok;
}

} // namespace

int run_pipeline(const std::vector<std::string>& args) {
    Args a;
    CLI::App app{"joint type-II censored inference for two Lomax populations"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", a.seed, "random seed (JOLO_SEED env as fallback)")
            ->each([&](const std::string&) { a.seed_given = true; });
        sub->add_option("--level", a.level, "interval level in (0,1)");
        sub->add_option("--out", a.out_path, "write the report here instead of stdout");
        sub->add_option("--format", a.format, "report format")
            ->check(CLI::IsMember({"json", "text", "csv"}));
    };

    CLI::App* sim = app.add_subcommand("simulate", "draw one joint-censored sample");
    sim->add_option("--m", a.m, "size of sample X")->required();
    sim->add_option("--n", a.n, "size of sample Y")->required();
    sim->add_option("--r", a.r, "stopping count")->required();
    sim->add_option("--psi", a.psi_text, "alpha1,beta1,alpha2,beta2 (default 1,1,1,1)");
    add_common(sim);

    CLI::App* fem = app.add_subcommand("fit-em", "censored-data fit by the iterative scheme");
    CLI::App* fnr = app.add_subcommand("fit-nr", "censored-data fit by profile root-finding");
    for (CLI::App* sub : {fem, fnr}) {
        sub->add_option("--data", a.data_path, "dataset CSV");
        sub->add_option("--r", a.r, "stopping count");
        add_common(sub);
    }

    CLI::App* fb = app.add_subcommand("fit-bayes", "posterior estimates by importance sampling");
    fb->add_option("--data", a.data_path, "dataset CSV");
    fb->add_option("--r", a.r, "stopping count");
    fb->add_option("--prior", a.prior_path, "prior hyper-parameter JSON");
    fb->add_option("--loss", a.loss_text, "sel | linex:<nu> | gel:<kappa>");
    fb->add_option("--reps", a.reps, "importance-sample size (default 10000)");
    add_common(fb);

    CLI::App* bs = app.add_subcommand("bootstrap", "percentile or studentized intervals");
    bs->add_option("--data", a.data_path, "dataset CSV");
    bs->add_option("--r", a.r, "stopping count");
    bs->add_option("--boot", a.boot_kind, "p (percentile) or t (studentized)");
    bs->add_option("--reps", a.reps, "bootstrap replicates (default 1000)");
    bs->add_option("--scheme", a.scheme_text, "pairs | parametric");
    add_common(bs);

    CLI::App* ks = app.add_subcommand("ks", "per-sample fit and Kolmogorov-Smirnov check");
    ks->add_option("--data", a.data_path, "dataset CSV");
    add_common(ks);

    CLI::App* mc = app.add_subcommand("mc-run", "Monte Carlo study over a (m,n,r) grid");
    mc->add_option("--config", a.config_path, "experiment config JSON");
    add_common(mc);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help and friends
            std::puts(app.help().c_str());
            return exit_ok;
        }
        std::fprintf(stderr, "%s\n", e.what());
        std::fprintf(stderr, "%s", app.help().c_str());
        return exit_usage;
    }

    try {
        if (sim->parsed()) return cmd_simulate(a);
        if (fem->parsed()) return cmd_fit(a, true);
        if (fnr->parsed()) return cmd_fit(a, false);
        if (fb->parsed()) return cmd_fit_bayes(a);
        if (bs->parsed()) return cmd_bootstrap(a);
        if (ks->parsed()) return cmd_ks(a);
        if (mc->parsed()) return cmd_mc_run(a);
        std::fprintf(stderr, "no subcommand given\n%s", app.help().c_str());
        return exit_usage;
    } catch (const usage_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_usage;
    } catch (const data_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_data;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_numeric;
    }
}

} // namespace jolo
