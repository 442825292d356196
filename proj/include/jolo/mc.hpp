#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "jolo/bayes.hpp"
#include "jolo/bootstrap.hpp"
#include "jolo/em.hpp"

namespace jolo {

struct GridCell {
    int m = 0, n = 0, r = 0;

    std::tuple<int, int, int> key() const { return {m, n, r}; }
};

struct ExperimentConfig {
    Psi true_psi;
    std::vector<GridCell> grid;
    int R = 1000;  // replications per cell
    std::map<std::tuple<int, int, int>, PriorHyper> prior_schedule;
    std::vector<LossSpec> losses;
    double level = 0.95;
    std::uint64_t seed = 0;
    std::optional<BootstrapConfig> bootstrap;  // level/seed fields ignored; taken from here
    int T = 10000;                             // importance-sample size per replication
};

struct PointStats {
    double avg = 0.0;
    double mse = 0.0;
};

struct IntervalStats {
    double cp = 0.0;  // percent
    double il = 0.0;  // mean length
};

struct CellReport {
    int m = 0, n = 0, r = 0;
    // insertion-ordered: EM first, then one entry per configured loss
    std::vector<std::pair<std::string, std::array<PointStats, 4>>> point;
    // ACI, then BootP/BootT when bootstrap ran, then Bayes
    std::vector<std::pair<std::string, std::array<IntervalStats, 4>>> interval;

    // replicate diagnostics
    int redraw_count = 0;         // degenerate-indicator redraws across the cell
    int em_nonconverged = 0;      // fits that hit the iteration cap
    int aci_failures = 0;         // singular-information replicates (counted non-covering)
    int boot_redraw_count = 0;    // unusable bootstrap resamples across the cell
    double mean_ess = 0.0;        // average importance-sampling effective size
    // over converged fits only: worst per-step log-likelihood change and the
    // largest final gradient sup-norm (fit-quality evidence for the whole grid)
    double worst_converged_step_delta = 0.0;
    double worst_converged_grad_norm = 0.0;
    int converged_count = 0;
};

// Monte Carlo risk of a batch of point estimates against the truth:
//   SEL:   mean (e - t)^2
//   LINEX: mean e^{nu(e-t)} - nu(e-t) - 1
//   GEL:   mean (e/t)^kappa - kappa ln(e/t) - 1
// Non-finite accumulations are clamped to DBL_MAX so reports stay orderable.
double mse_under_loss(const std::vector<double>& estimates, double truth, const LossSpec& loss);

IntervalStats coverage(const std::vector<IntervalEstimate>& intervals, double truth);

// One grid cell: R replications of generate -> fit -> intervals -> posterior,
// aggregated. Degenerate samples (one population absent from the failures)
// are redrawn, up to 100 attempts per replication.
CellReport run_cell(const ExperimentConfig& cfg, const GridCell& cell);

std::vector<CellReport> run_experiment(const ExperimentConfig& cfg);

ExperimentConfig load_experiment_config(const std::string& path);

// One CSV row per cell x method x parameter: point rows carry avg/mse,
// interval rows carry cp/il.
std::string reports_to_csv(const std::vector<CellReport>& reports);
std::string reports_to_json(const ExperimentConfig& cfg, const std::vector<CellReport>& reports);

} // namespace jolo
