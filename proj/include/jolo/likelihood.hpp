#pragma once

#include <array>
#include <limits>
#include <utility>
#include <vector>

#include "jolo/censoring.hpp"
#include "jolo/lomax.hpp"

namespace jolo {

// Four-parameter vector (alpha1, beta1, alpha2, beta2).
struct Psi {
    double a1 = 1.0, b1 = 1.0, a2 = 1.0, b2 = 1.0;

    double operator[](int i) const;
    double& at(int i);
    bool valid() const;  // all components positive finite

    LomaxParams pop1() const { return LomaxParams(a1, b1); }
    LomaxParams pop2() const { return LomaxParams(a2, b2); }
};

enum class FitMethod { NR, EM, CompleteMLE };

struct FitResult {
    Psi psi;
    bool converged = false;
    int iterations = 0;
    double final_gradient_norm = 0.0;
    FitMethod method = FitMethod::NR;
    // Smallest per-step change in observed log-likelihood along the iteration
    // path (EM only; NaN otherwise). Negative values flag a monotonicity break.
    double min_step_delta_ll = std::numeric_limits<double>::quiet_NaN();
};

struct SolverConfig {
    double tol = 1e-8;   // NR: gradient sup-norm; EM: max relative parameter change
    int max_iter = 200;  // EM overrides with 5000 (see fit_em)
};

// Observed-data log-likelihood, excluding the additive combinatorial constant:
//   sum_i nu_i [ln a1 + ln b1 - (a1+1) ln(1+b1 w_i)]
//       + (1-nu_i) [ln a2 + ln b2 - (a2+1) ln(1+b2 w_i)]
//   - a1 (m - m_r) ln(1+b1 w_r) - a2 (n - n_r) ln(1+b2 w_r)
double loglik(const Psi& psi, const CensoredSample& s);

// Analytic gradient (d/da1, d/db1, d/da2, d/db2) of loglik.
std::array<double, 4> gradient(const Psi& psi, const CensoredSample& s);

double grad_sup_norm(const std::array<double, 4>& g);

// Closed-form conditional MLEs of the shapes given the rates:
//   a1(b1) = m_r / [sum nu_i ln(1+b1 w_i) + (m-m_r) ln(1+b1 w_r)], a2 analogous.
// Requires both populations to appear among the failures (throws
// degenerate_indicator_error when m_r is 0 or r).
std::pair<double, double> profile_alpha(double beta1, double beta2, const CensoredSample& s);

// Profile score in one rate parameter (the full gradient's beta component with
// the shape profiled out) and its derivative; pop selects population 1 or 2.
double profile_score(double beta, const CensoredSample& s, int pop);
double profile_score_deriv(double beta, const CensoredSample& s, int pop);
// Profiled log-likelihood restricted to one population's terms.
double profile_loglik(double beta, const CensoredSample& s, int pop);

// Method-of-moments starting values from the uncensored portion of each
// population, falling back to (1,1) per population when moments are unusable.
Psi default_init(const CensoredSample& s);

// Newton-Raphson MLE via the two decoupled 1-D profile equations, safeguarded
// by bisection on a bracketing interval within beta in [1e-8, 1e8]. Never
// throws for non-convergence: converged=false and the best point scanned is
// returned instead.
FitResult fit_nr(const CensoredSample& s, const Psi& init, const SolverConfig& cfg = {});

// Single-population complete-sample MLE (profile the shape out, solve 1-D in
// the rate). Reported with its own result type since only one pair is fitted.
struct CompleteFitResult {
    LomaxParams params{1.0, 1.0};
    bool converged = false;
    int iterations = 0;
    double final_gradient_norm = 0.0;
};

CompleteFitResult fit_complete(const std::vector<double>& x, const SolverConfig& cfg = {});

// Complete-sample log-likelihood and score used by fit_complete and its tests.
double complete_loglik(const LomaxParams& p, const std::vector<double>& x);
std::array<double, 2> complete_gradient(const LomaxParams& p, const std::vector<double>& x);

} // namespace jolo
