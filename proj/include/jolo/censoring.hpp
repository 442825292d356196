#pragma once

#include <vector>

#include "jolo/lomax.hpp"
#include "jolo/rng.hpp"

namespace jolo {

// Two samples put on test together; the run stops at the r-th pooled failure.
// w holds the r smallest pooled failure times in order, nu[i] = 1 when w[i]
// came from the X sample and 0 when it came from Y.
struct CensoredSample {
    std::vector<double> w;
    std::vector<int> nu;
    int m = 0;
    int n = 0;
    int r = 0;

    CensoredSample() = default;
    CensoredSample(std::vector<double> w_, std::vector<int> nu_, int m_, int n_);

    int m_r() const { return m_r_; }
    int n_r() const { return n_r_; }
    double w_r() const { return w.back(); }
    bool degenerate() const { return m_r_ == 0 || m_r_ == r; }

private:
    int m_r_ = 0;
    int n_r_ = 0;
};

// Draws m variates from p1 and n from p2, pools, sorts, keeps the r smallest
// with their origin indicators. Floating-point ties (measure zero for real
// draws) are broken by origin label then draw index.
CensoredSample generate(const LomaxParams& p1, const LomaxParams& p2, int m, int n, int r,
                        Rng& rng);

// Exact probability of a particular indicator vector under beta1 = beta2:
// the product over failures of the hazard-competition odds
//   P(next is X | history) = (m - m_{i-1}) a1 / [(m - m_{i-1}) a1 + (n - n_{i-1}) a2].
// Computed in log space. Used as a brute-force oracle for the generator.
double pmf_nu(const std::vector<int>& nu, double alpha1, double alpha2, int m, int n);

// P(M_r = i), by exhaustive enumeration over indicator vectors. Refuses r > 20
// (this is an oracle, not a production path).
double pmf_m(int i, int r, double alpha1, double alpha2, int m, int n);

// Closed forms for the two boundary cases of pmf_m.
double pmf_m_all_y(int r, double alpha1, double alpha2, int m, int n);  // i = 0
double pmf_m_all_x(int r, double alpha1, double alpha2, int m, int n);  // i = r

} // namespace jolo
