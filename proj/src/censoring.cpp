#include "jolo/censoring.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <tuple>

#include "jolo/errors.hpp"

namespace jolo {

CensoredSample::CensoredSample(std::vector<double> w_, std::vector<int> nu_, int m_, int n_)
    : w(std::move(w_)), nu(std::move(nu_)), m(m_), n(n_) {
    r = static_cast<int>(w.size());
    if (r < 1 || nu.size() != w.size())
        throw data_error("CensoredSample: w and nu must be nonempty and equal length");
    if (m < 1 || n < 1 || r > m + n)
        throw data_error("CensoredSample: need m, n >= 1 and 1 <= r <= m+n");
    for (int i = 0; i < r; ++i) {
        if (!(w[i] > 0.0) || !std::isfinite(w[i]))
            throw data_error("CensoredSample: failure times must be positive finite");
        // nondecreasing rather than strict: with-replacement resampling
        // legitimately repeats values
        if (i > 0 && w[i] < w[i - 1])
            throw data_error("CensoredSample: failure times must be sorted ascending");
        if (nu[i] != 0 && nu[i] != 1)
            throw data_error("CensoredSample: indicators must be 0 or 1");
        m_r_ += nu[i];
    }
    n_r_ = r - m_r_;
    if (m_r_ > m || n_r_ > n)
        throw data_error("CensoredSample: indicator counts exceed the sample sizes");
}

CensoredSample generate(const LomaxParams& p1, const LomaxParams& p2, int m, int n, int r,
                        Rng& rng) {
    if (m < 1 || n < 1 || r < 1 || r > m + n)
        throw data_error("generate: need m, n >= 1 and 1 <= r <= m+n");
    struct Entry {
        double value;
        int origin;  // 0 = X, 1 = Y (sort key: X first on ties)
        int index;
    };
    std::vector<Entry> pool;
    pool.reserve(static_cast<size_t>(m + n));
    for (int i = 0; i < m; ++i) pool.push_back({sample_one(p1, rng), 0, i});
    for (int j = 0; j < n; ++j) pool.push_back({sample_one(p2, rng), 1, j});
    std::sort(pool.begin(), pool.end(), [](const Entry& a, const Entry& b) {
        return std::tie(a.value, a.origin, a.index) < std::tie(b.value, b.origin, b.index);
    });
    std::vector<double> w(static_cast<size_t>(r));
    std::vector<int> nu(static_cast<size_t>(r));
    for (int i = 0; i < r; ++i) {
        w[i] = pool[i].value;
        nu[i] = pool[i].origin == 0 ? 1 : 0;
    }
    return CensoredSample(std::move(w), std::move(nu), m, n);
}

double pmf_nu(const std::vector<int>& nu, double alpha1, double alpha2, int m, int n) {
    int r = static_cast<int>(nu.size());
    if (r < 1 || r > m + n) throw data_error("pmf_nu: indicator length must lie in [1, m+n]");
    if (!(alpha1 > 0.0) || !(alpha2 > 0.0))
        throw data_error("pmf_nu: shapes must be positive");
    int mx = 0, ny = 0;  // failures consumed so far from each sample
    double log_p = 0.0;
    for (int i = 0; i < r; ++i) {
        if (nu[i] != 0 && nu[i] != 1) throw data_error("pmf_nu: indicators must be 0 or 1");
        double hx = (m - mx) * alpha1;
        double hy = (n - ny) * alpha2;
        if (nu[i] == 1) {
            if (mx >= m) return 0.0;  // impossible vector
            log_p += std::log(hx) - std::log(hx + hy);
            ++mx;
        } else {
            if (ny >= n) return 0.0;
            log_p += std::log(hy) - std::log(hx + hy);
            ++ny;
        }
    }
    return std::exp(log_p);
}

double pmf_m(int i, int r, double alpha1, double alpha2, int m, int n) {
    if (r < 1 || r > m + n) throw data_error("pmf_m: r must lie in [1, m+n]");
    if (i < 0 || i > r) throw data_error("pmf_m: i must lie in [0, r]");
    if (r > 20) throw data_error("pmf_m: enumeration limited to r <= 20");
    double total = 0.0;
    std::vector<int> nu(static_cast<size_t>(r));
    // walk all 2^r indicator vectors; keep those with exactly i ones
    for (std::uint64_t mask = 0; mask < (1ULL << r); ++mask) {
        if (static_cast<int>(std::popcount(mask)) != i) continue;
        for (int k = 0; k < r; ++k) nu[static_cast<size_t>(k)] = (mask >> k) & 1 ? 1 : 0;
        total += pmf_nu(nu, alpha1, alpha2, m, n);
    }
    return total;
}

double pmf_m_all_y(int r, double alpha1, double alpha2, int m, int n) {
    if (r < 1 || r > m + n) throw data_error("pmf_m_all_y: r must lie in [1, m+n]");
    if (r > n) return 0.0;  // cannot take r failures all from Y
    double log_p = 0.0;
    for (int i = 1; i <= r; ++i)
        log_p += std::log((n - i + 1) * alpha2) - std::log(m * alpha1 + alpha2 * (n - i + 1));
    return std::exp(log_p);
}

double pmf_m_all_x(int r, double alpha1, double alpha2, int m, int n) {
    if (r < 1 || r > m + n) throw data_error("pmf_m_all_x: r must lie in [1, m+n]");
    if (r > m) return 0.0;
    double log_p = 0.0;
    for (int i = 1; i <= r; ++i)
        log_p += std::log((m - i + 1) * alpha1) - std::log(alpha1 * (m - i + 1) + n * alpha2);
    return std::exp(log_p);
}

} // namespace jolo
