#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "scc/errors.hpp"
#include "scc/modulus.hpp"

namespace scc {

// Deterministic scaling function g tabulated on grid lags: nonnegative,
// nondecreasing, g[0] = 0. Fitted tables are normalized to g[m] = 1 unless
// every input envelope was identically zero, which is the flagged degenerate
// state (arises for identically coupled ensembles) rather than an error.
class ScalingTable {
public:
    ScalingTable(int m, std::vector<double> g) : m_(m), g_(std::move(g)) {
        if (m_ < 1 || g_.size() != static_cast<std::size_t>(m_) + 1)
            throw validation_error("ScalingTable: g must have m+1 entries");
        if (g_[0] != 0.0)
            throw validation_error("ScalingTable: g[0] must be 0");
        for (std::size_t k = 0; k < g_.size(); ++k) {
            if (!std::isfinite(g_[k]) || g_[k] < 0.0)
                throw validation_error("ScalingTable: entries must be finite and nonnegative");
            if (k > 0 && g_[k] < g_[k - 1])
                throw validation_error("ScalingTable: entries must be nondecreasing");
        }
    }

    int resolution() const { return m_; }
    double at(int k) const { return g_[static_cast<std::size_t>(k)]; }
    const std::vector<double>& values() const { return g_; }
    bool normalized() const { return g_[static_cast<std::size_t>(m_)] == 1.0; }
    bool degenerate() const { return g_[static_cast<std::size_t>(m_)] == 0.0; }

    // g(delta) = delta, the linear reference table.
    static ScalingTable linear(int m) {
        std::vector<double> g(static_cast<std::size_t>(m) + 1);
        for (int k = 0; k <= m; ++k) g[k] = static_cast<double>(k) / m;
        return ScalingTable(m, std::move(g));
    }

private:
    int m_;
    std::vector<double> g_;
};

// Empirical quantile: order statistic at 1-based index ceil(q*R).
inline double order_statistic_quantile(std::vector<double> sorted_scratch, double q) {
    std::sort(sorted_scratch.begin(), sorted_scratch.end());
    const auto r = sorted_scratch.size();
    std::size_t idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(r)));
    if (idx < 1) idx = 1;
    if (idx > r) idx = r;
    return sorted_scratch[idx - 1];
}

// Per-lag q-quantile of the envelope family, monotonized by a running max
// and normalized to g[m] = 1. The quantile leaves the top (1-q) share of
// envelopes above g; their excess is carried by the domination coefficient.
inline ScalingTable fit_scaling(const std::vector<ModulusProfile>& envelopes, double q) {
    if (envelopes.empty())
        throw validation_error("fit_scaling: empty envelope family");
    if (!(q > 0.0 && q <= 1.0))
        throw validation_error("fit_scaling: quantile must lie in (0,1]");
    const int m = envelopes.front().resolution();
    for (const auto& e : envelopes)
        if (e.resolution() != m)
            throw validation_error("fit_scaling: mixed grid resolutions");

    std::vector<double> g(static_cast<std::size_t>(m) + 1, 0.0);
    std::vector<double> column(envelopes.size());
    for (int k = 1; k <= m; ++k) {
        for (std::size_t r = 0; r < envelopes.size(); ++r) column[r] = envelopes[r].at(k);
        g[k] = order_statistic_quantile(column, q);
    }
    for (int k = 1; k <= m; ++k)
        if (g[k] < g[k - 1]) g[k] = g[k - 1];

    const double top = g[static_cast<std::size_t>(m)];
    if (top > 0.0) {
        for (int k = 1; k <= m; ++k) g[k] /= top;
        g[static_cast<std::size_t>(m)] = 1.0;
    }
    return ScalingTable(m, std::move(g));
}

// Smallest theta with envelope[k] <= theta * g[k] at every tabulated lag.
// The raw max of ratios can land one ulp short after the divide/multiply
// round trip, so theta is nudged up until the inequality holds exactly.
inline double domination_coefficient(const ModulusProfile& env, const ScalingTable& g) {
    if (env.resolution() != g.resolution())
        throw validation_error("domination_coefficient: grid resolution mismatch");
    const int m = g.resolution();
    double theta = 0.0;
    for (int k = 1; k <= m; ++k) {
        const double e = env.at(k);
        const double gv = g.at(k);
        if (gv == 0.0) {
            if (e > 0.0)
                throw numeric_error(
                    "domination_coefficient: g fails to dominate (g vanishes at lag " +
                    std::to_string(k) + " where envelope is positive)");
            continue;  // 0/0 := 0
        }
        const double ratio = e / gv;
        if (ratio > theta) theta = ratio;
    }
    for (int k = 1; k <= m; ++k) {
        while (env.at(k) > theta * g.at(k))
            theta = std::nextafter(theta, std::numeric_limits<double>::infinity());
    }
    return theta;
}

inline ScalingTable sqrt_scale(const ScalingTable& g) {
    std::vector<double> out(g.values().size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::sqrt(g.values()[k]);
    return ScalingTable(g.resolution(), std::move(out));
}

inline ScalingTable merge_max(const ScalingTable& g1, const ScalingTable& g2) {
    if (g1.resolution() != g2.resolution())
        throw validation_error("merge_max: grid resolution mismatch");
    std::vector<double> out(g1.values().size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = std::max(g1.values()[k], g2.values()[k]);
    return ScalingTable(g1.resolution(), std::move(out));
}

}  // namespace scc
