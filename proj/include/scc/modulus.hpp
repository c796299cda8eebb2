#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "scc/errors.hpp"
#include "scc/grid_path.hpp"

namespace scc {

// Tabulated modulus of continuity: delta(k) = sup over |t-s| <= k/m of
// |f(t)-f(s)|. For PL paths the sup is attained at node pairs, so the table
// is the exact modulus of the continuous extension.
class ModulusProfile {
public:
    ModulusProfile(int m, std::vector<double> delta)
        : m_(m), delta_(std::move(delta)) {
        if (m_ < 1 || delta_.size() != static_cast<std::size_t>(m_) + 1)
            throw validation_error("ModulusProfile: delta must have m+1 entries");
        if (delta_[0] != 0.0)
            throw validation_error("ModulusProfile: delta[0] must be 0");
        for (std::size_t k = 0; k < delta_.size(); ++k) {
            if (!std::isfinite(delta_[k]) || delta_[k] < 0.0)
                throw validation_error("ModulusProfile: entries must be finite and nonnegative");
            if (k > 0 && delta_[k] < delta_[k - 1])
                throw validation_error("ModulusProfile: entries must be nondecreasing");
        }
    }

    int resolution() const { return m_; }
    double at(int k) const { return delta_[static_cast<std::size_t>(k)]; }
    const std::vector<double>& delta() const { return delta_; }

private:
    int m_;
    std::vector<double> delta_;
};

// Largest |f_j - f_i| over index pairs with j - i <= k.
inline double modulus_of_continuity(const GridPath& f, int k) {
    const int m = f.resolution();
    if (k < 0 || k > m)
        throw validation_error("modulus_of_continuity: lag out of range 0..m");
    const auto& v = f.values();
    double best = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j <= i + k && j <= m; ++j) {
            const double d = std::fabs(v[j] - v[i]);
            if (d > best) best = d;
        }
    return best;
}

// Whole table in one O(m^2) pass: per-lag maxima, then a running max in k.
// The candidate set per lag is the same as the per-k scan's, and max over a
// fixed set of doubles does not depend on visit order, so the result is
// bitwise identical to calling modulus_of_continuity at every k.
inline ModulusProfile modulus_profile(const GridPath& f) {
    const int m = f.resolution();
    const auto& v = f.values();
    std::vector<double> delta(static_cast<std::size_t>(m) + 1, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j <= m; ++j) {
            const double d = std::fabs(v[j] - v[i]);
            double& slot = delta[static_cast<std::size_t>(j - i)];
            if (d > slot) slot = d;
        }
    for (int k = 1; k <= m; ++k)
        if (delta[k] < delta[k - 1]) delta[k] = delta[k - 1];
    return ModulusProfile(m, std::move(delta));
}

// Pointwise max over a family of profiles; realizes the smallest envelope
// dominating every member on this sample.
inline ModulusProfile envelope(const std::vector<ModulusProfile>& profiles) {
    if (profiles.empty())
        throw validation_error("envelope: empty profile family");
    const int m = profiles.front().resolution();
    std::vector<double> delta(static_cast<std::size_t>(m) + 1, 0.0);
    for (const auto& p : profiles) {
        if (p.resolution() != m)
            throw validation_error("envelope: mixed grid resolutions");
        for (int k = 0; k <= m; ++k)
            if (p.at(k) > delta[k]) delta[k] = p.at(k);
    }
    return ModulusProfile(m, std::move(delta));
}

}  // namespace scc
