#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "scc/errors.hpp"

namespace scc {

// A real function sampled on the uniform grid t_i = i/m, i = 0..m, extended
// to [0,1] by linear interpolation. The PL extension attains its sup norm and
// its modulus of continuity on grid nodes, so everything downstream stays
// exact on the grid.
class GridPath {
public:
    explicit GridPath(std::vector<double> values) : values_(std::move(values)) {
        if (values_.size() < 2)
            throw validation_error("GridPath needs at least 2 values (m >= 1)");
        for (double v : values_)
            if (!std::isfinite(v))
                throw validation_error("GridPath values must be finite");
    }

    static GridPath zero(int m) {
        if (m < 1) throw validation_error("GridPath resolution must be positive");
        return GridPath(std::vector<double>(static_cast<std::size_t>(m) + 1, 0.0));
    }

    int resolution() const { return static_cast<int>(values_.size()) - 1; }

    double at(int i) const { return values_[static_cast<std::size_t>(i)]; }

    const std::vector<double>& values() const { return values_; }

    // PL interpolation at arbitrary t in [0,1].
    double value_at(double t) const {
        if (t < 0.0 || t > 1.0) throw validation_error("value_at: t outside [0,1]");
        const int m = resolution();
        const double u = t * m;
        const int j = std::min(static_cast<int>(u), m - 1);
        const double frac = u - j;
        return values_[j] + (values_[j + 1] - values_[j]) * frac;
    }

private:
    std::vector<double> values_;
};

inline void require_same_resolution(const GridPath& f, const GridPath& g, const char* what) {
    if (f.resolution() != g.resolution())
        throw validation_error(std::string(what) + ": grid resolution mismatch (" +
                               std::to_string(f.resolution()) + " vs " +
                               std::to_string(g.resolution()) + ")");
}

// sup_{[0,1]} |f|; the max over nodes is exact for the PL extension.
inline double sup_norm(const GridPath& f) {
    double best = 0.0;
    for (double v : f.values()) {
        const double a = std::fabs(v);
        if (a > best) best = a;
    }
    return best;
}

inline GridPath subtract(const GridPath& f, const GridPath& g) {
    require_same_resolution(f, g, "subtract");
    std::vector<double> out(f.values().size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.values()[i] - g.values()[i];
    return GridPath(std::move(out));
}

inline GridPath add(const GridPath& f, const GridPath& g) {
    require_same_resolution(f, g, "add");
    std::vector<double> out(f.values().size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.values()[i] + g.values()[i];
    return GridPath(std::move(out));
}

inline GridPath scale(const GridPath& f, double c) {
    std::vector<double> out(f.values().size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * f.values()[i];
    return GridPath(std::move(out));
}

}  // namespace scc
