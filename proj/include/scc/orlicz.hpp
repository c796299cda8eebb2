#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "scc/errors.hpp"

namespace scc {

// Young-Orlicz function: convex, nondecreasing, Phi(0) = 0. Three families:
// POWER(p): u^p, EXP_SQUARE: exp(u^2/2)-1 (the subgaussian generator), and
// TABULATED: convex PL interpolation through (0,0) of user knots, extended
// past the last knot by its final slope.
class YoungFunction {
public:
    enum class Family { Power, ExpSquare, Tabulated };

    static YoungFunction power(double p) {
        if (!(p >= 1.0) || !std::isfinite(p))
            throw validation_error("YoungFunction::power: p must be >= 1");
        YoungFunction f;
        f.family_ = Family::Power;
        f.p_ = p;
        return f;
    }

    static YoungFunction exp_square() {
        YoungFunction f;
        f.family_ = Family::ExpSquare;
        return f;
    }

    static YoungFunction tabulated(std::vector<std::pair<double, double>> knots) {
        if (knots.empty())
            throw validation_error("YoungFunction::tabulated: needs at least one knot");
        double prev_u = 0.0, prev_v = 0.0, prev_slope = 0.0;
        bool first = true;
        for (const auto& [u, v] : knots) {
            if (!(u > prev_u) || !std::isfinite(u))
                throw validation_error("YoungFunction::tabulated: knot u values must be positive and strictly increasing");
            if (!(v >= prev_v) || !std::isfinite(v))
                throw validation_error("YoungFunction::tabulated: knot values must be nonnegative and nondecreasing");
            const double slope = (v - prev_v) / (u - prev_u);
            if (!first && slope + 1e-15 * std::max(1.0, prev_slope) < prev_slope)
                throw validation_error("YoungFunction::tabulated: knot slopes must be nondecreasing (convexity)");
            prev_u = u;
            prev_v = v;
            prev_slope = slope;
            first = false;
        }
        YoungFunction f;
        f.family_ = Family::Tabulated;
        f.knots_ = std::move(knots);
        return f;
    }

    Family family() const { return family_; }
    double exponent() const { return p_; }
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }

    double value(double u) const {
        u = std::fabs(u);
        switch (family_) {
            case Family::Power:
                return u == 0.0 ? 0.0 : std::pow(u, p_);
            case Family::ExpSquare:
                return std::expm1(0.5 * u * u);
            case Family::Tabulated:
                return tab_value(u);
        }
        return 0.0;
    }

    // log(value(u)), -inf where value is 0; stays finite where value overflows.
    double log_value(double u) const {
        u = std::fabs(u);
        switch (family_) {
            case Family::Power:
                return u == 0.0 ? -std::numeric_limits<double>::infinity() : p_ * std::log(u);
            case Family::ExpSquare: {
                if (u == 0.0) return -std::numeric_limits<double>::infinity();
                const double e = 0.5 * u * u;
                if (e > 700.0) return e + std::log1p(-std::exp(-e));
                return std::log(std::expm1(e));
            }
            case Family::Tabulated: {
                const double v = tab_value(u);
                return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
            }
        }
        return 0.0;
    }

    // Smallest u with value(u) >= y; +inf when y is unreachable.
    double inverse(double y) const {
        if (y <= 0.0) return 0.0;
        switch (family_) {
            case Family::Power:
                return std::pow(y, 1.0 / p_);
            case Family::ExpSquare:
                return std::sqrt(2.0 * std::log1p(y));
            case Family::Tabulated: {
                double pu = 0.0, pv = 0.0;
                for (const auto& [u, v] : knots_) {
                    if (v >= y) {
                        const double slope = (v - pv) / (u - pu);
                        return slope > 0.0 ? pu + (y - pv) / slope : u;
                    }
                    pu = u;
                    pv = v;
                }
                const double last_slope = tail_slope();
                if (last_slope > 0.0) return pu + (y - pv) / last_slope;
                return std::numeric_limits<double>::infinity();
            }
        }
        return 0.0;
    }

    std::string describe() const {
        switch (family_) {
            case Family::Power: return "power(p=" + std::to_string(p_) + ")";
            case Family::ExpSquare: return "exp_square";
            case Family::Tabulated: return "tabulated(" + std::to_string(knots_.size()) + " knots)";
        }
        return "?";
    }

private:
    YoungFunction() = default;

    double tab_value(double u) const {
        if (u == 0.0) return 0.0;
        double pu = 0.0, pv = 0.0;
        for (const auto& [ku, kv] : knots_) {
            if (u <= ku) return pv + (kv - pv) * (u - pu) / (ku - pu);
            pu = ku;
            pv = kv;
        }
        return pv + tail_slope() * (u - pu);
    }

    double tail_slope() const {
        const auto& [lu, lv] = knots_.back();
        if (knots_.size() == 1) return lv / lu;
        const auto& [pu, pv] = knots_[knots_.size() - 2];
        return (lv - pv) / (lu - pu);
    }

    Family family_ = Family::Power;
    double p_ = 1.0;
    std::vector<std::pair<double, double>> knots_;
};

inline constexpr double kOrliczBisectionTolFactor = 1e-10;  // of the initial bracket width

namespace detail {

inline double mean_phi_scaled(const std::vector<double>& samples, const YoungFunction& phi,
                              double inv_c) {
    double sum = 0.0;
    for (double x : samples) sum += phi.value(std::fabs(x) * inv_c);
    return sum / static_cast<double>(samples.size());
}

inline void require_samples(const std::vector<double>& samples, const char* what) {
    if (samples.empty()) throw validation_error(std::string(what) + ": empty sample set");
    for (double x : samples)
        if (!std::isfinite(x))
            throw validation_error(std::string(what) + ": samples must be finite");
}

}  // namespace detail

// Luxemburg norm of the empirical measure: inf{c > 0 : mean Phi(|x|/c) <= 1},
// by bisection. Bracketing starts from the guard c = max|x| / Phi^{-1}(count)
// (below it the largest sample alone pushes the mean above 1) and grows the
// upper end geometrically until the constraint holds.
inline double luxemburg_norm(const std::vector<double>& samples, const YoungFunction& phi) {
    detail::require_samples(samples, "luxemburg_norm");
    double maxabs = 0.0;
    for (double x : samples) maxabs = std::max(maxabs, std::fabs(x));
    if (maxabs == 0.0) return 0.0;
    if (phi.value(maxabs) == 0.0 && phi.value(maxabs * 1e6) == 0.0)
        throw numeric_error("luxemburg_norm: phi vanishes on the sample range");

    const auto constraint_ok = [&](double c) {
        return detail::mean_phi_scaled(samples, phi, 1.0 / c) <= 1.0;
    };

    const double inv = phi.inverse(static_cast<double>(samples.size()));
    double lo = (std::isfinite(inv) && inv > 0.0) ? maxabs / inv : maxabs * 1e-18;
    if (!(lo > 0.0)) lo = maxabs * 1e-18;
    double hi = std::max(lo, maxabs);
    for (int i = 0; !constraint_ok(hi); ++i) {
        hi *= 2.0;
        if (i > 2000) throw numeric_error("luxemburg_norm: no finite norm found");
    }
    while (constraint_ok(lo)) {
        hi = lo;
        lo *= 0.5;
        if (lo < 1e-300) return 0.0;  // every positive c satisfies the constraint
    }

    const double tol = kOrliczBisectionTolFactor * (hi - lo);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (constraint_ok(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

// Scale factor c with mean Phi(c * |x|) = 1, realizing the E Phi(nu) = 1
// normalization convention.
inline double normalize_sup_rv(const std::vector<double>& values, const YoungFunction& phi) {
    detail::require_samples(values, "normalize_sup_rv");
    double maxabs = 0.0;
    for (double x : values) maxabs = std::max(maxabs, std::fabs(x));
    if (maxabs == 0.0)
        throw numeric_error("normalize_sup_rv: all-zero input has no normalization");

    const auto mean_at = [&](double c) {
        double sum = 0.0;
        for (double x : values) sum += phi.value(c * std::fabs(x));
        return sum / static_cast<double>(values.size());
    };

    double hi = 1.0 / maxabs;
    for (int i = 0; mean_at(hi) < 1.0; ++i) {
        hi *= 2.0;
        if (i > 2000) throw numeric_error("normalize_sup_rv: phi too flat, mean never reaches 1");
    }
    double lo = hi;
    while (mean_at(lo) > 1.0) {
        lo *= 0.5;
        if (lo < 1e-300) break;
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double v = mean_at(mid);
        if (std::fabs(v - 1.0) <= 1e-8) return mid;
        if (v < 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Default probe grid: geometric, six decades around 1.
inline std::vector<double> young_probe_grid(double lo = 1e-3, double hi = 1e3, int count = 121) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2)
        throw validation_error("young_probe_grid: invalid parameters");
    std::vector<double> grid(static_cast<std::size_t>(count));
    const double step = std::log(hi / lo) / (count - 1);
    for (int i = 0; i < count; ++i) grid[i] = lo * std::exp(step * i);
    return grid;
}

inline void require_probe_grid(const std::vector<double>& grid, const char* what) {
    if (grid.size() < 8)
        throw validation_error(std::string(what) + ": probe grid too small");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || !std::isfinite(grid[i]))
            throw validation_error(std::string(what) + ": probes must be positive and finite");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw validation_error(std::string(what) + ": probes must be strictly increasing");
    }
    if (grid.back() / grid.front() < 1e6 * (1.0 - 1e-9))
        throw validation_error(std::string(what) + ": probe grid must span at least 6 decades");
}

// Probe-grid proxy for the Delta_2 condition Phi(2u) <= C Phi(u). The two
// built-in families short-circuit to their known answers; the generic path
// declares PASS when the doubling ratio has stopped growing (the ratio at the
// top of the grid is within factor 2 of the ratio at the middle).
struct Delta2Report {
    bool pass = false;
    double ratio_mid = 0.0;
    double ratio_last = 0.0;
    std::string note;
    std::vector<double> probes;
    std::vector<double> ratios;
};

inline Delta2Report delta2_check(const YoungFunction& phi,
                                 const std::vector<double>& probe_grid = young_probe_grid()) {
    require_probe_grid(probe_grid, "delta2_check");
    Delta2Report rep;
    rep.probes = probe_grid;

    if (phi.family() == YoungFunction::Family::Power) {
        const double ratio = std::pow(2.0, phi.exponent());
        rep.pass = true;
        rep.ratio_mid = ratio;
        rep.ratio_last = ratio;
        rep.ratios.assign(probe_grid.size(), ratio);
        rep.note = "closed form: Phi(2u)/Phi(u) = 2^p for every u";
        return rep;
    }

    for (double u : probe_grid) {
        const double lr = phi.log_value(2.0 * u) - phi.log_value(u);
        rep.ratios.push_back(lr > 700.0 ? std::numeric_limits<double>::infinity()
                                        : std::exp(lr));
    }

    if (phi.family() == YoungFunction::Family::ExpSquare) {
        rep.pass = false;
        rep.ratio_mid = rep.ratios[rep.ratios.size() / 2];
        rep.ratio_last = rep.ratios.back();
        rep.note = "closed form: Phi(2u)/Phi(u) grows like exp(3u^2/2), unbounded";
        return rep;
    }

    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < probe_grid.size(); ++i)
        if (std::isfinite(rep.ratios[i]) && phi.value(probe_grid[i]) > 0.0) usable.push_back(i);
    if (usable.size() < 4) {
        rep.pass = false;
        rep.note = "phi vanishes or overflows on nearly the whole probe grid";
        return rep;
    }
    rep.ratio_mid = rep.ratios[usable[usable.size() / 2]];
    rep.ratio_last = rep.ratios[usable.back()];
    rep.pass = std::isfinite(rep.ratio_last) && rep.ratio_last <= 2.0 * rep.ratio_mid;
    rep.note = rep.pass ? "doubling ratio bounded across the probe grid"
                        : "doubling ratio still growing at the top of the probe grid";
    return rep;
}

// Probe-grid proxy for Psi << Phi, i.e. Psi(uv)/Phi(u) -> 0 for every fixed
// v. Each v passes when the ratio trace is nonincreasing over its last third
// and ends at most 1% of its midpoint value.
struct WeakerThanReport {
    struct Trace {
        double v = 0.0;
        bool pass = false;
        std::vector<double> ratios;
    };
    bool pass = false;
    double offending_v = std::numeric_limits<double>::quiet_NaN();
    std::vector<Trace> traces;
};

inline WeakerThanReport weaker_than(const YoungFunction& psi, const YoungFunction& phi,
                                    const std::vector<double>& v_set = {0.5, 1.0, 2.0, 10.0},
                                    const std::vector<double>& probe_grid = young_probe_grid()) {
    require_probe_grid(probe_grid, "weaker_than");
    if (v_set.empty()) throw validation_error("weaker_than: empty v set");

    WeakerThanReport rep;
    rep.pass = true;
    for (double v : v_set) {
        if (!(v > 0.0)) throw validation_error("weaker_than: v values must be positive");
        WeakerThanReport::Trace tr;
        tr.v = v;
        std::vector<double> usable;
        for (double u : probe_grid) {
            const double lphi = phi.log_value(u);
            if (!std::isfinite(lphi) && lphi < 0.0) {
                tr.ratios.push_back(std::numeric_limits<double>::quiet_NaN());
                continue;  // Phi(u) = 0: ratio undefined at this probe
            }
            const double lr = psi.log_value(u * v) - lphi;
            const double ratio = lr > 700.0 ? std::numeric_limits<double>::infinity()
                                            : std::exp(lr);
            tr.ratios.push_back(ratio);
            usable.push_back(ratio);
        }
        bool ok = usable.size() >= 6;
        if (ok) {
            const std::size_t start = usable.size() - usable.size() / 3;
            for (std::size_t i = std::max<std::size_t>(start, 1); i < usable.size() && ok; ++i)
                if (!(usable[i] <= usable[i - 1])) ok = false;
            const double mid = usable[usable.size() / 2];
            const double last = usable.back();
            if (!(std::isfinite(last) && last <= 0.01 * mid)) ok = false;
        }
        tr.pass = ok;
        if (!ok && rep.pass) {
            rep.pass = false;
            rep.offending_v = v;
        }
        rep.traces.push_back(std::move(tr));
    }
    return rep;
}

// Tail diagnostics for the domination coefficient theta: its Luxemburg norm
// under phi, the empirical tail on a log grid, and a half-vs-full sample
// stability ratio (drift away from 1 with more samples suggests theta is not
// in L(phi) for this g).
struct ThetaOrliczReport {
    double luxemburg = 0.0;
    double half_norm = 0.0;
    double half_full_ratio = 1.0;
    std::vector<std::pair<double, double>> tail;  // (t, P(theta > t))
    double bisection_tol_factor = kOrliczBisectionTolFactor;
};

inline ThetaOrliczReport theta_orlicz_report(const std::vector<double>& theta_samples,
                                             const YoungFunction& phi) {
    detail::require_samples(theta_samples, "theta_orlicz_report");
    ThetaOrliczReport rep;
    rep.luxemburg = luxemburg_norm(theta_samples, phi);
    const std::size_t half = std::max<std::size_t>(1, theta_samples.size() / 2);
    rep.half_norm = luxemburg_norm(
        std::vector<double>(theta_samples.begin(), theta_samples.begin() + half), phi);
    rep.half_full_ratio = rep.luxemburg > 0.0 ? rep.half_norm / rep.luxemburg
                                              : (rep.half_norm == 0.0 ? 1.0 : 0.0);

    double maxabs = 0.0, minpos = std::numeric_limits<double>::infinity();
    for (double x : theta_samples) {
        const double a = std::fabs(x);
        maxabs = std::max(maxabs, a);
        if (a > 0.0) minpos = std::min(minpos, a);
    }
    if (maxabs > 0.0) {
        const double lo = std::min(minpos, maxabs * 1e-3);
        const int points = 17;
        const double step = std::log(maxabs / lo) / (points - 1);
        for (int i = 0; i < points; ++i) {
            const double t = lo * std::exp(step * i);
            std::size_t count = 0;
            for (double x : theta_samples)
                if (std::fabs(x) > t) ++count;
            rep.tail.emplace_back(t, static_cast<double>(count) /
                                         static_cast<double>(theta_samples.size()));
        }
    }
    return rep;
}

}  // namespace scc
