#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scc/coupling.hpp"
#include "scc/errors.hpp"
#include "scc/grid_path.hpp"

namespace scc {

// Continuous-in-sup-norm functionals V: path -> real. Built-ins are
// compositions of max / point evaluation / powers; CUSTOM post-composes a
// built-in with a tabulated PL map. An optional cap clamps the output to
// [-cap, cap], which is how truncation V_N and bounded test functionals are
// expressed.
class Functional {
public:
    enum class Kind { SupNormPower, MaxValue, EvalAt, Custom };

    static Functional sup_norm_power(double p) {
        if (!(p >= 1.0) || !std::isfinite(p))
            throw validation_error("Functional::sup_norm_power: p must be >= 1");
        Functional f;
        f.kind_ = Kind::SupNormPower;
        f.p_ = p;
        return f;
    }

    static Functional max_value() {
        Functional f;
        f.kind_ = Kind::MaxValue;
        return f;
    }

    static Functional eval_at(double t) {
        if (!(t >= 0.0 && t <= 1.0))
            throw validation_error("Functional::eval_at: t must lie in [0,1]");
        Functional f;
        f.kind_ = Kind::EvalAt;
        f.t_ = t;
        return f;
    }

    static Functional custom(Functional base, std::vector<std::pair<double, double>> knots) {
        if (base.kind_ == Kind::Custom)
            throw validation_error("Functional::custom: base must be a built-in");
        if (knots.size() < 2)
            throw validation_error("Functional::custom: needs at least two knots");
        for (std::size_t i = 1; i < knots.size(); ++i)
            if (!(knots[i].first > knots[i - 1].first))
                throw validation_error("Functional::custom: knot inputs must be strictly increasing");
        Functional f;
        f.kind_ = Kind::Custom;
        f.base_ = std::make_shared<Functional>(std::move(base));
        f.knots_ = std::move(knots);
        return f;
    }

    double evaluate(const GridPath& x) const {
        double v = 0.0;
        switch (kind_) {
            case Kind::SupNormPower:
                v = std::pow(sup_norm(x), p_);
                break;
            case Kind::MaxValue:
                v = *std::max_element(x.values().begin(), x.values().end());
                break;
            case Kind::EvalAt:
                v = x.value_at(t_);
                break;
            case Kind::Custom:
                v = pl_map(base_->evaluate(x));
                break;
        }
        if (cap_) v = std::clamp(v, -*cap_, *cap_);
        return v;
    }

    // The truncation V_N: output clamped to [-cap, cap]; truncating an
    // already truncated functional keeps the tighter cap.
    Functional truncated(double cap) const {
        if (!(cap > 0.0)) throw validation_error("Functional::truncated: cap must be positive");
        Functional f = *this;
        f.cap_ = cap_ ? std::min(*cap_, cap) : cap;
        return f;
    }

    Kind kind() const { return kind_; }
    double exponent() const { return p_; }
    double eval_point() const { return t_; }
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }
    const Functional* base() const { return base_.get(); }
    std::optional<double> cap() const { return cap_; }

    std::string describe() const {
        std::string s;
        switch (kind_) {
            case Kind::SupNormPower: s = "sup_norm_power(p=" + std::to_string(p_) + ")"; break;
            case Kind::MaxValue: s = "max_value"; break;
            case Kind::EvalAt: s = "eval_at(t=" + std::to_string(t_) + ")"; break;
            case Kind::Custom: s = "custom(" + base_->describe() + ")"; break;
        }
        if (cap_) s += " clamped to " + std::to_string(*cap_);
        return s;
    }

private:
    Functional() = default;

    double pl_map(double u) const {
        if (u <= knots_.front().first) {
            const auto& [u0, v0] = knots_[0];
            const auto& [u1, v1] = knots_[1];
            return v0 + (v1 - v0) * (u - u0) / (u1 - u0);
        }
        for (std::size_t i = 1; i < knots_.size(); ++i) {
            if (u <= knots_[i].first) {
                const auto& [u0, v0] = knots_[i - 1];
                const auto& [u1, v1] = knots_[i];
                return v0 + (v1 - v0) * (u - u0) / (u1 - u0);
            }
        }
        const auto& [u0, v0] = knots_[knots_.size() - 2];
        const auto& [u1, v1] = knots_.back();
        return v1 + (v1 - v0) * (u - u1) / (u1 - u0);
    }

    Kind kind_ = Kind::MaxValue;
    double p_ = 1.0;
    double t_ = 0.0;
    std::vector<std::pair<double, double>> knots_;
    std::shared_ptr<const Functional> base_;
    std::optional<double> cap_;
};

inline Functional truncate_functional(const Functional& v, double n_cap) {
    return v.truncated(n_cap);
}

namespace detail {

// V evaluated on every member path, reused across caps and indices.
inline std::vector<std::vector<double>> member_values(const Ensemble& e, const Functional& v) {
    std::vector<std::vector<double>> vals(static_cast<std::size_t>(e.R));
    for (int r = 0; r < e.R; ++r) {
        vals[r].reserve(static_cast<std::size_t>(e.N));
        for (int n = 0; n < e.N; ++n) vals[r].push_back(v.evaluate(e.members[r][n]));
    }
    return vals;
}

inline std::vector<double> limit_values(const Ensemble& e, const Functional& v) {
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(e.R));
    for (int r = 0; r < e.R; ++r) vals.push_back(v.evaluate(e.limits[r]));
    return vals;
}

inline double mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

}  // namespace detail

// Empirical uniform-integrability curve: for each cap N, the worst (over n)
// mean tail contribution of |V| above N. Nonincreasing in N by construction
// since every term either survives unchanged or drops to zero.
struct UICurve {
    std::vector<double> caps;
    std::vector<double> entries;
    bool decaying = false;
};

inline UICurve uniform_integrability_curve(const Ensemble& e, const Functional& v,
                                           const std::vector<double>& caps) {
    if (caps.empty())
        throw validation_error("uniform_integrability_curve: empty cap list");
    for (std::size_t i = 0; i < caps.size(); ++i) {
        if (!(caps[i] > 0.0))
            throw validation_error("uniform_integrability_curve: caps must be positive");
        if (i > 0 && !(caps[i] > caps[i - 1]))
            throw validation_error("uniform_integrability_curve: caps must be increasing");
    }

    const auto vals = detail::member_values(e, v);
    UICurve curve;
    curve.caps = caps;
    for (double cap : caps) {
        double worst = 0.0;
        for (int n = 0; n < e.N; ++n) {
            double sum = 0.0;
            for (int r = 0; r < e.R; ++r) {
                const double a = std::fabs(vals[r][n]);
                if (a > cap) sum += a;
            }
            const double avg = sum / static_cast<double>(e.R);
            if (avg > worst) worst = avg;
        }
        curve.entries.push_back(worst);
    }

    double first_nonzero = 0.0;
    for (double x : curve.entries)
        if (x > 0.0) {
            first_nonzero = x;
            break;
        }
    curve.decaying = first_nonzero == 0.0 || curve.entries.back() <= 0.1 * first_nonzero;
    return curve;
}

// Per-n empirical means of V against the limit mean (or an external
// reference). The acceptance band is the larger of abs_tol and the 3-sigma
// Monte Carlo band at the final index.
struct MomentReport {
    std::vector<double> per_n;
    double limit = 0.0;
    double final_gap = 0.0;
    double mc_band = 0.0;
    double abs_tol = 0.0;
    bool convergent = false;
};

inline MomentReport moment_convergence_check(const Ensemble& e, const Functional& v,
                                             std::optional<double> reference = std::nullopt,
                                             double abs_tol = 1e-9) {
    const auto vals = detail::member_values(e, v);
    MomentReport rep;
    rep.abs_tol = abs_tol;
    rep.per_n.resize(static_cast<std::size_t>(e.N));
    for (int n = 0; n < e.N; ++n) {
        double s = 0.0;
        for (int r = 0; r < e.R; ++r) s += vals[r][n];
        rep.per_n[static_cast<std::size_t>(n)] = s / static_cast<double>(e.R);
    }
    rep.limit = reference ? *reference : detail::mean(detail::limit_values(e, v));

    const double final_mean = rep.per_n.back();
    double var = 0.0;
    if (e.R > 1) {
        for (int r = 0; r < e.R; ++r) {
            const double d = vals[r][e.N - 1] - final_mean;
            var += d * d;
        }
        var /= static_cast<double>(e.R - 1);
    }
    rep.mc_band = 3.0 * std::sqrt(var / static_cast<double>(e.R));
    rep.final_gap = std::fabs(final_mean - rep.limit);
    rep.convergent = rep.final_gap <= std::max(abs_tol, rep.mc_band);
    return rep;
}

// Empirical version of the truncation proof split kappa <= k1 + k2 + k3:
// truncation error at n, truncated-moment gap, truncation error at the limit.
struct KappaBreakdown {
    double kappa = 0.0;
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double kappa3 = 0.0;
};

inline KappaBreakdown kappa_decomposition(const Ensemble& e, const Functional& v, int n,
                                          double n_cap) {
    if (n < 1 || n > e.N)
        throw validation_error("kappa_decomposition: index n out of range 1..N");
    if (!(n_cap > 0.0))
        throw validation_error("kappa_decomposition: cap must be positive");

    const Functional vn = v.truncated(n_cap);
    double in_v = 0.0, in_vn = 0.0;
    for (int r = 0; r < e.R; ++r) {
        in_v += v.evaluate(e.members[r][n - 1]);
        in_vn += vn.evaluate(e.members[r][n - 1]);
    }
    in_v /= static_cast<double>(e.R);
    in_vn /= static_cast<double>(e.R);

    double il_v = 0.0, il_vn = 0.0;
    for (int r = 0; r < e.R; ++r) {
        il_v += v.evaluate(e.limits[r]);
        il_vn += vn.evaluate(e.limits[r]);
    }
    il_v /= static_cast<double>(e.R);
    il_vn /= static_cast<double>(e.R);

    KappaBreakdown k;
    k.kappa = std::fabs(in_v - il_v);
    k.kappa1 = std::fabs(in_v - in_vn);
    k.kappa2 = std::fabs(in_vn - il_vn);
    k.kappa3 = std::fabs(il_v - il_vn);
    return k;
}

}  // namespace scc
