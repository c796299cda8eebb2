#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "scc/coupling.hpp"
#include "scc/errors.hpp"
#include "scc/grid_path.hpp"
#include "scc/modulus.hpp"
#include "scc/parallel.hpp"
#include "scc/scaling.hpp"

namespace scc {

// Norm in the modified Holder space H^o(sqrt g): sup norm plus the worst
// modulus-to-sqrt(g) ratio over tabulated lags. Non-membership (a positive
// modulus where g vanishes) is a reportable value, not an exception: the
// norm guarantee only holds for correctly fitted g, and diagnosing a failed
// fit is a primary use of this type.
struct HolderNormBreakdown {
    double sup_part = 0.0;
    double holder_part = 0.0;
    double total = 0.0;     // sup_part + holder_part, one addition
    int argmax_k = 0;       // lag attaining holder_part (0 when it is 0)
    bool member = true;     // false => holder_part and total are +inf
};

namespace detail {

inline HolderNormBreakdown holder_norm_from_profile(double sup_part,
                                                    const ModulusProfile& profile,
                                                    const ScalingTable& g) {
    const int m = g.resolution();
    HolderNormBreakdown out;
    out.sup_part = sup_part;
    for (int k = 1; k <= m; ++k) {
        const double d = profile.at(k);
        const double gk = g.at(k);
        if (gk == 0.0) {
            if (d > 0.0) {
                out.member = false;
                out.argmax_k = k;
                out.holder_part = std::numeric_limits<double>::infinity();
                out.total = std::numeric_limits<double>::infinity();
                return out;
            }
            continue;  // 0/0 := 0
        }
        const double ratio = d / std::sqrt(gk);
        if (ratio > out.holder_part) {
            out.holder_part = ratio;
            out.argmax_k = k;
        }
    }
    out.total = out.sup_part + out.holder_part;
    return out;
}

}  // namespace detail

inline void require_usable_scaling(const ScalingTable& g, const char* what) {
    if (!g.normalized() && !g.degenerate())
        throw validation_error(std::string(what) +
                               ": scaling table must be normalized (g[m]=1) or degenerate");
}

inline HolderNormBreakdown holder_norm(const GridPath& f, const ScalingTable& g) {
    if (f.resolution() != g.resolution())
        throw validation_error("holder_norm: grid resolution mismatch");
    require_usable_scaling(g, "holder_norm");
    return detail::holder_norm_from_profile(sup_norm(f), modulus_profile(f), g);
}

// Finite-grid proxy for lim_{delta->0} Delta(f,delta)/sqrt(g(delta)) = 0:
// the ratios over the lowest tail_fraction of usable lags must sit below
// decay_factor times the global Holder part. A grid cannot certify a limit,
// so the verdict is labeled an empirical proxy wherever it is reported.
struct LittleOReport {
    bool pass = false;
    std::string reason;
    double tail_max = 0.0;
    double holder_part = 0.0;
    int tail_lags = 0;
    std::vector<double> ratios;  // ratio at lag k is ratios[k-1]; +inf marks non-membership
};

inline constexpr const char* kLittleONote =
    "empirical proxy: a finite grid cannot certify a limit";

inline LittleOReport little_o_check(const GridPath& f, const ScalingTable& g,
                                    double tail_fraction, double decay_factor = 0.5) {
    if (f.resolution() != g.resolution())
        throw validation_error("little_o_check: grid resolution mismatch");
    if (!(tail_fraction > 0.0 && tail_fraction < 1.0))
        throw validation_error("little_o_check: tail_fraction must lie in (0,1)");
    if (!(decay_factor > 0.0))
        throw validation_error("little_o_check: decay_factor must be positive");

    const int m = g.resolution();
    const ModulusProfile profile = modulus_profile(f);

    LittleOReport rep;
    rep.ratios.assign(static_cast<std::size_t>(m), 0.0);

    if (g.degenerate() && sup_norm(f) > 0.0) {
        rep.pass = false;
        rep.reason = "degenerate scaling table with nonzero path";
        return rep;
    }

    bool member = true;
    std::vector<int> usable;
    usable.reserve(static_cast<std::size_t>(m));
    for (int k = 1; k <= m; ++k) {
        const double d = profile.at(k);
        const double gk = g.at(k);
        if (gk == 0.0) {
            if (d > 0.0) {
                rep.ratios[k - 1] = std::numeric_limits<double>::infinity();
                member = false;
            }
            continue;
        }
        usable.push_back(k);
        const double ratio = d / std::sqrt(gk);
        rep.ratios[k - 1] = ratio;
        if (ratio > rep.holder_part) rep.holder_part = ratio;
    }
    if (!member) {
        rep.pass = false;
        rep.reason = "not in space: positive modulus where g vanishes";
        return rep;
    }
    if (usable.empty()) {
        rep.pass = true;  // zero path against degenerate g
        rep.reason = "no usable lags; path and scaling both vanish";
        return rep;
    }

    const int tail_count =
        std::max(1, static_cast<int>(std::ceil(tail_fraction * static_cast<double>(usable.size()))));
    rep.tail_lags = tail_count;
    for (int i = 0; i < tail_count; ++i)
        rep.tail_max = std::max(rep.tail_max, rep.ratios[usable[i] - 1]);
    rep.pass = rep.tail_max <= decay_factor * rep.holder_part;
    rep.reason = rep.pass ? "tail ratios decayed below factor * holder_part"
                          : "tail ratios do not decay";
    return rep;
}

// Upper bound on the number of sup-norm eps-balls covering the unit ball of
// H^o(sqrt g) on this grid. Any unit-ball member moves by at most
// sqrt(g[k*]) <= eps/3 across one sub-grid step, so it is pinned down within
// eps by its values quantized to an eps/3 lattice on the sub-grid. The count
// overflows 64 bits quickly, hence the exact decimal string.
struct CoveringBound {
    int k_star = 0;           // coarsest usable sub-grid step
    int subgrid_nodes = 0;    // floor(m/k*) + 1
    long long quant_levels = 0;
    double log10_bound = 0.0;
    std::string bound_decimal;
};

namespace detail {

inline std::string power_decimal(unsigned long long base, int exponent) {
    std::vector<std::uint32_t> limbs{1};  // little-endian, base 1e9
    const std::uint64_t kLimb = 1000000000ULL;
    for (int e = 0; e < exponent; ++e) {
        std::uint64_t carry = 0;
        for (auto& limb : limbs) {
            const std::uint64_t cur = static_cast<std::uint64_t>(limb) * base + carry;
            limb = static_cast<std::uint32_t>(cur % kLimb);
            carry = cur / kLimb;
        }
        while (carry) {
            limbs.push_back(static_cast<std::uint32_t>(carry % kLimb));
            carry /= kLimb;
        }
    }
    std::string out = std::to_string(limbs.back());
    for (std::size_t i = limbs.size() - 1; i-- > 0;) {
        std::string part = std::to_string(limbs[i]);
        out += std::string(9 - part.size(), '0') + part;
    }
    return out;
}

}  // namespace detail

inline CoveringBound covering_number_bound(const ScalingTable& g, double eps) {
    if (!g.normalized())
        throw validation_error("covering_number_bound: scaling table must be normalized");
    if (!(eps > 0.0))
        throw validation_error("covering_number_bound: eps must be positive");

    const int m = g.resolution();
    const double target = eps / 3.0;
    int k_star = 0;
    for (int k = m; k >= 1; --k) {
        if (std::sqrt(g.at(k)) <= target) {
            k_star = k;
            break;
        }
    }
    if (k_star == 0)
        throw numeric_error(
            "covering_number_bound: no sub-grid step with sqrt(g) <= eps/3 at this "
            "resolution; refit with a larger m");

    CoveringBound b;
    b.k_star = k_star;
    b.subgrid_nodes = m / k_star + 1;
    b.quant_levels = static_cast<long long>(std::floor(2.0 / target)) + 1;
    b.log10_bound = b.subgrid_nodes * std::log10(static_cast<double>(b.quant_levels));
    b.bound_decimal = detail::power_decimal(static_cast<unsigned long long>(b.quant_levels),
                                            b.subgrid_nodes);
    return b;
}

// Per-n statistics of ||eta_n - eta|| over replications. Non-members are
// counted and excluded from mean/max; the curve is still produced.
struct NormCurvePoint {
    int n = 0;
    double mean_norm = 0.0;  // NaN when every replication is a non-member
    double max_norm = 0.0;
    int non_members = 0;
};

struct NormConvergenceCurve {
    std::vector<NormCurvePoint> per_n;
    bool convergent = false;
    double convergence_ratio = 0.1;
};

inline NormConvergenceCurve norm_convergence_curve(const Ensemble& e, const ScalingTable& g,
                                                   double convergence_ratio = 0.1,
                                                   int threads = 1) {
    if (e.m != g.resolution())
        throw validation_error("norm_convergence_curve: grid resolution mismatch");
    require_usable_scaling(g, "norm_convergence_curve");

    const std::size_t total = static_cast<std::size_t>(e.R) * static_cast<std::size_t>(e.N);
    std::vector<HolderNormBreakdown> cells(total);
    parallel_for(total, threads, [&](std::size_t idx) {
        const int r = static_cast<int>(idx / static_cast<std::size_t>(e.N));
        const int n = static_cast<int>(idx % static_cast<std::size_t>(e.N));
        const GridPath diff = subtract(e.members[r][n], e.limits[r]);
        cells[idx] = detail::holder_norm_from_profile(sup_norm(diff), modulus_profile(diff), g);
    });

    NormConvergenceCurve curve;
    curve.convergence_ratio = convergence_ratio;
    curve.per_n.resize(static_cast<std::size_t>(e.N));
    for (int n = 0; n < e.N; ++n) {
        NormCurvePoint pt;
        pt.n = n + 1;
        double sum = 0.0;
        double mx = 0.0;
        int finite = 0;
        for (int r = 0; r < e.R; ++r) {
            const auto& b = cells[static_cast<std::size_t>(r) * e.N + n];
            if (!b.member) {
                ++pt.non_members;
                continue;
            }
            sum += b.total;
            if (b.total > mx) mx = b.total;
            ++finite;
        }
        if (finite > 0) {
            pt.mean_norm = sum / finite;
            pt.max_norm = mx;
        } else {
            pt.mean_norm = std::numeric_limits<double>::quiet_NaN();
            pt.max_norm = std::numeric_limits<double>::quiet_NaN();
        }
        curve.per_n[static_cast<std::size_t>(n)] = pt;
    }
    const double first = curve.per_n.front().mean_norm;
    const double last = curve.per_n.back().mean_norm;
    curve.convergent = std::isfinite(first) && std::isfinite(last) &&
                       last <= convergence_ratio * first;
    return curve;
}

}  // namespace scc
