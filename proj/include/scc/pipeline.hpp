#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scc/coupling.hpp"
#include "scc/errors.hpp"
#include "scc/holder_space.hpp"
#include "scc/json_io.hpp"
#include "scc/modulus.hpp"
#include "scc/orlicz.hpp"
#include "scc/parallel.hpp"
#include "scc/scaling.hpp"
#include "scc/weak_convergence.hpp"

namespace scc {

struct StrengthenOptions {
    double quantile = 0.95;
    YoungFunction phi = YoungFunction::power(2.0);
    double tail_fraction = 0.25;
    double decay_factor = 0.5;
    double convergence_ratio = 0.1;
    int landmark_count = kDefaultLandmarkCount;
    std::uint64_t landmark_seed = kDefaultLandmarkSeed;
    double abs_tol = 1e-9;
    int threads = 1;
};

namespace detail {

// Per-replication envelope of the difference moduli: the empirical h(omega,.)
// of replication r, the pointwise-smallest function dominating every
// Delta(eta_n - eta, .) on that sample point.
inline std::vector<ModulusProfile> difference_envelopes(const Ensemble& e, int threads) {
    std::vector<std::optional<ModulusProfile>> out(static_cast<std::size_t>(e.R));
    parallel_for(static_cast<std::size_t>(e.R), threads, [&](std::size_t r) {
        std::vector<ModulusProfile> profiles;
        profiles.reserve(static_cast<std::size_t>(e.N));
        for (int n = 0; n < e.N; ++n)
            profiles.push_back(modulus_profile(subtract(e.members[r][n], e.limits[r])));
        out[r] = envelope(profiles);
    });
    std::vector<ModulusProfile> res;
    res.reserve(out.size());
    for (auto& o : out) res.push_back(std::move(*o));
    return res;
}

// Envelope over the paths themselves (limit and members), used for the
// max-merge step that puts the paths, not only their differences, in the
// fitted space.
inline std::vector<ModulusProfile> path_envelopes(const Ensemble& e, int threads) {
    std::vector<std::optional<ModulusProfile>> out(static_cast<std::size_t>(e.R));
    parallel_for(static_cast<std::size_t>(e.R), threads, [&](std::size_t r) {
        std::vector<ModulusProfile> profiles;
        profiles.reserve(static_cast<std::size_t>(e.N) + 1);
        profiles.push_back(modulus_profile(e.limits[r]));
        for (int n = 0; n < e.N; ++n)
            profiles.push_back(modulus_profile(e.members[r][n]));
        out[r] = envelope(profiles);
    });
    std::vector<ModulusProfile> res;
    res.reserve(out.size());
    for (auto& o : out) res.push_back(std::move(*o));
    return res;
}

inline std::vector<int> bl_checkpoints(int N) {
    std::vector<int> ns;
    for (int n = 1; n <= N; n *= 2) ns.push_back(n);
    if (ns.back() != N) ns.push_back(N);
    return ns;
}

}  // namespace detail

// The full strengthening pipeline: deviations and their deterministic/random
// factorization, per-sample modulus envelopes, quantile-fitted scaling with
// the max-merge over path envelopes, Holder-norm convergence in H^o(sqrt g),
// little-o tail checks, Orlicz diagnostics for theta, and bounded-Lipschitz
// surrogate distances in both norms.
inline njson run_strengthen(const Ensemble& e, const StrengthenOptions& opt) {
    if (!(opt.quantile > 0.0 && opt.quantile <= 1.0))
        throw validation_error("run_strengthen: quantile must lie in (0,1]");

    const auto zeta = uniform_deviations(e);
    const DominationRecord dom = dominate_sequence(zeta, opt.quantile);

    const auto diff_envs = detail::difference_envelopes(e, opt.threads);
    const auto path_envs = detail::path_envelopes(e, opt.threads);
    const ScalingTable g_diff = fit_scaling(diff_envs, opt.quantile);
    const ScalingTable g_paths = fit_scaling(path_envs, opt.quantile);
    const ScalingTable g_hat = merge_max(g_diff, g_paths);
    const ScalingTable sqrt_g = sqrt_scale(g_hat);

    std::vector<double> theta;
    int theta_unbounded = 0;
    theta.reserve(diff_envs.size());
    for (const auto& env : diff_envs) {
        try {
            theta.push_back(domination_coefficient(env, g_hat));
        } catch (const numeric_error&) {
            ++theta_unbounded;
            theta.push_back(std::numeric_limits<double>::infinity());
        }
    }
    std::vector<double> theta_finite;
    for (double t : theta)
        if (std::isfinite(t)) theta_finite.push_back(t);

    const NormConvergenceCurve curve =
        norm_convergence_curve(e, g_hat, opt.convergence_ratio, opt.threads);

    int little_o_pass = 0;
    LittleOReport worst_little_o;
    double worst_rank = -1.0;
    for (int r = 0; r < e.R; ++r) {
        const GridPath final_diff = subtract(e.members[r][e.N - 1], e.limits[r]);
        LittleOReport rep =
            little_o_check(final_diff, g_hat, opt.tail_fraction, opt.decay_factor);
        if (rep.pass) ++little_o_pass;
        const double rank =
            rep.pass ? rep.holder_part : std::numeric_limits<double>::infinity();
        if (rank > worst_rank) {
            worst_rank = rank;
            worst_little_o = std::move(rep);
        }
    }

    const SuiteReport suite =
        test_functional_convergence(e, default_test_suite(), opt.abs_tol);

    njson bl = njson::array();
    for (int n : detail::bl_checkpoints(e.N)) {
        std::vector<GridPath> at_n;
        at_n.reserve(static_cast<std::size_t>(e.R));
        for (int r = 0; r < e.R; ++r) at_n.push_back(e.members[r][n - 1]);
        const auto landmarks = draw_landmarks(at_n, opt.landmark_count, opt.landmark_seed);
        njson row;
        row["n"] = n;
        row["sup"] = bounded_lipschitz_distance(at_n, e.limits, landmarks, nullptr);
        row["holder"] = bounded_lipschitz_distance(at_n, e.limits, landmarks, &g_hat);
        bl.push_back(std::move(row));
    }

    int total_non_members = 0;
    for (const auto& pt : curve.per_n) total_non_members += pt.non_members;
    const bool strengthened = curve.convergent && total_non_members == 0;

    njson report;
    report["tool"] = "scc";
    report["report"] = "strengthen";
    njson cfg;
    cfg["quantile"] = opt.quantile;
    cfg["phi"] = to_json(opt.phi);
    cfg["tail_fraction"] = opt.tail_fraction;
    cfg["decay_factor"] = opt.decay_factor;
    cfg["convergence_ratio"] = opt.convergence_ratio;
    cfg["landmark_count"] = opt.landmark_count;
    cfg["landmark_seed"] = opt.landmark_seed;
    cfg["abs_tol"] = opt.abs_tol;
    report["config"] = std::move(cfg);
    njson meta;
    meta["m"] = e.m;
    meta["N"] = e.N;
    meta["R"] = e.R;
    meta["seed"] = e.seed;
    meta["generator_tag"] = e.generator_tag;
    meta["distributional_only"] = e.distributional_only;
    report["ensemble"] = std::move(meta);
    report["domination"] = to_json(dom);
    njson scaling;
    scaling["g_diff"] = to_json(g_diff);
    scaling["g_paths"] = to_json(g_paths);
    scaling["g_hat"] = to_json(g_hat);
    scaling["sqrt_g_hat"] = to_json(sqrt_g);
    report["scaling"] = std::move(scaling);
    njson theta_block;
    theta_block["samples"] = theta;  // +inf serializes as null
    theta_block["unbounded"] = theta_unbounded;
    theta_block["orlicz"] =
        theta_finite.empty() ? njson(nullptr) : to_json(theta_orlicz_report(theta_finite, opt.phi));
    report["theta"] = std::move(theta_block);
    report["holder_curve"] = to_json(curve);
    njson lo;
    lo["note"] = kLittleONote;
    lo["pass"] = little_o_pass;
    lo["fail"] = e.R - little_o_pass;
    lo["worst"] = to_json(worst_little_o);
    report["little_o"] = std::move(lo);
    njson weak;
    weak["functionals"] = to_json(suite);
    weak["landmark_count"] = opt.landmark_count;
    weak["landmark_seed"] = opt.landmark_seed;
    weak["bounded_lipschitz"] = std::move(bl);
    report["weak_convergence"] = std::move(weak);
    report["verdict"] = strengthened ? "STRENGTHENED" : "NOT_STRENGTHENED";
    return report;
}

}  // namespace scc
