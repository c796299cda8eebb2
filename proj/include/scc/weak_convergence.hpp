#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scc/bernstein.hpp"
#include "scc/coupling.hpp"
#include "scc/errors.hpp"
#include "scc/grid_path.hpp"
#include "scc/holder_space.hpp"
#include "scc/rng.hpp"
#include "scc/scaling.hpp"

namespace scc {

// Bounded continuous test functionals: module functionals clamped to
// [-bound, bound]. Their empirical means are the operational stand-in for
// the defining integrals of weak convergence.
struct TestFunctionalSuite {
    std::vector<Functional> members;
    std::vector<std::string> names;
    double bound = 0.0;
};

inline TestFunctionalSuite make_test_suite(const std::vector<Functional>& raw, double bound) {
    if (raw.empty()) throw validation_error("make_test_suite: needs at least one functional");
    if (!(bound > 0.0)) throw validation_error("make_test_suite: bound must be positive");
    TestFunctionalSuite suite;
    suite.bound = bound;
    for (const auto& f : raw) {
        suite.members.push_back(f.truncated(bound));
        suite.names.push_back(suite.members.back().describe());
    }
    return suite;
}

inline TestFunctionalSuite default_test_suite(double bound = 10.0) {
    return make_test_suite(
        {Functional::max_value(), Functional::eval_at(0.5), Functional::sup_norm_power(1.0)},
        bound);
}

struct SuiteReport {
    std::vector<MomentReport> per_functional;
    std::vector<std::string> names;
    bool all_convergent = false;
};

inline SuiteReport test_functional_convergence(const Ensemble& e,
                                               const TestFunctionalSuite& suite,
                                               double abs_tol = 1e-9) {
    if (suite.members.empty())
        throw validation_error("test_functional_convergence: empty suite");
    SuiteReport rep;
    rep.names = suite.names;
    rep.all_convergent = true;
    for (const auto& f : suite.members) {
        rep.per_functional.push_back(moment_convergence_check(e, f, std::nullopt, abs_tol));
        rep.all_convergent = rep.all_convergent && rep.per_functional.back().convergent;
    }
    return rep;
}

inline constexpr std::uint64_t kDefaultLandmarkSeed = 0x5ccb11f5ULL;
inline constexpr int kDefaultLandmarkCount = 32;

// Landmark dictionary drawn deterministically from a sample set by seed.
inline std::vector<GridPath> draw_landmarks(const std::vector<GridPath>& source, int count,
                                            std::uint64_t seed) {
    if (source.empty()) throw validation_error("draw_landmarks: empty source");
    if (count < 1) throw validation_error("draw_landmarks: count must be positive");
    Rng rng(derive_stream_seed(seed, 0));
    std::vector<GridPath> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
        auto idx = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(source.size()));
        if (idx >= source.size()) idx = source.size() - 1;
        out.push_back(source[idx]);
    }
    return out;
}

// Empirical bounded-Lipschitz discrepancy over a fixed dictionary of
// clamped distance-to-landmark functionals: each F(x) = min(d(x, l_j), 1) is
// 1-Lipschitz in the chosen norm and 1-bounded, and the max over the
// dictionary of |mean_a F - mean_b F| is a pseudometric on sample sets. It is
// an empirical surrogate, not the weak-convergence metric itself.
// Pass g = nullptr for sup-norm distances, or a fitted table for distances in
// H^o(sqrt g).
inline double bounded_lipschitz_distance(const std::vector<GridPath>& samples_a,
                                         const std::vector<GridPath>& samples_b,
                                         const std::vector<GridPath>& landmarks,
                                         const ScalingTable* g = nullptr) {
    if (samples_a.empty() || samples_b.empty())
        throw validation_error("bounded_lipschitz_distance: empty sample set");
    if (landmarks.empty())
        throw validation_error("bounded_lipschitz_distance: empty landmark dictionary");
    const int m = samples_a.front().resolution();
    const auto check_set = [&](const std::vector<GridPath>& set) {
        for (const auto& p : set)
            if (p.resolution() != m)
                throw validation_error("bounded_lipschitz_distance: mixed grid resolutions");
    };
    check_set(samples_a);
    check_set(samples_b);
    check_set(landmarks);

    if (g) {
        if (g->resolution() != m)
            throw validation_error("bounded_lipschitz_distance: scaling table resolution mismatch");
        require_usable_scaling(*g, "bounded_lipschitz_distance");
        if (g->degenerate()) {
            const auto nonzero = [](const std::vector<GridPath>& set) {
                for (const auto& p : set)
                    if (sup_norm(p) > 0.0) return true;
                return false;
            };
            if (nonzero(samples_a) || nonzero(samples_b) || nonzero(landmarks))
                throw numeric_error(
                    "bounded_lipschitz_distance: degenerate scaling table with nonzero paths");
        }
    }

    const auto dist = [&](const GridPath& x, const GridPath& l) {
        const GridPath diff = subtract(x, l);
        if (!g) return sup_norm(diff);
        return holder_norm(diff, *g).total;  // +inf for non-members, clamped below
    };

    double worst = 0.0;
    for (const auto& l : landmarks) {
        double mean_a = 0.0;
        for (const auto& x : samples_a) mean_a += std::min(dist(x, l), 1.0);
        mean_a /= static_cast<double>(samples_a.size());
        double mean_b = 0.0;
        for (const auto& x : samples_b) mean_b += std::min(dist(x, l), 1.0);
        mean_b /= static_cast<double>(samples_b.size());
        worst = std::max(worst, std::fabs(mean_a - mean_b));
    }
    return worst;
}

// Convenience form: dictionary drawn from samples_a.
inline double bounded_lipschitz_distance(const std::vector<GridPath>& samples_a,
                                         const std::vector<GridPath>& samples_b,
                                         const ScalingTable* g = nullptr,
                                         int landmark_count = kDefaultLandmarkCount,
                                         std::uint64_t landmark_seed = kDefaultLandmarkSeed) {
    return bounded_lipschitz_distance(samples_a, samples_b,
                                      draw_landmarks(samples_a, landmark_count, landmark_seed),
                                      g);
}

}  // namespace scc
