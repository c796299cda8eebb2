#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "scc/coupling.hpp"
#include "scc/scaling.hpp"
#include "scc/weak_convergence.hpp"
#include "test_support.hpp"

using scc::Ensemble;
using scc::Functional;
using scc::GridPath;
using testsupport::random_path;

TEST_CASE("test functional convergence on identical copies is trivially convergent") {
    const Ensemble e = scc::generate_ensemble(scc::GeneratorKind::Constant, 16, 4, 6, 3);
    const auto rep = scc::test_functional_convergence(e, scc::default_test_suite());
    CHECK(rep.all_convergent);
    CHECK(rep.per_functional.size() == 3);
}

TEST_CASE("a saturated functional yields constant means and converges") {
    // every path value is >= 5, the clamp at 1 saturates everything
    Ensemble e;
    e.m = 2;
    e.N = 3;
    e.R = 2;
    e.generator_tag = "manual";
    for (int r = 0; r < 2; ++r) {
        const GridPath p({5.0 + r, 6.0, 7.0});
        e.limits.push_back(p);
        e.members.emplace_back(std::vector<GridPath>(3, GridPath({8.0, 9.0 + r, 10.0})));
    }
    const auto suite = scc::make_test_suite({Functional::max_value()}, 1.0);
    const auto rep = scc::test_functional_convergence(e, suite);
    CHECK(rep.all_convergent);
    for (double x : rep.per_functional[0].per_n) CHECK(x == 1.0);
    CHECK(rep.per_functional[0].limit == 1.0);
}

TEST_CASE("suite verdict is invariant under replication permutation") {
    const Ensemble e = scc::generate_ensemble(scc::GeneratorKind::SmoothDecay, 32, 6, 8, 44);
    Ensemble p = e;
    std::reverse(p.limits.begin(), p.limits.end());
    std::reverse(p.members.begin(), p.members.end());
    const auto suite = scc::default_test_suite();
    const auto ra = scc::test_functional_convergence(e, suite);
    const auto rb = scc::test_functional_convergence(p, suite);
    CHECK(ra.all_convergent == rb.all_convergent);
    for (std::size_t i = 0; i < ra.per_functional.size(); ++i)
        CHECK(ra.per_functional[i].convergent == rb.per_functional[i].convergent);
}

TEST_CASE("bounded-lipschitz distance of a set to itself is zero") {
    scc::Rng rng(55);
    std::vector<GridPath> xs;
    for (int i = 0; i < 6; ++i) xs.push_back(random_path(16, rng));
    CHECK(scc::bounded_lipschitz_distance(xs, xs) == 0.0);
}

TEST_CASE("two-point case: the landmark functional attains the sup distance") {
    const GridPath p({0.0, 0.2, 0.0});
    const GridPath q({0.0, 0.9, 0.1});
    const double d = scc::sup_norm(scc::subtract(p, q));
    REQUIRE(d <= 1.0);
    const double bl = scc::bounded_lipschitz_distance({p}, {q}, std::vector<GridPath>{p});
    CHECK(bl == d);
}

TEST_CASE("bounded-lipschitz distance is a pseudometric over a fixed dictionary") {
    scc::Rng rng(59);
    const int m = 16;
    std::vector<GridPath> a, b, c, landmarks;
    for (int i = 0; i < 5; ++i) {
        a.push_back(random_path(m, rng));
        b.push_back(random_path(m, rng));
        c.push_back(random_path(m, rng));
        landmarks.push_back(random_path(m, rng));
    }
    const double dab = scc::bounded_lipschitz_distance(a, b, landmarks);
    const double dba = scc::bounded_lipschitz_distance(b, a, landmarks);
    const double dac = scc::bounded_lipschitz_distance(a, c, landmarks);
    const double dcb = scc::bounded_lipschitz_distance(c, b, landmarks);
    CHECK(dab == dba);
    CHECK(dab <= dac + dcb + 1e-12);

    // and in the Holder norm as well
    const scc::ScalingTable g = testsupport::random_scaling(m, rng);
    const double hab = scc::bounded_lipschitz_distance(a, b, landmarks, &g);
    const double hba = scc::bounded_lipschitz_distance(b, a, landmarks, &g);
    const double hac = scc::bounded_lipschitz_distance(a, c, landmarks, &g);
    const double hcb = scc::bounded_lipschitz_distance(c, b, landmarks, &g);
    CHECK(hab == hba);
    CHECK(hab <= hac + hcb + 1e-12);
}

TEST_CASE("landmark draws are deterministic in the seed") {
    scc::Rng rng(61);
    std::vector<GridPath> src;
    for (int i = 0; i < 9; ++i) src.push_back(random_path(8, rng));
    const auto l1 = scc::draw_landmarks(src, 5, 42);
    const auto l2 = scc::draw_landmarks(src, 5, 42);
    for (int j = 0; j < 5; ++j) REQUIRE(l1[j].values() == l2[j].values());
}

TEST_CASE("smooth-decay members drift toward the limits in both norms") {
    const Ensemble e = scc::generate_ensemble(scc::GeneratorKind::SmoothDecay, 64, 16, 20, 321);
    std::vector<scc::ModulusProfile> envs;
    for (int r = 0; r < e.R; ++r) {
        std::vector<scc::ModulusProfile> profs;
        for (int n = 0; n < e.N; ++n)
            profs.push_back(scc::modulus_profile(scc::subtract(e.members[r][n], e.limits[r])));
        envs.push_back(scc::envelope(profs));
    }
    const scc::ScalingTable g = scc::fit_scaling(envs, 0.95);

    const auto at = [&](int n) {
        std::vector<GridPath> xs;
        for (int r = 0; r < e.R; ++r) xs.push_back(e.members[r][n - 1]);
        return xs;
    };
    for (std::uint64_t seed : {scc::kDefaultLandmarkSeed, std::uint64_t{777}}) {
        const auto first = at(1);
        const auto last = at(16);
        const auto landmarks = scc::draw_landmarks(first, 32, seed);
        const double sup_first =
            scc::bounded_lipschitz_distance(first, e.limits, landmarks);
        const double sup_last = scc::bounded_lipschitz_distance(last, e.limits, landmarks);
        CHECK(sup_last < sup_first);
        const double hol_first =
            scc::bounded_lipschitz_distance(first, e.limits, landmarks, &g);
        const double hol_last =
            scc::bounded_lipschitz_distance(last, e.limits, landmarks, &g);
        CHECK(hol_last < hol_first);
    }
}

TEST_CASE("degenerate scaling with nonzero paths is an error in Holder mode") {
    const int m = 8;
    const scc::ScalingTable zero(m, std::vector<double>(m + 1, 0.0));
    scc::Rng rng(71);
    std::vector<GridPath> a{random_path(m, rng)}, b{random_path(m, rng)};
    CHECK_THROWS_AS(scc::bounded_lipschitz_distance(a, b, a, &zero), scc::numeric_error);
}

TEST_CASE("suite construction validates its input") {
    CHECK_THROWS_AS(scc::make_test_suite({}, 1.0), scc::validation_error);
    CHECK_THROWS_AS(scc::make_test_suite({Functional::max_value()}, 0.0),
                    scc::validation_error);
    const auto suite = scc::make_test_suite({Functional::sup_norm_power(3.0)}, 2.0);
    const GridPath big({0.0, 50.0, 0.0});
    CHECK(suite.members[0].evaluate(big) == 2.0);  // clamped to the bound
}
