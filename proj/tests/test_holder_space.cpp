#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "scc/coupling.hpp"
#include "scc/holder_space.hpp"
#include "scc/json_io.hpp"
#include "scc/modulus.hpp"
#include "scc/rng.hpp"
#include "scc/scaling.hpp"
#include "test_support.hpp"

using scc::GridPath;
using scc::ScalingTable;
using testsupport::random_path;
using testsupport::random_scaling;

namespace {

// Direct double-loop evaluation: per-lag pair scan for the modulus, then the
// ratio maximum, written without the library's profile machinery.
double oracle_holder_total(const GridPath& f, const ScalingTable& g) {
    const auto& v = f.values();
    const int m = f.resolution();
    double sup = 0.0;
    for (double x : v) sup = std::max(sup, std::fabs(x));
    double holder = 0.0;
    for (int k = 1; k <= m; ++k) {
        double delta = 0.0;
        for (int i = 0; i <= m; ++i)
            for (int j = i + 1; j <= m && j - i <= k; ++j)
                delta = std::max(delta, std::fabs(v[j] - v[i]));
        if (g.at(k) == 0.0) {
            if (delta > 0.0) return std::numeric_limits<double>::infinity();
            continue;
        }
        holder = std::max(holder, delta / std::sqrt(g.at(k)));
    }
    return sup + holder;
}

GridPath concave_root_path(int m) {
    std::vector<double> v(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i <= m; ++i) v[i] = std::sqrt(static_cast<double>(i) / m);
    return GridPath(std::move(v));
}

}  // namespace

TEST_CASE("holder norm of the zero path is zero") {
    const ScalingTable g = ScalingTable::linear(8);
    const auto b = scc::holder_norm(GridPath::zero(8), g);
    CHECK(b.member);
    CHECK(b.sup_part == 0.0);
    CHECK(b.holder_part == 0.0);
    CHECK(b.total == 0.0);
}

TEST_CASE("g-shaped path: modulus equals g, so the holder part is sqrt(g[m]) = 1") {
    const int m = 16;
    const GridPath f = concave_root_path(m);
    std::vector<double> gv(m + 1);
    for (int i = 0; i <= m; ++i) gv[i] = f.at(i);
    const ScalingTable g(m, gv);

    // concavity puts the worst lag-k window at the origin: Delta(f,k) = g[k]
    const auto prof = scc::modulus_profile(f);
    for (int k = 0; k <= m; ++k) REQUIRE(prof.at(k) == g.at(k));

    const auto b = scc::holder_norm(f, g);
    CHECK(b.member);
    CHECK(b.sup_part == 1.0);
    CHECK(b.holder_part == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(b.total == Catch::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("holder norm matches the brute-force double loop") {
    scc::Rng rng(19);
    for (int rep = 0; rep < 15; ++rep) {
        const GridPath f = random_path(32, rng);
        const ScalingTable g = random_scaling(32, rng);
        const auto b = scc::holder_norm(f, g);
        REQUIRE(b.member);
        REQUIRE(b.total == Catch::Approx(oracle_holder_total(f, g)).epsilon(1e-13));
        REQUIRE(b.total == b.sup_part + b.holder_part);
        REQUIRE(b.holder_part >= scc::modulus_of_continuity(f, b.argmax_k) /
                                     std::sqrt(g.at(b.argmax_k)) * (1.0 - 1e-12));
    }
}

TEST_CASE("non-membership is a value, not a crash") {
    // g stays zero on the first lags; a rough path has positive modulus there
    const int m = 8;
    std::vector<double> gv(m + 1, 0.0);
    gv[m] = 1.0;
    const ScalingTable g(m, gv);
    scc::Rng rng(4);
    const GridPath f = random_path(m, rng);
    const auto b = scc::holder_norm(f, g);
    CHECK(!b.member);
    CHECK(std::isinf(b.total));
    CHECK(b.argmax_k >= 1);
}

TEST_CASE("norm axioms: homogeneity, triangle, zero iff zero") {
    scc::Rng rng(61);
    for (int rep = 0; rep < 100; ++rep) {
        const int m = 16;
        const ScalingTable g = random_scaling(m, rng);
        const GridPath f = random_path(m, rng);
        const GridPath h = random_path(m, rng);

        const double c = -3.0 + 6.0 * rng.uniform01();
        const auto bf = scc::holder_norm(f, g);
        const auto bcf = scc::holder_norm(scc::scale(f, c), g);
        REQUIRE(bcf.total == Catch::Approx(std::fabs(c) * bf.total).epsilon(1e-12));

        const auto bh = scc::holder_norm(h, g);
        const auto bsum = scc::holder_norm(scc::add(f, h), g);
        const double scale_bound = bf.total + bh.total;
        REQUIRE(bsum.total <= scale_bound + 1e-12 * scale_bound);

        REQUIRE(bf.total > 0.0);  // random paths are nonzero
    }
    const ScalingTable g = random_scaling(16, rng);
    CHECK(scc::holder_norm(GridPath::zero(16), g).total == 0.0);
}

TEST_CASE("embedding: sup norm never exceeds the holder total") {
    scc::Rng rng(67);
    for (int rep = 0; rep < 30; ++rep) {
        const GridPath f = random_path(12, rng);
        const ScalingTable g = random_scaling(12, rng);
        REQUIRE(scc::sup_norm(f) <= scc::holder_norm(f, g).total);
    }
}

TEST_CASE("unit ball members are equicontinuous at scale sqrt(g)") {
    scc::Rng rng(71);
    const int m = 24;
    const ScalingTable g = random_scaling(m, rng);
    for (int rep = 0; rep < 30; ++rep) {
        GridPath f = random_path(m, rng);
        const double t = scc::holder_norm(f, g).total;
        f = scc::scale(f, 0.99 / t);  // rescale into the unit ball
        REQUIRE(scc::holder_norm(f, g).total <= 1.0);
        for (int k = 1; k <= m; ++k)
            REQUIRE(scc::modulus_of_continuity(f, k) <=
                    std::sqrt(g.at(k)) * (1.0 + 1e-12));
    }
}

TEST_CASE("a larger scaling function gives a smaller holder part") {
    scc::Rng rng(73);
    for (int rep = 0; rep < 20; ++rep) {
        const int m = 12;
        const ScalingTable g1 = random_scaling(m, rng);
        const ScalingTable g2 = scc::merge_max(g1, random_scaling(m, rng));
        const GridPath f = random_path(m, rng);
        REQUIRE(scc::holder_norm(f, g2).holder_part <=
                scc::holder_norm(f, g1).holder_part * (1.0 + 1e-12));
    }
}

TEST_CASE("holder norm requires a normalized or degenerate table") {
    std::vector<double> gv{0.0, 0.1, 0.5};  // top != 1: neither normalized nor degenerate
    CHECK_THROWS_AS(scc::holder_norm(GridPath::zero(2), ScalingTable(2, gv)),
                    scc::validation_error);
}

TEST_CASE("little-o check: zero path passes, degenerate g with signal fails") {
    const ScalingTable g = ScalingTable::linear(16);
    const auto rep = scc::little_o_check(GridPath::zero(16), g, 0.25);
    CHECK(rep.pass);
    for (double r : rep.ratios) CHECK(r == 0.0);

    const ScalingTable zero(16, std::vector<double>(17, 0.0));
    scc::Rng rng(5);
    const auto bad = scc::little_o_check(random_path(16, rng), zero, 0.25);
    CHECK(!bad.pass);
    CHECK(bad.reason.find("degenerate") != std::string::npos);
}

TEST_CASE("little-o check: modulus equal to g yields sqrt(g) ratios and passes") {
    const int m = 16;
    const GridPath f = testsupport::linear_path(m);  // Delta(f,k) = k/m = g[k]
    const ScalingTable g = ScalingTable::linear(m);
    const auto rep = scc::little_o_check(f, g, 0.25);
    for (int k = 1; k <= m; ++k)
        REQUIRE(rep.ratios[k - 1] == Catch::Approx(std::sqrt(g.at(k))).epsilon(1e-12));
    CHECK(rep.holder_part == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(rep.tail_max <= 0.5 * rep.holder_part);
    CHECK(rep.pass);
}

TEST_CASE("little-o tail max shrinks under grid refinement") {
    // Brownian-like path against the scaling fitted from its own modulus.
    // The tail window covers a fixed count of lags, so refinement probes
    // ever-smaller delta and the tail statistic has to come down.
    const auto run = [](int m) {
        scc::Rng rng(scc::derive_stream_seed(12345, 0));
        const GridPath f = scc::detail::midpoint_displacement_path(m, rng);
        const ScalingTable g = scc::fit_scaling({scc::modulus_profile(f)}, 1.0);
        return scc::little_o_check(f, g, 8.0 / m);
    };
    const auto coarse = run(512);
    const auto fine = run(1024);
    CHECK(fine.tail_max < coarse.tail_max);
}

TEST_CASE("little-o check on a non-member fails with a reason") {
    const int m = 8;
    std::vector<double> gv(m + 1, 0.0);
    gv[m] = 1.0;
    scc::Rng rng(6);
    const auto rep = scc::little_o_check(random_path(m, rng), ScalingTable(m, gv), 0.25);
    CHECK(!rep.pass);
    CHECK(rep.reason.find("not in space") != std::string::npos);
}

TEST_CASE("covering bound: huge eps needs only the trivial sub-grid") {
    const ScalingTable g = ScalingTable::linear(8);
    const auto b = scc::covering_number_bound(g, 3.0);
    CHECK(b.k_star == 8);
    CHECK(b.subgrid_nodes == 2);
    CHECK(b.quant_levels == 3);
    CHECK(b.bound_decimal == "9");
}

TEST_CASE("covering bound: too-coarse grid is reported as an error") {
    // sqrt(g[1]) = 0.25 > 0.6/3 already
    CHECK_THROWS_AS(scc::covering_number_bound(ScalingTable::linear(16), 0.6),
                    scc::numeric_error);
}

TEST_CASE("covering bound on a fine grid, checked by a sampling oracle") {
    const int m = 1024;
    const ScalingTable g = ScalingTable::linear(m);
    const double eps = 0.6;
    const auto b = scc::covering_number_bound(g, eps);

    CHECK(b.k_star == 40);  // largest k with sqrt(k/1024) <= 0.2
    CHECK(b.subgrid_nodes == 26);
    CHECK(b.quant_levels == 11);
    CHECK(b.log10_bound == Catch::Approx(26.0 * std::log10(11.0)));

    // independent decimal: 11^26 via 128-bit arithmetic
    unsigned __int128 bound = 1;
    for (int i = 0; i < 26; ++i) bound *= 11;
    std::string expect;
    while (bound > 0) {
        expect.insert(expect.begin(), static_cast<char>('0' + static_cast<int>(bound % 10)));
        bound /= 10;
    }
    CHECK(b.bound_decimal == expect);

    // sampling oracle: every unit-ball path stays within eps of its sub-grid
    // quantization (values rounded to the eps/3 lattice, PL in between)
    scc::Rng rng(99);
    const double cell = eps / 3.0;
    for (int rep = 0; rep < 1000; ++rep) {
        GridPath f = scc::detail::midpoint_displacement_path(m, rng);
        const double t = scc::holder_norm(f, g).total;
        if (t > 0.0) f = scc::scale(f, 0.98 / t);

        std::vector<double> qvals(static_cast<std::size_t>(b.subgrid_nodes));
        for (int j = 0; j < b.subgrid_nodes; ++j)
            qvals[j] = std::round(f.at(j * b.k_star) / cell) * cell;
        double worst = 0.0;
        for (int i = 0; i <= m; ++i) {
            const int j = i / b.k_star;
            double approx;
            if (j >= b.subgrid_nodes - 1) {
                approx = qvals[b.subgrid_nodes - 1];  // past the last full cell
            } else {
                const double frac = (static_cast<double>(i) - j * b.k_star) / b.k_star;
                approx = qvals[j] + (qvals[j + 1] - qvals[j]) * frac;
            }
            worst = std::max(worst, std::fabs(f.at(i) - approx));
        }
        REQUIRE(worst <= eps);
    }
}

TEST_CASE("norm curve: identical copies give the all-zero convergent curve") {
    const auto e = scc::generate_ensemble(scc::GeneratorKind::Constant, 32, 6, 4, 7);
    const ScalingTable g = ScalingTable::linear(32);
    const auto curve = scc::norm_convergence_curve(e, g);
    CHECK(curve.convergent);
    for (const auto& pt : curve.per_n) {
        CHECK(pt.mean_norm == 0.0);
        CHECK(pt.max_norm == 0.0);
        CHECK(pt.non_members == 0);
    }
}

TEST_CASE("norm curve scales like 1/n for a fixed perturbation") {
    const int m = 32, N = 8, R = 3;
    scc::Rng rng(21);
    scc::Ensemble e;
    e.m = m;
    e.N = N;
    e.R = R;
    e.generator_tag = "manual";
    std::vector<scc::ModulusProfile> envs;
    for (int r = 0; r < R; ++r) {
        const GridPath eta = random_path(m, rng);
        const GridPath w = random_path(m, rng);
        e.limits.push_back(eta);
        e.members.emplace_back();
        for (int n = 1; n <= N; ++n)
            e.members.back().push_back(scc::add(eta, scc::scale(w, 1.0 / n)));
        envs.push_back(scc::modulus_profile(w));
    }
    const ScalingTable g = scc::fit_scaling(envs, 1.0);
    const auto curve = scc::norm_convergence_curve(e, g);
    for (int n = 1; n <= N; ++n) {
        REQUIRE(curve.per_n[n - 1].non_members == 0);
        REQUIRE(curve.per_n[n - 1].mean_norm ==
                Catch::Approx(curve.per_n[0].mean_norm / n).epsilon(1e-9));
    }
    CHECK(!curve.convergent);  // 1/8 > 0.1 of the initial value
}

TEST_CASE("norm curve counts non-members per entry and still reports") {
    const int m = 8;
    std::vector<double> gv(m + 1, 0.0);
    gv[m] = 1.0;
    const ScalingTable g(m, gv);
    scc::Rng rng(31);
    scc::Ensemble e;
    e.m = m;
    e.N = 2;
    e.R = 2;
    e.generator_tag = "manual";
    for (int r = 0; r < 2; ++r) {
        e.limits.push_back(GridPath::zero(m));
        e.members.push_back({random_path(m, rng), random_path(m, rng)});
    }
    const auto curve = scc::norm_convergence_curve(e, g);
    CHECK(!curve.convergent);
    for (const auto& pt : curve.per_n) {
        CHECK(pt.non_members == 2);
        CHECK(std::isnan(pt.mean_norm));
    }
    const scc::njson j = scc::to_json(curve);
    CHECK(j["per_n"][0]["mean_norm"].is_null());
}
