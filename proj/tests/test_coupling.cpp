#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "scc/coupling.hpp"
#include "scc/grid_path.hpp"
#include "scc/rng.hpp"
#include "test_support.hpp"

using scc::Ensemble;
using scc::GeneratorKind;

TEST_CASE("constant ensembles have identically zero deviations") {
    const Ensemble e = scc::generate_ensemble(GeneratorKind::Constant, 16, 5, 3, 11);
    const auto zeta = scc::uniform_deviations(e);
    for (const auto& row : zeta)
        for (double z : row) REQUIRE(z == 0.0);

    const auto rec = scc::dominate_sequence(zeta, 1.0);
    for (double t : rec.tau) CHECK(t == 0.0);
    for (std::size_t n = 1; n < rec.eps.size(); ++n) CHECK(rec.eps[n] <= rec.eps[n - 1]);
}

TEST_CASE("smooth-decay deviations follow the built-in amplitude n^{-1/2}") {
    const Ensemble e = scc::generate_ensemble(GeneratorKind::SmoothDecay, 64, 4, 1, 5);
    const auto zeta = scc::uniform_deviations(e);
    for (int n = 1; n <= 4; ++n)
        REQUIRE(zeta[0][n - 1] ==
                Catch::Approx(1.0 / std::sqrt(static_cast<double>(n))).epsilon(1e-12));
}

TEST_CASE("rough-decay deviations follow the amplitude 1/n") {
    const Ensemble e = scc::generate_ensemble(GeneratorKind::RoughDecay, 64, 4, 2, 5);
    const auto zeta = scc::uniform_deviations(e);
    for (int r = 0; r < 2; ++r)
        for (int n = 1; n <= 4; ++n)
            REQUIRE(zeta[r][n - 1] == Catch::Approx(1.0 / n).epsilon(1e-12));
}

TEST_CASE("generation is reproducible and seed-sensitive") {
    const Ensemble a = scc::generate_ensemble(GeneratorKind::RoughDecay, 32, 3, 4, 123);
    const Ensemble b = scc::generate_ensemble(GeneratorKind::RoughDecay, 32, 3, 4, 123);
    for (int r = 0; r < 4; ++r) {
        REQUIRE(a.limits[r].values() == b.limits[r].values());
        for (int n = 0; n < 3; ++n)
            REQUIRE(a.members[r][n].values() == b.members[r][n].values());
    }
    const Ensemble c = scc::generate_ensemble(GeneratorKind::RoughDecay, 32, 3, 4, 124);
    CHECK(a.limits[0].values() != c.limits[0].values());
}

TEST_CASE("donsker walks step by 1/sqrt(steps) and are tagged distributional") {
    const Ensemble e = scc::generate_ensemble(GeneratorKind::Donsker, 8, 2, 1, 3);
    CHECK(e.distributional_only);
    const auto& w = e.members[0][0];  // n = 1: one step per grid interval
    const double step = 1.0 / std::sqrt(8.0);
    for (int i = 1; i <= 8; ++i)
        REQUIRE(std::fabs(w.at(i) - w.at(i - 1)) == Catch::Approx(step).epsilon(1e-12));
    CHECK(!scc::generate_ensemble(GeneratorKind::SmoothDecay, 8, 2, 1, 3).distributional_only);
}

TEST_CASE("generator parameter validation") {
    CHECK_THROWS_AS(scc::generate_ensemble(GeneratorKind::Constant, 0, 1, 1, 1),
                    scc::validation_error);
    CHECK_THROWS_AS(scc::generate_ensemble(GeneratorKind::Constant, 4, 0, 1, 1),
                    scc::validation_error);
    CHECK_THROWS_AS(scc::parse_generator_kind("NOT_A_KIND"), scc::validation_error);
}

TEST_CASE("dominate_sequence: single nonincreasing positive row has tau = 1") {
    std::vector<std::vector<double>> zeta{{1.0, 0.5, 0.25, 0.125}};
    const auto rec = scc::dominate_sequence(zeta, 1.0);
    CHECK(rec.eps == zeta[0]);
    CHECK(rec.tau[0] == 1.0);
}

TEST_CASE("dominate_sequence guarantees the inequality exactly") {
    scc::Rng rng(77);
    const int R = 50, N = 20;
    std::vector<std::vector<double>> zeta(R, std::vector<double>(N));
    for (int r = 0; r < R; ++r) {
        const double base = 0.5 + rng.uniform01();
        for (int n = 0; n < N; ++n)
            zeta[r][n] = base * std::pow(0.8, n) * (0.5 + rng.uniform01());
    }
    const auto rec = scc::dominate_sequence(zeta, 0.9);
    for (int n = 1; n < N; ++n) REQUIRE(rec.eps[n] <= rec.eps[n - 1]);
    for (int r = 0; r < R; ++r)
        for (int n = 0; n < N; ++n) REQUIRE(zeta[r][n] <= rec.tau[r] * rec.eps[n]);
}

TEST_CASE("dominate_sequence input validation") {
    CHECK_THROWS_AS(scc::dominate_sequence({}, 0.9), scc::validation_error);
    CHECK_THROWS_AS(scc::dominate_sequence({{1.0, 2.0}, {1.0}}, 0.9), scc::validation_error);
    CHECK_THROWS_AS(scc::dominate_sequence({{-1.0}}, 0.9), scc::validation_error);
    CHECK_THROWS_AS(scc::dominate_sequence({{1.0}}, 0.0), scc::validation_error);
}

TEST_CASE("built-in converging generators show visible decay") {
    // CONSTANT is excluded: its deviations are identically zero, so the strict
    // comparison is vacuous there.
    for (auto kind : {GeneratorKind::SmoothDecay, GeneratorKind::RoughDecay}) {
        const Ensemble e = scc::generate_ensemble(kind, 64, 16, 10, 2024);
        const auto zeta = scc::uniform_deviations(e);
        double first = 0.0, last = 0.0;
        for (int r = 0; r < e.R; ++r) {
            first = std::max(first, zeta[r][0]);
            last = std::max(last, zeta[r][e.N - 1]);
        }
        CHECK(last < first);
        const auto rec = scc::dominate_sequence(zeta, 0.9);
        CHECK(rec.eps[e.N - 1] / rec.eps[0] <= 0.5);
    }
}
