#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "scc/errors.hpp"
#include "scc/grid_path.hpp"
#include "scc/rng.hpp"

namespace scc {

// Replicated coupled sequences: R independent copies of a limit path eta
// together with its approximating sequence eta_1..eta_N, all living on one
// sample space so uniform a.s. convergence is meaningful pathwise.
struct Ensemble {
    int m = 0;
    int N = 0;
    int R = 0;
    std::vector<GridPath> limits;               // size R
    std::vector<std::vector<GridPath>> members; // R x N
    std::uint64_t seed = 0;                     // 0 when externally ingested
    std::string generator_tag;
    // Donsker ensembles couple only in distribution, not pathwise; using them
    // in a.s. diagnostics is a category error, so the flag travels with them.
    bool distributional_only = false;
};

enum class GeneratorKind { SmoothDecay, RoughDecay, Donsker, Constant };

inline GeneratorKind parse_generator_kind(const std::string& s) {
    if (s == "SMOOTH_DECAY" || s == "smooth_decay") return GeneratorKind::SmoothDecay;
    if (s == "ROUGH_DECAY" || s == "rough_decay") return GeneratorKind::RoughDecay;
    if (s == "DONSKER" || s == "donsker") return GeneratorKind::Donsker;
    if (s == "CONSTANT" || s == "constant") return GeneratorKind::Constant;
    throw validation_error("unknown generator kind: " + s);
}

inline const char* generator_kind_name(GeneratorKind k) {
    switch (k) {
        case GeneratorKind::SmoothDecay: return "SMOOTH_DECAY";
        case GeneratorKind::RoughDecay: return "ROUGH_DECAY";
        case GeneratorKind::Donsker: return "DONSKER";
        case GeneratorKind::Constant: return "CONSTANT";
    }
    return "?";
}

namespace detail {

// Brownian-like path by midpoint displacement on the smallest power-of-two
// grid >= m, resampled to the target grid when m is not a power of two.
inline GridPath midpoint_displacement_path(int m, Rng& rng) {
    int cap = 1;
    while (cap < m) cap *= 2;
    std::vector<double> b(static_cast<std::size_t>(cap) + 1, 0.0);
    b[static_cast<std::size_t>(cap)] = rng.normal();
    for (int span = cap; span > 1; span /= 2) {
        const int half = span / 2;
        const double sd = 0.5 * std::sqrt(static_cast<double>(span) / cap);
        for (int i = 0; i + span <= cap; i += span)
            b[i + half] = 0.5 * (b[i] + b[i + span]) + sd * rng.normal();
    }
    if (cap == m) return GridPath(std::move(b));
    GridPath fine(std::move(b));
    std::vector<double> v(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i <= m; ++i) v[i] = fine.value_at(static_cast<double>(i) / m);
    return GridPath(std::move(v));
}

inline GridPath normalize_to_unit_sup(GridPath p) {
    const double s = sup_norm(p);
    if (s < 1e-12) {
        // degenerate draw; fall back to a fixed bump
        const int m = p.resolution();
        std::vector<double> v(static_cast<std::size_t>(m) + 1);
        for (int i = 0; i <= m; ++i)
            v[i] = std::sin(3.14159265358979323846 * i / m);
        return normalize_to_unit_sup(GridPath(std::move(v)));
    }
    return scale(p, 1.0 / s);
}

// Sum of a few low-frequency sine bumps, unit sup norm.
inline GridPath smooth_bump(int m, Rng& rng) {
    std::vector<double> v(static_cast<std::size_t>(m) + 1, 0.0);
    for (int j = 0; j < 3; ++j) {
        const double freq = 1.0 + std::floor(rng.uniform01() * 4.0);
        const double amp = 2.0 * rng.uniform01() - 1.0;
        const double phase = rng.uniform01();
        for (int i = 0; i <= m; ++i) {
            const double t = static_cast<double>(i) / m;
            v[i] += amp * std::sin(3.14159265358979323846 * (freq * t + phase));
        }
    }
    return normalize_to_unit_sup(GridPath(std::move(v)));
}

inline GridPath rough_bump(int m, Rng& rng) {
    return normalize_to_unit_sup(midpoint_displacement_path(m, rng));
}

// Scaled +-1 partial-sum path with n*m steps; grid node i sits exactly at
// step i*n, so no interpolation error enters.
inline GridPath donsker_walk(int m, int n, Rng& rng) {
    const long long steps = static_cast<long long>(n) * m;
    const double inv = 1.0 / std::sqrt(static_cast<double>(steps));
    std::vector<double> v(static_cast<std::size_t>(m) + 1, 0.0);
    long long sum = 0;
    for (int i = 1; i <= m; ++i) {
        for (int s = 0; s < n; ++s) sum += rng.rademacher();
        v[i] = static_cast<double>(sum) * inv;
    }
    return GridPath(std::move(v));
}

inline GridPath gaussian_walk(int m, Rng& rng) {
    const double sd = std::sqrt(1.0 / m);
    std::vector<double> v(static_cast<std::size_t>(m) + 1, 0.0);
    for (int i = 1; i <= m; ++i) v[i] = v[i - 1] + sd * rng.normal();
    return GridPath(std::move(v));
}

}  // namespace detail

// Coupled ensembles are built directly rather than through the Skorokhod
// representation theorem, which licenses their existence but gives no
// construction. SMOOTH_DECAY and ROUGH_DECAY converge uniformly a.s. by
// construction; CONSTANT is the identically coupled edge case; DONSKER
// couples in distribution only and is tagged so.
inline Ensemble generate_ensemble(GeneratorKind kind, int m, int N, int R,
                                  std::uint64_t seed) {
    if (m < 1 || N < 1 || R < 1)
        throw validation_error("generate_ensemble: m, N, R must be positive");

    Ensemble e;
    e.m = m;
    e.N = N;
    e.R = R;
    e.seed = seed;
    e.generator_tag = generator_kind_name(kind);
    e.distributional_only = (kind == GeneratorKind::Donsker);
    e.limits.reserve(R);
    e.members.resize(R);

    for (int r = 0; r < R; ++r) {
        Rng rng(derive_stream_seed(seed, static_cast<std::uint64_t>(r)));
        auto& row = e.members[r];
        row.reserve(N);
        switch (kind) {
            case GeneratorKind::SmoothDecay: {
                GridPath limit = detail::midpoint_displacement_path(m, rng);
                for (int n = 1; n <= N; ++n) {
                    const double a = 1.0 / std::sqrt(static_cast<double>(n));
                    row.push_back(add(limit, scale(detail::smooth_bump(m, rng), a)));
                }
                e.limits.push_back(std::move(limit));
                break;
            }
            case GeneratorKind::RoughDecay: {
                GridPath limit = detail::midpoint_displacement_path(m, rng);
                for (int n = 1; n <= N; ++n) {
                    const double a = 1.0 / static_cast<double>(n);
                    row.push_back(add(limit, scale(detail::rough_bump(m, rng), a)));
                }
                e.limits.push_back(std::move(limit));
                break;
            }
            case GeneratorKind::Donsker: {
                e.limits.push_back(detail::gaussian_walk(m, rng));
                for (int n = 1; n <= N; ++n)
                    row.push_back(detail::donsker_walk(m, n, rng));
                break;
            }
            case GeneratorKind::Constant: {
                GridPath limit = detail::midpoint_displacement_path(m, rng);
                for (int n = 1; n <= N; ++n) row.push_back(limit);
                e.limits.push_back(std::move(limit));
                break;
            }
        }
    }
    return e;
}

// zeta[r][n-1] = sup |eta_n - eta| for replication r.
inline std::vector<std::vector<double>> uniform_deviations(const Ensemble& e) {
    std::vector<std::vector<double>> zeta(static_cast<std::size_t>(e.R));
    for (int r = 0; r < e.R; ++r) {
        zeta[r].resize(static_cast<std::size_t>(e.N));
        for (int n = 0; n < e.N; ++n)
            zeta[r][n] = sup_norm(subtract(e.members[r][n], e.limits[r]));
    }
    return zeta;
}

// The factorization zeta <= tau * eps: eps is deterministic and nonincreasing,
// tau carries the per-replication remainder.
struct DominationRecord {
    std::vector<double> eps;               // size N, nonincreasing, positive
    std::vector<double> tau;               // size R, nonnegative
    std::vector<std::vector<double>> zeta; // R x N, the input deviations
};

// eps_n := running max from the right of the per-n q-quantile, floored at a
// tiny positive value so ratios stay defined; tau_r := max_n zeta/eps, nudged
// up until zeta[r][n] <= tau[r]*eps[n] holds exactly at every entry.
inline DominationRecord dominate_sequence(const std::vector<std::vector<double>>& zeta,
                                          double q) {
    if (zeta.empty() || zeta.front().empty())
        throw validation_error("dominate_sequence: empty deviation matrix");
    if (!(q > 0.0 && q <= 1.0))
        throw validation_error("dominate_sequence: quantile must lie in (0,1]");
    const std::size_t R = zeta.size();
    const std::size_t N = zeta.front().size();
    for (const auto& row : zeta) {
        if (row.size() != N)
            throw validation_error("dominate_sequence: ragged deviation matrix");
        for (double z : row)
            if (!std::isfinite(z) || z < 0.0)
                throw validation_error("dominate_sequence: deviations must be finite and nonnegative");
    }

    constexpr double kFloor = 1e-300;
    DominationRecord rec;
    rec.zeta = zeta;
    rec.eps.resize(N);

    std::vector<double> column(R);
    for (std::size_t n = 0; n < N; ++n) {
        for (std::size_t r = 0; r < R; ++r) column[r] = zeta[r][n];
        std::sort(column.begin(), column.end());
        std::size_t idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(R)));
        if (idx < 1) idx = 1;
        if (idx > R) idx = R;
        rec.eps[n] = column[idx - 1];
    }
    for (std::size_t n = N; n-- > 0;) {
        if (n + 1 < N && rec.eps[n] < rec.eps[n + 1]) rec.eps[n] = rec.eps[n + 1];
        if (rec.eps[n] < kFloor) rec.eps[n] = kFloor;
    }

    rec.tau.resize(R, 0.0);
    for (std::size_t r = 0; r < R; ++r) {
        double tau = 0.0;
        for (std::size_t n = 0; n < N; ++n) {
            const double ratio = zeta[r][n] / rec.eps[n];
            if (ratio > tau) tau = ratio;
        }
        for (std::size_t n = 0; n < N; ++n)
            while (zeta[r][n] > tau * rec.eps[n])
                tau = std::nextafter(tau, std::numeric_limits<double>::infinity());
        rec.tau[r] = tau;
    }
    return rec;
}

}  // namespace scc
