#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "scc/bernstein.hpp"
#include "scc/coupling.hpp"
#include "scc/errors.hpp"
#include "scc/grid_path.hpp"
#include "scc/holder_space.hpp"
#include "scc/modulus.hpp"
#include "scc/orlicz.hpp"
#include "scc/scaling.hpp"
#include "scc/weak_convergence.hpp"

namespace scc {

// Insertion-ordered JSON keeps report key order fixed, and nlohmann's dtoa
// emits the shortest round-trip decimal, so identical values serialize to
// identical bytes.
using njson = nlohmann::ordered_json;

namespace io {

// Shortest round-trip decimal, used for CSV cells.
inline std::string double_to_string(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, const char* what) {
    double out = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw validation_error(std::string(what) + ": cannot parse number '" + std::string(s) + "'");
    return out;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw validation_error("cannot write file: " + path.string());
    out << content;
    if (!out) throw validation_error("write failed: " + path.string());
}

inline njson parse_json(const std::string& text, const char* what) {
    njson j = njson::parse(text, nullptr, false);
    if (j.is_discarded())
        throw validation_error(std::string(what) + ": malformed JSON");
    return j;
}

// Strict object schema: every listed key present or optional, nothing else.
inline void require_object(const njson& j, const std::vector<std::string>& required,
                           const std::vector<std::string>& optional, const char* what) {
    if (!j.is_object()) throw validation_error(std::string(what) + ": expected a JSON object");
    for (const auto& k : required)
        if (!j.contains(k))
            throw validation_error(std::string(what) + ": missing key '" + k + "'");
    for (const auto& item : j.items()) {
        const std::string& k = item.key();
        bool known = false;
        for (const auto& r : required) known = known || (k == r);
        for (const auto& o : optional) known = known || (k == o);
        if (!known)
            throw validation_error(std::string(what) + ": unknown key '" + k + "'");
    }
}

inline std::vector<double> number_array(const njson& j, const char* what) {
    if (!j.is_array()) throw validation_error(std::string(what) + ": expected an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number()) throw validation_error(std::string(what) + ": expected numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace io

// ---- core value types ----

inline njson to_json(const GridPath& p) {
    return njson{{"m", p.resolution()}, {"values", p.values()}};
}

inline GridPath grid_path_from_json(const njson& j) {
    io::require_object(j, {"m", "values"}, {}, "GridPath");
    auto values = io::number_array(j.at("values"), "GridPath.values");
    const int m = j.at("m").get<int>();
    if (static_cast<std::size_t>(m) + 1 != values.size())
        throw validation_error("GridPath: m does not match values length");
    return GridPath(std::move(values));
}

inline njson to_json(const ModulusProfile& p) {
    return njson{{"m", p.resolution()}, {"delta", p.delta()}};
}

inline ModulusProfile profile_from_json(const njson& j) {
    io::require_object(j, {"m", "delta"}, {}, "ModulusProfile");
    auto delta = io::number_array(j.at("delta"), "ModulusProfile.delta");
    const int m = j.at("m").get<int>();
    if (static_cast<std::size_t>(m) + 1 != delta.size())
        throw validation_error("ModulusProfile: m does not match delta length");
    return ModulusProfile(m, std::move(delta));
}

inline njson to_json(const ScalingTable& g) {
    return njson{{"m", g.resolution()},
                 {"g", g.values()},
                 {"normalized", g.normalized()},
                 {"degenerate", g.degenerate()}};
}

inline ScalingTable scaling_from_json(const njson& j) {
    io::require_object(j, {"m", "g"}, {"normalized", "degenerate"}, "ScalingTable");
    auto g = io::number_array(j.at("g"), "ScalingTable.g");
    const int m = j.at("m").get<int>();
    if (static_cast<std::size_t>(m) + 1 != g.size())
        throw validation_error("ScalingTable: m does not match g length");
    return ScalingTable(m, std::move(g));
}

// ---- Young function config ----

inline njson to_json(const YoungFunction& phi) {
    switch (phi.family()) {
        case YoungFunction::Family::Power:
            return njson{{"family", "power"}, {"p", phi.exponent()}};
        case YoungFunction::Family::ExpSquare:
            return njson{{"family", "exp_square"}};
        case YoungFunction::Family::Tabulated: {
            njson knots = njson::array();
            for (const auto& [u, v] : phi.knots()) knots.push_back(njson::array({u, v}));
            return njson{{"family", "tabulated"}, {"knots", knots}};
        }
    }
    return njson{};
}

inline YoungFunction young_from_json(const njson& j) {
    io::require_object(j, {"family"}, {"p", "knots"}, "YoungFunction");
    const std::string family = j.at("family").get<std::string>();
    if (family == "power") {
        if (!j.contains("p")) throw validation_error("YoungFunction: power needs 'p'");
        return YoungFunction::power(j.at("p").get<double>());
    }
    if (family == "exp_square") {
        if (j.contains("p") || j.contains("knots"))
            throw validation_error("YoungFunction: exp_square takes no parameters");
        return YoungFunction::exp_square();
    }
    if (family == "tabulated") {
        if (!j.contains("knots")) throw validation_error("YoungFunction: tabulated needs 'knots'");
        std::vector<std::pair<double, double>> knots;
        for (const auto& k : j.at("knots")) {
            if (!k.is_array() || k.size() != 2)
                throw validation_error("YoungFunction: knots must be [u, phi_u] pairs");
            knots.emplace_back(k[0].get<double>(), k[1].get<double>());
        }
        return YoungFunction::tabulated(std::move(knots));
    }
    throw validation_error("YoungFunction: unknown family '" + family + "'");
}

// ---- Functional config ----

inline njson to_json(const Functional& f) {
    njson j;
    switch (f.kind()) {
        case Functional::Kind::SupNormPower:
            j = njson{{"kind", "sup_norm_power"}, {"p", f.exponent()}};
            break;
        case Functional::Kind::MaxValue:
            j = njson{{"kind", "max_value"}};
            break;
        case Functional::Kind::EvalAt:
            j = njson{{"kind", "eval_at"}, {"t", f.eval_point()}};
            break;
        case Functional::Kind::Custom: {
            njson knots = njson::array();
            for (const auto& [u, v] : f.knots()) knots.push_back(njson::array({u, v}));
            j = njson{{"kind", "custom"}, {"base", to_json(*f.base())}, {"knots", knots}};
            break;
        }
    }
    if (f.cap()) j["cap"] = *f.cap();
    return j;
}

inline Functional functional_from_json(const njson& j) {
    io::require_object(j, {"kind"}, {"p", "t", "base", "knots", "cap"}, "Functional");
    const std::string kind = j.at("kind").get<std::string>();
    Functional f = Functional::max_value();
    if (kind == "sup_norm_power") {
        if (!j.contains("p")) throw validation_error("Functional: sup_norm_power needs 'p'");
        f = Functional::sup_norm_power(j.at("p").get<double>());
    } else if (kind == "max_value") {
        f = Functional::max_value();
    } else if (kind == "eval_at") {
        if (!j.contains("t")) throw validation_error("Functional: eval_at needs 't'");
        f = Functional::eval_at(j.at("t").get<double>());
    } else if (kind == "custom") {
        if (!j.contains("base") || !j.contains("knots"))
            throw validation_error("Functional: custom needs 'base' and 'knots'");
        std::vector<std::pair<double, double>> knots;
        for (const auto& k : j.at("knots")) {
            if (!k.is_array() || k.size() != 2)
                throw validation_error("Functional: knots must be [u, v] pairs");
            knots.emplace_back(k[0].get<double>(), k[1].get<double>());
        }
        f = Functional::custom(functional_from_json(j.at("base")), std::move(knots));
    } else {
        throw validation_error("Functional: unknown kind '" + kind + "'");
    }
    if (j.contains("cap")) f = f.truncated(j.at("cap").get<double>());
    return f;
}

// ---- report pieces ----

inline njson to_json(const HolderNormBreakdown& b) {
    njson j;
    j["member"] = b.member;
    j["sup_part"] = b.sup_part;
    if (b.member) {
        j["holder_part"] = b.holder_part;
        j["total"] = b.total;
    } else {
        j["holder_part"] = nullptr;
        j["total"] = nullptr;
    }
    j["argmax_k"] = b.argmax_k;
    return j;
}

inline njson to_json(const LittleOReport& r) {
    njson j;
    j["pass"] = r.pass;
    j["reason"] = r.reason;
    j["note"] = kLittleONote;
    j["tail_max"] = r.tail_max;
    j["holder_part"] = r.holder_part;
    j["tail_lags"] = r.tail_lags;
    j["ratios"] = r.ratios;
    return j;
}

inline njson to_json(const CoveringBound& b) {
    return njson{{"k_star", b.k_star},
                 {"subgrid_nodes", b.subgrid_nodes},
                 {"quant_levels", b.quant_levels},
                 {"log10_bound", b.log10_bound},
                 {"bound", b.bound_decimal}};
}

inline njson to_json(const NormConvergenceCurve& c) {
    njson per_n = njson::array();
    for (const auto& pt : c.per_n) {
        njson row;
        row["n"] = pt.n;
        row["mean_norm"] = std::isnan(pt.mean_norm) ? njson(nullptr) : njson(pt.mean_norm);
        row["max_norm"] = std::isnan(pt.max_norm) ? njson(nullptr) : njson(pt.max_norm);
        row["non_members"] = pt.non_members;
        per_n.push_back(std::move(row));
    }
    return njson{{"per_n", per_n},
                 {"convergence_ratio", c.convergence_ratio},
                 {"verdict", c.convergent ? "CONVERGENT" : "NOT_CONVERGENT"}};
}

inline njson to_json(const DominationRecord& rec) {
    return njson{{"eps", rec.eps}, {"tau", rec.tau}};
}

inline njson to_json(const ThetaOrliczReport& r) {
    njson tail = njson::array();
    for (const auto& [t, p] : r.tail) tail.push_back(njson{{"t", t}, {"p_exceed", p}});
    return njson{{"luxemburg_norm", r.luxemburg},
                 {"half_sample_norm", r.half_norm},
                 {"half_full_ratio", r.half_full_ratio},
                 {"tail", tail},
                 {"bisection_tol_factor", r.bisection_tol_factor}};
}

inline njson to_json(const Delta2Report& r) {
    return njson{{"pass", r.pass},
                 {"ratio_mid", r.ratio_mid},
                 {"ratio_last", r.ratio_last},
                 {"note", r.note},
                 {"probes", r.probes},
                 {"ratios", r.ratios}};
}

inline njson to_json(const WeakerThanReport& r) {
    njson traces = njson::array();
    for (const auto& t : r.traces)
        traces.push_back(njson{{"v", t.v}, {"pass", t.pass}, {"ratios", t.ratios}});
    njson j;
    j["pass"] = r.pass;
    if (std::isfinite(r.offending_v))
        j["offending_v"] = r.offending_v;
    else
        j["offending_v"] = nullptr;
    j["traces"] = traces;
    return j;
}

inline njson to_json(const UICurve& c) {
    return njson{{"caps", c.caps},
                 {"entries", c.entries},
                 {"verdict", c.decaying ? "DECAYING" : "NOT_DECAYING"}};
}

inline njson to_json(const MomentReport& r) {
    return njson{{"per_n", r.per_n},
                 {"limit", r.limit},
                 {"final_gap", r.final_gap},
                 {"mc_band", r.mc_band},
                 {"abs_tol", r.abs_tol},
                 {"verdict", r.convergent ? "CONVERGENT" : "NOT_CONVERGENT"}};
}

inline njson to_json(const KappaBreakdown& k) {
    return njson{{"kappa", k.kappa},
                 {"kappa1", k.kappa1},
                 {"kappa2", k.kappa2},
                 {"kappa3", k.kappa3}};
}

inline njson to_json(const SuiteReport& r) {
    njson arr = njson::array();
    for (std::size_t i = 0; i < r.per_functional.size(); ++i) {
        njson row;
        row["functional"] = r.names[i];
        row["report"] = to_json(r.per_functional[i]);
        arr.push_back(std::move(row));
    }
    return njson{{"members", arr},
                 {"verdict", r.all_convergent ? "CONVERGENT" : "NOT_CONVERGENT"}};
}

// ---- ensemble files: JSON manifest + CSV path block ----
//
// Manifest: {"format": "scc-ensemble-v1", "m", "N", "R", "seed",
//            "generator_tag", "distributional_only", "csv": <basename>}.
// CSV: header "t0,...,tm", then R blocks of N+1 rows each: the limit path of
// replication r followed by its members n = 1..N, one path per row.

inline void write_paths_csv(std::ostream& out, const Ensemble& e) {
    for (int i = 0; i <= e.m; ++i) out << (i ? "," : "") << "t" << i;
    out << "\n";
    const auto write_row = [&](const GridPath& p) {
        const auto& v = p.values();
        for (std::size_t i = 0; i < v.size(); ++i)
            out << (i ? "," : "") << io::double_to_string(v[i]);
        out << "\n";
    };
    for (int r = 0; r < e.R; ++r) {
        write_row(e.limits[r]);
        for (int n = 0; n < e.N; ++n) write_row(e.members[r][n]);
    }
}

inline void write_ensemble(const Ensemble& e, const std::filesystem::path& manifest_path) {
    std::filesystem::path csv_path = manifest_path;
    csv_path.replace_extension(".csv");

    njson manifest;
    manifest["format"] = "scc-ensemble-v1";
    manifest["m"] = e.m;
    manifest["N"] = e.N;
    manifest["R"] = e.R;
    manifest["seed"] = e.seed;
    manifest["generator_tag"] = e.generator_tag;
    manifest["distributional_only"] = e.distributional_only;
    manifest["csv"] = csv_path.filename().string();
    io::write_text_file(manifest_path, manifest.dump(2) + "\n");

    std::ostringstream csv;
    write_paths_csv(csv, e);
    io::write_text_file(csv_path, csv.str());
}

inline std::vector<GridPath> read_paths_csv(const std::string& text, int expected_cols,
                                            const char* what) {
    std::vector<GridPath> paths;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line[0] == 't') continue;  // optional header row
        }
        std::vector<double> row;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) comma = line.size();
            row.push_back(io::parse_double(
                std::string_view(line).substr(start, comma - start), what));
            start = comma + 1;
        }
        if (expected_cols > 0 && static_cast<int>(row.size()) != expected_cols)
            throw validation_error(std::string(what) + ": row has " +
                                   std::to_string(row.size()) + " columns, expected " +
                                   std::to_string(expected_cols));
        paths.emplace_back(std::move(row));
    }
    if (paths.empty()) throw validation_error(std::string(what) + ": no paths found");
    return paths;
}

inline Ensemble read_ensemble(const std::filesystem::path& manifest_path) {
    const njson manifest =
        io::parse_json(io::read_text_file(manifest_path), "ensemble manifest");
    io::require_object(manifest,
                       {"format", "m", "N", "R", "seed", "generator_tag",
                        "distributional_only", "csv"},
                       {}, "ensemble manifest");
    if (manifest.at("format").get<std::string>() != "scc-ensemble-v1")
        throw validation_error("ensemble manifest: unsupported format");

    Ensemble e;
    e.m = manifest.at("m").get<int>();
    e.N = manifest.at("N").get<int>();
    e.R = manifest.at("R").get<int>();
    e.seed = manifest.at("seed").get<std::uint64_t>();
    e.generator_tag = manifest.at("generator_tag").get<std::string>();
    e.distributional_only = manifest.at("distributional_only").get<bool>();
    if (e.m < 1 || e.N < 1 || e.R < 1)
        throw validation_error("ensemble manifest: m, N, R must be positive");

    const auto csv_path =
        manifest_path.parent_path() / manifest.at("csv").get<std::string>();
    const auto paths =
        read_paths_csv(io::read_text_file(csv_path), e.m + 1, "ensemble csv");
    const std::size_t expected =
        static_cast<std::size_t>(e.R) * (static_cast<std::size_t>(e.N) + 1);
    if (paths.size() != expected)
        throw validation_error("ensemble csv: found " + std::to_string(paths.size()) +
                               " paths, expected R*(N+1) = " + std::to_string(expected));

    std::size_t idx = 0;
    for (int r = 0; r < e.R; ++r) {
        e.limits.push_back(paths[idx++]);
        e.members.emplace_back();
        for (int n = 0; n < e.N; ++n) e.members.back().push_back(paths[idx++]);
    }
    return e;
}

}  // namespace scc
