// scc: strengthen weak convergence of coupled path ensembles into
// Holder-norm convergence, with Orlicz tail and moment-convergence
// diagnostics. One subcommand per pipeline stage; every stage reads and
// writes plain JSON/CSV artifacts so intermediate results stay inspectable.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scc/scc.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

void emit_error(const std::string& msg, int code) {
    scc::njson err;
    err["error"] = msg;
    err["code"] = code;
    std::cerr << err.dump() << "\n";
}

scc::YoungFunction parse_phi(const std::string& text) {
    return scc::young_from_json(scc::io::parse_json(text, "--phi"));
}

std::vector<double> parse_caps(const std::string& text) {
    std::vector<double> caps;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        caps.push_back(scc::io::parse_double(
            std::string_view(text).substr(start, comma - start), "--caps"));
        start = comma + 1;
    }
    return caps;
}

struct GeneratorArgs {
    std::string kind;
    int m = 256;
    int n_seq = 32;
    int reps = 50;
    std::uint64_t seed = 1;
};

void add_generator_flags(CLI::App* cmd, GeneratorArgs& args, bool required) {
    auto* kind = cmd->add_option("--kind", args.kind,
                                 "generator: SMOOTH_DECAY|ROUGH_DECAY|DONSKER|CONSTANT");
    if (required) kind->required();
    cmd->add_option("--m", args.m, "grid resolution (values at t_i = i/m)");
    cmd->add_option("--n-seq", args.n_seq, "sequence length N (members n = 1..N)");
    cmd->add_option("--reps", args.reps, "replication count R");
    cmd->add_option("--seed", args.seed, "RNG seed");
}

scc::Ensemble make_ensemble(const GeneratorArgs& args) {
    return scc::generate_ensemble(scc::parse_generator_kind(args.kind), args.m, args.n_seq,
                                  args.reps, args.seed);
}

void write_report(const std::string& out_path, const scc::njson& report) {
    scc::io::write_text_file(out_path, report.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"strengthened-convergence toolkit"};
    app.require_subcommand(1);

    // strengthen
    auto* strengthen = app.add_subcommand(
        "strengthen", "full pipeline: deviations, scaling fit, Holder norms, verdict");
    GeneratorArgs sgen;
    std::string s_ensemble, s_phi = R"({"family":"power","p":2.0})", s_out;
    scc::StrengthenOptions sopt;
    add_generator_flags(strengthen, sgen, false);
    strengthen->add_option("--ensemble", s_ensemble,
                           "ingest a saved ensemble manifest instead of generating");
    strengthen->add_option("--quantile", sopt.quantile, "fitting quantile q in (0,1]");
    strengthen->add_option("--phi", s_phi, "Young function config JSON");
    strengthen->add_option("--tail-fraction", sopt.tail_fraction,
                           "little-o tail fraction in (0,1)");
    strengthen->add_option("--decay-factor", sopt.decay_factor, "little-o decay factor");
    strengthen->add_option("--convergence-ratio", sopt.convergence_ratio,
                           "final/initial mean-norm ratio declaring convergence");
    strengthen->add_option("--landmarks", sopt.landmark_count,
                           "bounded-Lipschitz landmark count");
    strengthen->add_option("--abs-tol", sopt.abs_tol, "moment-convergence absolute tolerance");
    strengthen->add_option("--threads", sopt.threads, "parallelism cap (output-invariant)");
    strengthen->add_option("--out", s_out, "report path")->required();

    // simulate
    auto* simulate = app.add_subcommand("simulate", "generate a coupled ensemble file");
    GeneratorArgs mgen;
    std::string m_out;
    add_generator_flags(simulate, mgen, true);
    simulate->add_option("--out", m_out, "ensemble manifest path (.json; .csv alongside)")
        ->required();

    // fit-scaling
    auto* fit = app.add_subcommand("fit-scaling", "fit g from saved modulus envelopes");
    std::string f_envelopes, f_out;
    double f_quantile = 0.95;
    fit->add_option("--envelopes", f_envelopes, "JSON array of modulus profiles")->required();
    fit->add_option("--quantile", f_quantile, "fitting quantile q in (0,1]");
    fit->add_option("--out", f_out, "scaling table path")->required();

    // holder-report
    auto* holder = app.add_subcommand("holder-report",
                                      "per-n Holder-norm convergence curve for an ensemble");
    std::string h_ensemble, h_g, h_out;
    double h_ratio = 0.1;
    int h_threads = 1;
    holder->add_option("--ensemble", h_ensemble, "ensemble manifest path")->required();
    holder->add_option("--g", h_g, "scaling table path")->required();
    holder->add_option("--convergence-ratio", h_ratio, "convergence threshold");
    holder->add_option("--threads", h_threads, "parallelism cap (output-invariant)");
    holder->add_option("--out", h_out, "report path")->required();

    // orlicz-report
    auto* orlicz = app.add_subcommand("orlicz-report", "Orlicz tail report for theta samples");
    std::string o_theta, o_phi = R"({"family":"power","p":2.0})", o_out;
    orlicz->add_option("--theta", o_theta, "JSON array of theta samples")->required();
    orlicz->add_option("--phi", o_phi, "Young function config JSON");
    orlicz->add_option("--out", o_out, "report path")->required();

    // bernstein-check
    auto* bern = app.add_subcommand(
        "bernstein-check", "uniform integrability and moment convergence for a functional");
    std::string b_ensemble, b_functional, b_caps, b_out;
    std::optional<double> b_reference;
    bern->add_option("--ensemble", b_ensemble, "ensemble manifest path")->required();
    bern->add_option("--functional", b_functional, "functional config JSON")->required();
    bern->add_option("--caps", b_caps, "comma-separated truncation caps")->required();
    bern->add_option("--reference", b_reference, "external reference for the limit moment");
    bern->add_option("--out", b_out, "report path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error(e.what(), kExitValidation);
        return kExitValidation;
    }

    try {
        if (*strengthen) {
            if (s_ensemble.empty() && sgen.kind.empty())
                throw scc::validation_error("strengthen: pass --kind or --ensemble");
            if (!s_ensemble.empty() && !sgen.kind.empty())
                throw scc::validation_error("strengthen: --kind and --ensemble are exclusive");
            sopt.phi = parse_phi(s_phi);
            const scc::Ensemble e = s_ensemble.empty() ? make_ensemble(sgen)
                                                       : scc::read_ensemble(s_ensemble);
            write_report(s_out, scc::run_strengthen(e, sopt));
        } else if (*simulate) {
            scc::write_ensemble(make_ensemble(mgen), m_out);
        } else if (*fit) {
            const scc::njson j =
                scc::io::parse_json(scc::io::read_text_file(f_envelopes), "--envelopes");
            if (!j.is_array() || j.empty())
                throw scc::validation_error("--envelopes: expected a nonempty JSON array");
            std::vector<scc::ModulusProfile> envelopes;
            for (const auto& item : j) envelopes.push_back(scc::profile_from_json(item));
            write_report(f_out, scc::to_json(scc::fit_scaling(envelopes, f_quantile)));
        } else if (*holder) {
            const scc::Ensemble e = scc::read_ensemble(h_ensemble);
            const scc::ScalingTable g = scc::scaling_from_json(
                scc::io::parse_json(scc::io::read_text_file(h_g), "--g"));
            write_report(h_out,
                         scc::to_json(scc::norm_convergence_curve(e, g, h_ratio, h_threads)));
        } else if (*orlicz) {
            const scc::njson j =
                scc::io::parse_json(scc::io::read_text_file(o_theta), "--theta");
            const scc::njson& arr = j.is_object() && j.contains("samples") ? j.at("samples") : j;
            const std::vector<double> theta = scc::io::number_array(arr, "--theta");
            write_report(o_out, scc::to_json(scc::theta_orlicz_report(theta, parse_phi(o_phi))));
        } else if (*bern) {
            const scc::Ensemble e = scc::read_ensemble(b_ensemble);
            const scc::Functional v = scc::functional_from_json(
                scc::io::parse_json(b_functional, "--functional"));
            const std::vector<double> caps = parse_caps(b_caps);
            const scc::UICurve ui = scc::uniform_integrability_curve(e, v, caps);
            const scc::MomentReport moment = scc::moment_convergence_check(
                e, v, b_reference ? std::optional<double>(*b_reference) : std::nullopt);
            scc::njson kappas = scc::njson::array();
            for (double cap : caps) {
                scc::njson row;
                row["cap"] = cap;
                row["at_n"] = e.N;
                row["decomposition"] =
                    scc::to_json(scc::kappa_decomposition(e, v, e.N, cap));
                kappas.push_back(std::move(row));
            }
            scc::njson report;
            report["tool"] = "scc";
            report["report"] = "bernstein-check";
            report["functional"] = scc::to_json(v);
            report["uniform_integrability"] = scc::to_json(ui);
            report["moment_convergence"] = scc::to_json(moment);
            report["kappa"] = std::move(kappas);
            report["verdict"] = (ui.decaying && moment.convergent) ? "CONVERGENT"
                                                                   : "NOT_CONVERGENT";
            write_report(b_out, report);
        }
    } catch (const scc::validation_error& e) {
        emit_error(e.what(), kExitValidation);
        return kExitValidation;
    } catch (const scc::numeric_error& e) {
        emit_error(e.what(), kExitNumeric);
        return kExitNumeric;
    } catch (const std::exception& e) {
        emit_error(e.what(), kExitValidation);
        return kExitValidation;
    }
    return 0;
}
