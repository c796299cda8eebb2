// Minimal library walkthrough: generate a coupled ensemble, factorize its
// uniform deviations, fit the scaling function, and watch the Holder-norm
// curve contract. Build target: scc_demo.

#include <cstdio>

#include "scc/scc.hpp"

int main() {
    const auto e = scc::generate_ensemble(scc::GeneratorKind::RoughDecay,
                                          /*m=*/256, /*N=*/16, /*R=*/20, /*seed=*/42);

    const auto zeta = scc::uniform_deviations(e);
    const auto dom = scc::dominate_sequence(zeta, 0.95);
    std::printf("deviations: eps_1 = %.4f, eps_%d = %.4f\n", dom.eps.front(), e.N,
                dom.eps.back());

    std::vector<scc::ModulusProfile> envelopes;
    for (int r = 0; r < e.R; ++r) {
        std::vector<scc::ModulusProfile> profiles;
        for (int n = 0; n < e.N; ++n)
            profiles.push_back(
                scc::modulus_profile(scc::subtract(e.members[r][n], e.limits[r])));
        envelopes.push_back(scc::envelope(profiles));
    }
    const auto g = scc::fit_scaling(envelopes, 0.95);

    double theta_max = 0.0;
    for (const auto& env : envelopes)
        theta_max = std::max(theta_max, scc::domination_coefficient(env, g));
    std::printf("domination: worst theta = %.4f\n", theta_max);

    const auto curve = scc::norm_convergence_curve(e, g);
    std::printf("Holder norms: mean at n=1 is %.4f, at n=%d is %.4f (%s)\n",
                curve.per_n.front().mean_norm, e.N, curve.per_n.back().mean_norm,
                curve.convergent ? "CONVERGENT" : "NOT_CONVERGENT");

    const auto report = scc::run_strengthen(e, scc::StrengthenOptions{});
    std::printf("pipeline verdict: %s\n",
                report.at("verdict").get<std::string>().c_str());
    return 0;
}
