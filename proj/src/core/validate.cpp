#include "validate.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>

#include "analytic.hpp"
#include "capacity.hpp"
#include "laplace.hpp"
#include "rng.hpp"
#include "simulator.hpp"

namespace rl {

namespace {

std::string fmt(const char* format, ...) {
    char buf[256];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

double zscore(double analytic, const OutageEstimate& est) {
    const double se = est.half_width / 1.96;
    return std::abs(analytic - est.p_hat) / std::max(se, 1e-15);
}

// Distinct master seeds for the individual Monte Carlo runs; each run then
// derives its own per-chunk streams from its master.
std::uint64_t sub_seed(std::uint64_t seed, int k) { return chunk_seed(seed, 7000 + k); }

}  // namespace

bool ValidationReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string ValidationReport::to_text() const {
    std::string out;
    int passed = 0;
    for (const auto& c : checks) {
        out += c.pass ? "[PASS] " : "[FAIL] ";
        out += c.name;
        if (!c.detail.empty()) {
            out += "  ";
            out += c.detail;
        }
        out += '\n';
        passed += c.pass;
    }
    out += fmt("overall: %s (%d/%zu passed)\n", all_pass() ? "PASS" : "FAIL", passed,
               checks.size());
    return out;
}

ValidationReport run_validation(const Scenario& sc, const QuadratureSpec& spec,
                                std::uint64_t n_samples, std::uint64_t seed, int n_threads,
                                bool flip_sign_hook) {
    validate_scenario(sc);
    ValidationReport report;
    auto add = [&](const std::string& name, bool pass, std::string detail) {
        report.checks.push_back({name, pass, std::move(detail)});
    };

    LaplaceEvaluator ev(sc, spec);
    const double nc_ref = ev.gains().l_sr / ev.gains().l_rd;

    {
        const double analytic = dt_outage(sc).value;
        ProtocolParams p;
        p.protocol = Protocol::DT;
        const OutageEstimate est = estimate_outage(sc, p, n_samples, sub_seed(seed, 0), n_threads);
        const double z = zscore(analytic, est);
        add("dt_closed_form_vs_mc", z <= 3.0, fmt("z=%.3f", z));
    }

    {
        const DfEventProbs probs =
            df_event_probs_mc(sc, 0.0, n_samples, sub_seed(seed, 1), n_threads);
        const double joint = df_joint_success(ev, 0.0);
        const double fallback = df_fallback_success(ev, 0.0);
        const double zj = zscore(joint, probs.joint_success);
        const double zf = zscore(fallback, probs.fallback_success);
        add("df_joint_success_vs_mc", zj <= 3.0, fmt("z=%.3f", zj));
        add("df_fallback_success_vs_mc", zf <= 3.0, fmt("z=%.3f", zf));
    }

    {
        ProtocolParams p;
        p.protocol = Protocol::DF;
        p.rho = 0.5;
        const double analytic = df_outage_exact(ev, p.rho).value;
        const OutageEstimate est = estimate_outage(sc, p, n_samples, sub_seed(seed, 2), n_threads);
        const double z = zscore(analytic, est);
        add("df_exact_vs_mc", z <= 3.0, fmt("z=%.3f", z));
    }

    {
        const double exact = df_outage_exact(ev, 0.0).value;
        const double upper = df_outage_upper(sc).value;
        add("df_upper_bound_ordering", upper >= exact - 1e-9,
            fmt("gap=%.3e", upper - exact));
    }

    {
        const double eps = 0.5;
        const double lower = sdf_outage_lower(ev, eps).value;
        ProtocolParams p;
        p.protocol = Protocol::SDF;
        p.epsilon = eps;
        const OutageEstimate est = estimate_outage(sc, p, n_samples, sub_seed(seed, 3), n_threads);
        const double se = std::max(est.half_width / 1.96, 1e-15);
        const double z = (lower - est.p_hat) / se;  // > 0 means bound above the estimate
        add("sdf_lower_bound_direction", z <= 3.0, fmt("z=%.3f", z));
    }

    {
        const double upper = cf_outage_upper(ev, nc_ref, 64).value;
        ProtocolParams p;
        p.protocol = Protocol::CF;
        p.nc = nc_ref;
        const OutageEstimate est = estimate_outage(sc, p, n_samples, sub_seed(seed, 4), n_threads);
        const double se = std::max(est.half_width / 1.96, 1e-15);
        const double z = (est.p_hat - upper) / se;  // > 0 means estimate above the bound
        add("cf_upper_bound_direction", z <= 3.0, fmt("z=%.3f", z));
    }

    {
        const GapScanResult scan =
            cf_gap_scan(sc, nc_ref, n_samples, sub_seed(seed, 5), n_threads);
        add("cf_rate_gap_scan", scan.violations == 0,
            fmt("violations=%llu min_gap=%.4f checked=%llu",
                static_cast<unsigned long long>(scan.violations), scan.min_gap,
                static_cast<unsigned long long>(scan.checked)));
    }

    {
        // The arbiter runs at a fixed reference density: dense enough that a
        // flipped cross-term sign moves the transform by many standard errors.
        Scenario ref;
        ref.D = 10.0;
        ref.relay = {5.0, 0.0};
        ref.alpha = 4.0;
        ref.lambda = 1e-3;
        ref.rate = sc.rate;
        LaplaceEvaluator arbiter(ref, spec);
        arbiter.set_sign_flip_hook(flip_sign_hook);
        const std::vector<std::pair<double, double>> pairs{{0.5, 0.5}, {1.0, 0.2}, {0.1, 1.0}};
        const auto mc =
            mc_joint_laplace_multi(ref, pairs, n_samples, sub_seed(seed, 6), n_threads);
        double z_max = 0.0;
        bool assoc_ok = true;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const double joint = arbiter.joint(pairs[i].first, pairs[i].second).value;
            z_max = std::max(z_max, zscore(joint, mc[i]));
            const double prod =
                arbiter.marginal(pairs[i].first) * arbiter.marginal(pairs[i].second);
            assoc_ok = assoc_ok && joint >= prod - 1e-12;
        }
        add("laplace_sign_arbiter", z_max <= 3.0 && assoc_ok,
            fmt("z_max=%.3f association=%s", z_max, assoc_ok ? "ok" : "violated"));
    }

    {
        Scenario empty = sc;
        empty.lambda = 0.0;
        LaplaceEvaluator ev0(empty, spec);
        ProtocolParams p;
        p.protocol = Protocol::DT;
        const double mc_op = estimate_outage(empty, p, 1000, sub_seed(seed, 7), n_threads).p_hat;
        const double mc_tr =
            mc_joint_laplace(empty, 0.3, 0.7, 1000, sub_seed(seed, 8), n_threads).p_hat;
        const bool ok = dt_outage(empty).value == 0.0 && df_outage_exact(ev0, 0.0).value == 0.0 &&
                        sdf_outage_lower(ev0, 0.5).value == 0.0 &&
                        cf_outage_upper(ev0, nc_ref, 8).value == 0.0 && mc_op == 0.0 &&
                        mc_tr == 1.0;
        add("lambda_zero_degeneracy", ok,
            fmt("mc_op=%.1e mc_transform=%.12f", mc_op, mc_tr));
    }

    return report;
}

}  // namespace rl
