// Release acceptance suite. Each numbered criterion prints one [PASS]/[FAIL]
// line as it completes and the process exits nonzero if any criterion fails.
// Sample counts and seeds are pinned, so a given build passes or fails
// deterministically. argv[1] is the path of the CLI binary; the determinism
// criterion shells out to it.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "core/analytic.hpp"
#include "core/capacity.hpp"
#include "core/laplace.hpp"
#include "core/model.hpp"
#include "core/simulator.hpp"

using namespace rl;

namespace {

std::string g_cli;
int g_failures = 0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

void run(int id, const char* name, const std::function<Outcome()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome oc;
    try {
        oc = fn();
    } catch (const std::exception& e) {
        oc = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2d. %s: %s (%.0fs)\n", oc.pass ? "PASS" : "FAIL", id, name,
                oc.detail.c_str(), secs);
    std::fflush(stdout);
    if (!oc.pass) ++g_failures;
}

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult shell(const std::string& cmd) {
    const std::string out_path = "/tmp/acceptance_stdout.txt";
    const int raw = std::system((cmd + " >" + out_path + " 2>/tmp/acceptance_stderr.txt").c_str());
    RunResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(out_path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli = argv[1];
    std::printf("relay outage acceptance suite -- 12 criteria, pinned seeds\n");
    std::printf("(the sampling-heavy criteria run for minutes on one core)\n\n");
    std::fflush(stdout);

    run(1, "joint transform vs simulation", [] {
        Scenario sc;
        sc.lambda = 1e-3;
        const std::vector<std::pair<double, double>> omegas{
            {0.2, 0.2}, {0.5, 0.5}, {1.0, 0.5}, {2.0, 1.0}, {5.0, 2.0}};
        const auto ests = mc_joint_laplace_multi(sc, omegas, 1000000, 101);
        LaplaceEvaluator ev(sc, {});
        bool ok = true;
        double max_z = 0.0, min_assoc = 1e300;
        for (std::size_t i = 0; i < omegas.size(); ++i) {
            const double analytic = ev.joint(omegas[i].first, omegas[i].second).value;
            const double z = std::abs(ests[i].p_hat - analytic) / (ests[i].half_width / 1.96);
            const double assoc =
                analytic - ev.marginal(omegas[i].first) * ev.marginal(omegas[i].second);
            max_z = std::max(max_z, z);
            min_assoc = std::min(min_assoc, assoc);
            ok = ok && z <= 3.0 && assoc >= 0.0;
        }
        return Outcome{ok, fmt("5 omega pairs at 1e6 samples: max |z| = %.2f (limit 3); "
                               "joint - marginal product >= %.1e at every pair",
                               max_z, min_assoc)};
    });

    run(2, "exact relay outage vs simulation", [] {
        // Three relay positions crossed with two correlation levels; the two
        // densities alternate down the list so both appear at every position.
        struct Cfg {
            Vec2 r;
            double rho, lambda;
        };
        const Cfg cfgs[6] = {{{2, 0}, 0.0, 1e-4}, {{2, 0}, 0.5, 1e-3}, {{5, 0}, 0.0, 1e-4},
                             {{5, 0}, 0.5, 1e-3}, {{5, 3}, 0.0, 1e-4}, {{5, 3}, 0.5, 1e-3}};
        bool ok = true;
        double worst = 0.0;
        for (const Cfg& c : cfgs) {
            Scenario sc;
            sc.relay = c.r;
            sc.lambda = c.lambda;
            sc.rate = 0.5;
            LaplaceEvaluator ev(sc, {});
            const double analytic = df_outage_exact(ev, c.rho).value;
            ProtocolParams p;
            p.protocol = Protocol::DF;
            p.rho = c.rho;
            const auto est = estimate_outage(sc, p, 1000000, 7);
            const double ratio = std::abs(analytic - est.p_hat) / (3.0 * est.half_width);
            worst = std::max(worst, ratio);
            ok = ok && ratio <= 1.0;
        }
        return Outcome{ok, fmt("6 configurations at 1e6 samples each: max deviation %.2f of "
                               "the 3x-half-width allowance",
                               worst)};
    });

    run(3, "equal-gain branch continuity", [] {
        Scenario sc;
        sc.lambda = 1e-3;
        sc.relay = {5.0, 5.0 * std::sqrt(3.0)};  // relay-destination distance exactly D
        LaplaceEvaluator ev(sc, {});
        const double at = df_joint_success(ev, 0.0);
        double worst = 0.0;
        for (double f : {1.0 + 1e-4, 1.0 - 1e-4}) {
            Scenario sp = sc;
            const Vec2 d = sc.destination();
            sp.relay = {d.x + (sc.relay.x - d.x) * f, d.y + (sc.relay.y - d.y) * f};
            LaplaceEvaluator evp(sp, {});
            worst = std::max(worst, std::abs(at - df_joint_success(evp, 0.0)) / at);
        }
        return Outcome{worst <= 1e-3,
                       fmt("equal-gain value vs +/-1e-4 radial relay shifts: max relative "
                           "difference %.1e (limit 1e-3)",
                           worst)};
    });

    run(4, "upper bound direction and tightness", [] {
        bool ok = true;
        int n = 0, tight_cells = 0;
        double max_tight_gap = 0.0;
        const auto visit = [&](double radius, double lambda) {
            Scenario sc;
            sc.relay = {radius, 0.0};
            sc.lambda = lambda;
            sc.rate = 0.5;
            LaplaceEvaluator ev(sc, {});
            const double exact = df_outage_exact(ev, 0.0).value;
            const double upper = df_outage_upper(sc).value;
            ok = ok && upper + 1e-10 >= exact;
            // The tightness claim covers the small-outage regime with the relay
            // well inside the near half; far positions only test the ordering.
            if (exact <= 0.05 && radius <= 3.0) {
                const double gap = (upper - exact) / exact;
                max_tight_gap = std::max(max_tight_gap, gap);
                ok = ok && gap <= 0.10;
                ++tight_cells;
            }
            ++n;
        };
        for (double radius : {0.5, 1.0, 1.5, 2.0})
            for (double lambda : {1e-5, 1e-4, 3e-4}) visit(radius, lambda);
        for (double radius : {4.0, 5.0, 7.0, 9.0})
            for (double lambda : {1e-4, 1e-3}) visit(radius, lambda);
        return Outcome{ok && n == 20 && tight_cells == 12,
                       fmt("bound >= exact at all %d configs; %d small-outage cells, max "
                           "relative gap %.1f%% (limit 10%%)",
                           n, tight_cells, 100.0 * max_tight_gap)};
    });

    run(5, "small-density slope of the exact outage", [] {
        Scenario sc;  // r = (5,0), D = 10, alpha = 4, R = 0.5
        const double kappa = df_spatial_contention(sc);
        const double dlt = delta(sc.rate, sc.alpha);
        const bool closed_ok = std::abs(kappa - 45.0 * dlt) <= 1e-12 * 45.0 * dlt;

        Scenario thin = sc;
        thin.lambda = 1e-7;
        QuadratureSpec tight;
        tight.rel_tol = 1e-9;
        LaplaceEvaluator ev(thin, tight);
        const double slope = df_outage_exact(ev, 0.0).value / thin.lambda;
        const bool below = slope <= kappa * (1.0 + 1e-6);
        // The contention closed form is the small-density slope of the *upper
        // bound*; the exact outage rises more slowly because the bound's union
        // step discards the direct-fallback overlap. The 5% proximity clause
        // stays pinned so the size of that gap is visible in every run.
        const bool within = std::abs(slope - kappa) <= 0.05 * kappa;
        return Outcome{closed_ok && below && within,
                       fmt("contention = 45*delta %s; slope at 1e-7 = %.2f vs %.2f: below "
                           "%s, within 5%% %s (ratio %.4f)",
                           closed_ok ? "ok" : "BROKEN", slope, kappa, below ? "ok" : "NO",
                           within ? "ok" : "NO", slope / kappa)};
    });

    run(6, "correlation grid argmin", [] {
        bool ok = true;
        for (double lambda : {1e-4, 1e-3})
            for (Vec2 r : {Vec2{2.0, 0.0}, Vec2{5.0, 0.0}}) {
                Scenario sc;
                sc.lambda = lambda;
                sc.relay = r;
                sc.rate = 1.0;
                LaplaceEvaluator ev(sc, {});
                int argmin = -1;
                double best = 2.0;
                for (int i = 0; i <= 9; ++i) {
                    const double v = df_outage_exact(ev, 0.1 * i).value;
                    if (v < best) {
                        best = v;
                        argmin = i;
                    }
                }
                ok = ok && argmin == 0;
            }
        return Outcome{ok, "uncorrelated signalling minimizes the exact outage over the "
                           "0..0.9 grid in all 4 density/position configs"};
    });

    run(7, "half-duplex lower bound direction", [] {
        bool ok = true;
        double min_slack = 1e300;
        for (Vec2 r : {Vec2{2, 0}, Vec2{5, 0}, Vec2{8, 0}, Vec2{5, 3}})
            for (double eps : {0.3, 0.5, 0.7}) {
                Scenario sc;
                sc.lambda = 1e-3;
                sc.relay = r;
                sc.rate = 0.5;
                LaplaceEvaluator ev(sc, {});
                const double lower = sdf_outage_lower(ev, eps).value;
                ProtocolParams p;
                p.protocol = Protocol::SDF;
                p.epsilon = eps;
                const auto est = estimate_outage(sc, p, 100000, 11);
                const double sigma = est.half_width / 1.96;
                min_slack = std::min(min_slack, (est.p_hat + 3.0 * sigma - lower) / sigma);
                ok = ok && lower <= est.p_hat + 3.0 * sigma;
            }
        return Outcome{ok, fmt("12 position/listening-fraction configs at 1e5 samples: "
                               "min slack %.1f sigma (limit 0)",
                               min_slack)};
    });

    run(8, "one-bit rate robustness", [] {
        Scenario sc;
        sc.lambda = 1e-3;
        const auto scan = cf_gap_scan(sc, 1.0, 1000000, 3);
        const bool mc_ok = scan.violations == 0 && scan.checked >= 900000;

        const double pi = 3.14159265358979323846;
        const std::vector<double> mags = {1e-3, 0.5, 1.0, 10.0, 100.0};
        const std::vector<double> phases = {0.0, pi / 4.0, pi / 2.0, pi, 1.5 * pi};
        const std::vector<std::complex<double>> rhos = {{0.0, 0.0},
                                                        std::polar(0.3, pi / 3.0),
                                                        {0.9, 0.0},
                                                        std::polar(0.99, pi),
                                                        std::polar(1.0, 2.0)};
        const std::vector<double> ncs = {1e-6, 1e-3, 1.0, 1e3, 1e6};
        const LinkGains unit{1.0, 1.0, 1.0};
        long grid_fail = 0, cells = 0;
        for (double mu : mags)
            for (double mv : mags)
                for (double ph : phases)
                    for (const auto& rho_n : rhos)
                        for (double nc : ncs) {
                            if (!cf_rate_gap_check(std::polar(mu, 0.3), std::polar(mv, 0.3 + ph),
                                                   {1.0, 0.0}, unit, 1.0, 1.0, rho_n, nc))
                                ++grid_fail;
                            ++cells;
                        }
        return Outcome{mc_ok && grid_fail == 0 && cells == 3125,
                       fmt("%llu sampled realizations: %llu violations, min gap %.4f; "
                           "deterministic 3125-cell grid: %ld violations",
                           (unsigned long long)scan.checked, (unsigned long long)scan.violations,
                           scan.min_gap, grid_fail)};
    });

    run(9, "compression bound direction and slab refinement", [] {
        // nc sits near the source-relay gain scale in most configs so that
        // discretizing the relay-quantization term actually moves the bound;
        // far above that scale the slab sum collapses to its first term.
        struct Cfg {
            Vec2 r;
            double lambda, rate, nc;
        };
        const double lsr9 = std::pow(9.0, -4.0);
        const Cfg cfgs[6] = {{{9, 0}, 1e-4, 0.5, 0.3 * lsr9}, {{9, 0}, 1e-4, 0.5, lsr9},
                             {{9, 0}, 1e-4, 0.5, 3.0 * lsr9}, {{2, 0}, 1e-3, 0.5, 1.0},
                             {{5, 0}, 1e-4, 1.0, 1.6e-3},     {{5, 3}, 1e-3, 0.5, 1e-2}};
        bool ok = true;
        double min_margin = 1e300, min_drop = 1e300;
        for (const Cfg& c : cfgs) {
            Scenario sc;
            sc.relay = c.r;
            sc.lambda = c.lambda;
            sc.rate = c.rate;
            LaplaceEvaluator ev(sc, {});
            const double b1 = cf_outage_upper(ev, c.nc, 1).value;
            const double b8 = cf_outage_upper(ev, c.nc, 8).value;
            const double b64 = cf_outage_upper(ev, c.nc, 64).value;
            ok = ok && b1 + 1e-12 >= b8 && b8 + 1e-12 >= b64;
            min_drop = std::min(min_drop, b1 - b64);
            ProtocolParams p;
            p.protocol = Protocol::CF;
            p.nc = c.nc;
            const auto est = estimate_outage(sc, p, 50000, 13);
            ok = ok && b64 >= est.p_hat - 3.0 * est.half_width / 1.96;
            min_margin = std::min(min_margin, (b64 - est.p_hat) / (est.half_width / 1.96));
        }
        return Outcome{ok, fmt("6 configs: bound clears the 5e4-sample estimate by >= %.0f "
                               "sigma; 1->64 slab refinement lowers it by >= %.1e everywhere",
                               min_margin, min_drop)};
    });

    run(10, "relay placement crossover", [] {
        // High-rate regime: compression relaying should win far from the
        // source, decode-and-forward near it, with the best compression noise
        // chosen per position from the standard search grid.
        bool ok = true;
        double sep_near = 0.0, sep_far = 0.0;
        for (Vec2 r : {Vec2{2.0, 0.0}, Vec2{9.0, 0.0}}) {
            Scenario sc;
            sc.lambda = 0.5e-4;
            sc.relay = r;
            sc.rate = 4.0;
            LaplaceEvaluator ev(sc, {});
            const double df = df_outage_exact(ev, 0.0).value;
            const auto ests = cf_estimate_multi_nc(sc, nc_grid(link_gains(sc)), 100000, 17);
            std::size_t best = 0;
            for (std::size_t i = 1; i < ests.size(); ++i)
                if (ests[i].p_hat < ests[best].p_hat) best = i;
            const double cf_lo = ests[best].p_hat - ests[best].half_width;
            const double cf_hi = ests[best].p_hat + ests[best].half_width;
            if (r.x > 5.0) {
                ok = ok && cf_hi < df;
                sep_far = df - cf_hi;
            } else {
                ok = ok && cf_lo > df;
                sep_near = cf_lo - df;
            }
        }
        return Outcome{ok, fmt("decode-and-forward wins at (2,0) by %.3f and compression "
                               "wins at (9,0) by %.3f beyond the 95%% intervals",
                               sep_near, sep_far)};
    });

    run(11, "bitwise determinism across parallelism", [] {
        if (g_cli.empty()) return Outcome{false, "path of the CLI binary was not supplied"};
        spit("/tmp/acceptance_sweep.cfg",
             "protocol = df\nsweep_var = lambda\nsweep_values = 1e-4,1e-3\n");
        const std::string sweep_args =
            " sweep --config /tmp/acceptance_sweep.cfg --method montecarlo"
            " --samples 20000 --seed 7";
        const RunResult s1 = shell(g_cli + sweep_args + " --threads 1");
        const RunResult s3 = shell(g_cli + sweep_args + " --threads 3");
        const std::string validate_args = " validate --samples 20000 --seed 42";
        const RunResult v1 = shell("RELAYLAB_THREADS=1 " + g_cli + validate_args);
        const RunResult v3 = shell("RELAYLAB_THREADS=3 " + g_cli + validate_args);
        const bool ok = s1.exit_code == 0 && s3.exit_code == 0 && !s1.out.empty() &&
                        s1.out == s3.out && v1.exit_code == 0 && v3.exit_code == 0 &&
                        !v1.out.empty() && v1.out == v3.out;
        return Outcome{ok, fmt("sweep output (%zu bytes) %s across 1 vs 3 threads; validate "
                               "report (%zu bytes) %s",
                               s1.out.size(), s1.out == s3.out ? "identical" : "DIFFERS",
                               v1.out.size(), v1.out == v3.out ? "identical" : "DIFFERS")};
    });

    run(12, "transform mass identity and derivative", [] {
        bool ok = true;
        double worst_mass = 0.0;
        QuadratureSpec tight;
        tight.rel_tol = 1e-9;
        for (double alpha : {3.0, 4.0})
            for (double w : {0.1, 1.0, 10.0}) {
                Scenario sc;
                sc.alpha = alpha;
                sc.lambda = 0.1;
                LaplaceEvaluator ev(sc, tight);
                const double numeric = -std::log(ev.joint_general(w, 0.0).value) / sc.lambda;
                const double closed = constant_C(alpha) * std::pow(w, 2.0 / alpha);
                const double rel = std::abs(numeric - closed) / closed;
                worst_mass = std::max(worst_mass, rel);
                ok = ok && rel <= 1e-6;
            }
        double worst_fd = 0.0;
        Scenario sc;
        sc.lambda = 1e-3;
        LaplaceEvaluator ev(sc, {});
        for (auto [w1, w2] : {std::pair{0.5, 0.5}, {1.5, 0.3}, {3.0, 2.0}}) {
            const double d = ev.d_joint_dw1(w1, w2).value;
            const double h = 1e-4 * w1;
            const double fd = (ev.joint(w1 + h, w2).value - ev.joint(w1 - h, w2).value) / (2.0 * h);
            const double rel = std::abs(d - fd) / std::abs(fd);
            worst_fd = std::max(worst_fd, rel);
            ok = ok && d <= 0.0 && rel <= 1e-4;
        }
        return Outcome{ok, fmt("mass integral vs closed form: max rel %.1e (limit 1e-6); "
                               "derivative vs central difference: max rel %.1e (limit 1e-4)",
                               worst_mass, worst_fd)};
    });

    std::printf("\n%d/12 criteria passed\n", 12 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
