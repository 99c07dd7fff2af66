#include "analytic.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace rl {

namespace {

constexpr double kClampSlack = 1e-8;

double log2_1p(double u) { return std::log2(1.0 + u); }

OutageValue clamp_outage(double v, OutageKind kind, double err, bool converged) {
    OutageValue out;
    out.kind = kind;
    out.quadrature_error = err;
    out.converged = converged;
    out.clamp_warning = v < -kClampSlack || v > 1.0 + kClampSlack;
    out.value = std::clamp(v, 0.0, 1.0);
    return out;
}

// ||r-d|| with the equidistant case ||r-d|| = D nudged off the removable
// singularity of the closed-form bounds.
double relay_dest_distance_for_bounds(const Scenario& sc) {
    double rd = dist(sc.relay, sc.destination());
    if (std::abs(rd - sc.D) < 1e-9 * sc.D) rd = sc.D * (1.0 + 1e-6);
    return rd;
}

// Two-eigenvalue success probability P(Z > T*I_d, relay decodes) shared by the
// exact DF expression and the half-duplex lower bound: Z is the combined
// source+relay power with eigenvalues mu1 <= mu2, and w2 is the relay-decoding
// transform argument.
double eigen_success(const LaplaceEvaluator& ev, double T, double mu1, double mu2, double w2,
                     QuadResult* err) {
    if (err) *err = {0.0, 0.0, true};
    if ((mu2 - mu1) / mu2 < kDegenerateGap) {
        const double w1 = T / mu1;
        const QuadResult L = ev.joint(w1, w2);
        const QuadResult dL = ev.d_joint_dw1(w1, w2);
        if (err) {
            err->error = L.error + w1 * dL.error;
            err->converged = L.converged && dL.converged;
        }
        return L.value - w1 * dL.value;
    }
    const QuadResult La = ev.joint(T / mu2, w2);
    const QuadResult Lb = ev.joint(T / mu1, w2);
    if (err) {
        err->error = (mu2 * La.error + mu1 * Lb.error) / (mu2 - mu1);
        err->converged = La.converged && Lb.converged;
    }
    return (mu2 * La.value - mu1 * Lb.value) / (mu2 - mu1);
}

}  // namespace

OutageValue dt_outage(const Scenario& sc) {
    validate_scenario(sc);
    const double v = 1.0 - std::exp(-sc.lambda * delta(sc.rate, sc.alpha) * sc.D * sc.D);
    return clamp_outage(v, OutageKind::Exact, 0.0, true);
}

double dt_capacity(const Scenario& sc, double target_op) {
    validate_scenario(sc);
    if (!(target_op > 0.0 && target_op < 1.0)) throw DomainError("target_op must lie in (0,1)");
    if (sc.lambda == 0.0) throw DomainError("dt_capacity undefined for lambda = 0");
    const double C = constant_C(sc.alpha);
    const double x = -std::log1p(-target_op) / (sc.lambda * C * sc.D * sc.D);
    return std::log2(1.0 + std::pow(x, 0.5 * sc.alpha));
}

double df_joint_success(const LaplaceEvaluator& ev, std::complex<double> rho, QuadResult* err) {
    const MuCoefficients mu = mu_coefficients(ev.gains(), rho);
    if (err) *err = {0.0, 0.0, true};
    if (mu.mu3 == 0.0) return 0.0;  // |rho| = 1: the relay can never decode
    const double T = threshold_T(ev.scenario().rate);
    return eigen_success(ev, T, mu.mu1, mu.mu2, T / mu.mu3, err);
}

double df_fallback_success(const LaplaceEvaluator& ev, std::complex<double> rho, QuadResult* err) {
    const MuCoefficients mu = mu_coefficients(ev.gains(), rho);
    const double T = threshold_T(ev.scenario().rate);
    const double w1 = T / ev.gains().l_sd;
    const double m = ev.marginal(w1);
    if (err) *err = {0.0, 0.0, true};
    if (mu.mu3 == 0.0) return m;  // joint term vanishes: relay always fails
    const QuadResult J = ev.joint(w1, T / mu.mu3);
    if (err) *err = J;
    return std::max(m - J.value, 0.0);
}

OutageValue df_outage_exact(const LaplaceEvaluator& ev, std::complex<double> rho) {
    QuadResult e1, e2;
    const double ps = df_joint_success(ev, rho, &e1);
    const double pf = df_fallback_success(ev, rho, &e2);
    return clamp_outage(1.0 - ps - pf, OutageKind::Exact, e1.error + e2.error,
                        e1.converged && e2.converged);
}

OutageValue df_outage_upper(const Scenario& sc) {
    validate_scenario(sc);
    const double dlt = delta(sc.rate, sc.alpha);
    const double rd = relay_dest_distance_for_bounds(sc);
    const double rn2 = norm2(sc.relay);
    const double Da = std::pow(sc.D, sc.alpha);
    const double rda = std::pow(rd, sc.alpha);
    const double lam = sc.lambda;
    const double dt_term = 1.0 - std::exp(-lam * dlt * sc.D * sc.D);
    const double ratio =
        (Da * std::exp(-lam * dlt * rd * rd) - rda * std::exp(-lam * dlt * sc.D * sc.D)) /
        (Da - rda);
    const double relay_term = (1.0 - std::exp(-lam * dlt * rn2)) + (1.0 - ratio);
    return clamp_outage(std::min(dt_term, relay_term), OutageKind::UpperBound, 0.0, true);
}

double df_spatial_contention(const Scenario& sc) {
    validate_scenario(sc);
    const double dlt = delta(sc.rate, sc.alpha);
    const double rd = relay_dest_distance_for_bounds(sc);
    const double rn2 = norm2(sc.relay);
    const double Da = std::pow(sc.D, sc.alpha);
    const double rda = std::pow(rd, sc.alpha);
    const double frac = rd * rd * sc.D * sc.D *
                        (std::pow(sc.D, sc.alpha - 2.0) - std::pow(rd, sc.alpha - 2.0)) /
                        (Da - rda);
    return dlt * std::min(sc.D * sc.D, rn2 + frac);
}

OutageValue sdf_outage_lower(const LaplaceEvaluator& ev, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
    const Scenario& sc = ev.scenario();
    const LinkGains& g = ev.gains();
    const double T = threshold_T(sc.rate);
    const double T_eps = threshold_T(sc.rate / epsilon);
    const double w2 = T_eps / g.l_sr;
    const double shrunk = (1.0 - epsilon) * g.l_rd;
    const double mu1 = std::min(g.l_sd, shrunk);
    const double mu2 = std::max(g.l_sd, shrunk);

    QuadResult e1;
    const double p1 = eigen_success(ev, T, mu1, mu2, w2, &e1);
    const double w1 = T / g.l_sd;
    const QuadResult J = ev.joint(w1, w2);
    const double p2 = std::max(ev.marginal(w1) - J.value, 0.0);
    return clamp_outage(1.0 - p1 - p2, OutageKind::LowerBound, e1.error + J.error,
                        e1.converged && J.converged);
}

OutageValue cf_outage_upper(const LaplaceEvaluator& ev, double nc, int n_slabs) {
    if (!(nc > 0.0)) throw DomainError("nc must be positive");
    if (n_slabs < 1) throw DomainError("n_slabs must be at least 1");
    const Scenario& sc = ev.scenario();
    const LinkGains& g = ev.gains();
    // Empty field: every transform is 1, the slab sum telescopes away and both
    // expectation factors are 1, so the bound is exactly zero.
    if (sc.lambda == 0.0) return {0.0, OutageKind::UpperBound, 0.0, true, false};
    const double T = threshold_T(sc.rate + 1.0);
    const double N = static_cast<double>(n_slabs);

    // Failure of the relay-assisted decoding, discretized over n_slabs levels
    // of the source-relay fading.
    double err = 0.0;
    bool converged = true;
    double pa = 1.0 - std::exp(-T * nc / g.l_sr) * ev.marginal(T / g.l_sr);
    for (int n = 0; n < n_slabs; ++n) {
        const double w1 = (N - n) * T / (N * g.l_sd);
        const double s0 = std::exp(-n * nc * T / (N * g.l_sr));
        const double s1 = std::exp(-(n + 1) * nc * T / (N * g.l_sr));
        const QuadResult J0 = ev.joint(w1, n * T / (N * g.l_sr));
        const QuadResult J1 = ev.joint(w1, (n + 1) * T / (N * g.l_sr));
        pa -= s0 * J0.value - s1 * J1.value;
        err += s0 * J0.error + s1 * J1.error;
        converged = converged && J0.converged && J1.converged;
    }

    // Compression not conveyable to the destination; the two fading
    // expectations run against the closed-form marginal transform with a
    // relaxed tolerance (they sit inside a bound, not an exact value).
    QuadratureSpec espec = ev.quad_spec();
    espec.rel_tol = std::max(espec.rel_tol, 1e-5);
    const double c1 = (1.0 + T) * g.l_sr / (T * nc * g.l_rd);
    const double c2 = (1.0 + T) * g.l_sd / (T * nc * g.l_rd);
    const QuadResult E1 =
        expect_exponential([&](double h) { return ev.marginal(c1 * h); }, espec);
    const QuadResult E2 =
        expect_exponential([&](double h) { return ev.marginal(c2 * h); }, espec);
    const double pb = 1.0 - E1.value * E2.value;
    err += E2.value * E1.error + E1.value * E2.error;
    converged = converged && E1.converged && E2.converged;

    return clamp_outage(pa + pb, OutageKind::UpperBound, err, converged);
}

CfRates cf_rates(std::complex<double> h_sd, std::complex<double> h_sr, std::complex<double> h_rd,
                 const LinkGains& g, double I_r, double I_d, std::complex<double> rho_n,
                 double nc) {
    if (!(I_r > 0.0 && I_d > 0.0)) throw DomainError("cf_rates requires positive interference");
    if (!(nc > 0.0)) throw DomainError("nc must be positive");
    const std::complex<double> u = h_sd * std::sqrt(g.l_sd / I_d);
    const std::complex<double> v = h_sr * std::sqrt(g.l_sr / I_r);
    const double u2 = std::norm(u);
    const double v2 = std::norm(v);
    const double r2 = std::norm(rho_n);
    const double cross = std::real(rho_n * u * std::conj(v));

    CfRates out;
    out.r1 = log2_1p((std::norm(h_sd) * g.l_sd + std::norm(h_rd) * g.l_rd) / I_d) -
             log2_1p((I_r / nc) * (1.0 - r2));
    out.r2 = log2_1p(u2 + (r2 * u2 + v2 - 2.0 * cross) / (1.0 + nc / I_r - r2));
    out.nc_min = (I_r * I_d / (std::norm(h_rd) * g.l_rd)) * (u2 + v2 + 1.0 - 2.0 * cross);
    return out;
}

double cf_rate(const CfRates& r) { return std::min(r.r1, r.r2); }

bool cf_rate_gap_check(std::complex<double> h_sd, std::complex<double> h_sr,
                       std::complex<double> h_rd, const LinkGains& g, double I_r, double I_d,
                       std::complex<double> rho_n, double nc) {
    const CfRates with = cf_rates(h_sd, h_sr, h_rd, g, I_r, I_d, rho_n, nc);
    const CfRates without = cf_rates(h_sd, h_sr, h_rd, g, I_r, I_d, {0.0, 0.0}, nc);
    return cf_rate(with) >= cf_rate(without) - 1.0 - 1e-9;
}

}  // namespace rl
