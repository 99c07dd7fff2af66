#include "capacity.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "simulator.hpp"

namespace rl {

Method default_method(Protocol p) {
    switch (p) {
        case Protocol::DT:
        case Protocol::DF:
            return Method::Analytic;
        case Protocol::SDF:
        case Protocol::CF:
            return Method::Bound;
    }
    return Method::Analytic;
}

bool method_valid(Protocol p, Method m) {
    if (m == Method::MonteCarlo) return true;
    switch (p) {
        case Protocol::DT:
            return m == Method::Analytic;
        case Protocol::DF:
            return true;  // exact and upper bound both exist
        case Protocol::SDF:
        case Protocol::CF:
            return m == Method::Bound;  // no exact closed form
    }
    return false;
}

OutageValue compute_outage(const Scenario& sc, const ProtocolParams& params, Method method,
                           const QuadratureSpec& spec, std::uint64_t n_samples,
                           std::uint64_t seed, int n_threads) {
    validate_scenario(sc);
    validate_protocol_params(params);
    if (!method_valid(params.protocol, method))
        throw DomainError("method not available for this protocol");

    if (method == Method::MonteCarlo) {
        const OutageEstimate est = estimate_outage(sc, params, n_samples, seed, n_threads);
        OutageValue out;
        out.value = est.p_hat;
        out.kind = OutageKind::MonteCarlo;
        out.quadrature_error = est.half_width;
        return out;
    }

    switch (params.protocol) {
        case Protocol::DT:
            return dt_outage(sc);
        case Protocol::DF: {
            if (method == Method::Bound) {
                if (params.rho != 0.0)
                    throw DomainError("the closed-form bound holds for rho = 0 only");
                return df_outage_upper(sc);
            }
            LaplaceEvaluator ev(sc, spec);
            return df_outage_exact(ev, params.rho);
        }
        case Protocol::SDF: {
            LaplaceEvaluator ev(sc, spec);
            return sdf_outage_lower(ev, params.epsilon);
        }
        case Protocol::CF: {
            LaplaceEvaluator ev(sc, spec);
            return cf_outage_upper(ev, params.nc, params.n_slabs);
        }
    }
    throw DomainError("unknown protocol");
}

std::vector<double> epsilon_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 19; ++i) g.push_back(0.05 * i);
    return g;
}

std::vector<double> nc_grid(const LinkGains& g) {
    const double center = g.l_sr / g.l_rd;
    std::vector<double> out;
    out.reserve(25);
    for (int k = 0; k < 25; ++k)
        out.push_back(center * std::pow(10.0, -3.0 + 6.0 * k / 24.0));
    return out;
}

double capacity_op_at_rate(const Scenario& sc, const CapacityQuery& q, double rate,
                           const QuadratureSpec& spec) {
    Scenario at = sc;
    at.rate = rate;

    switch (q.protocol) {
        case Protocol::DT: {
            if (q.method == Method::MonteCarlo) {
                ProtocolParams p;
                p.protocol = Protocol::DT;
                return estimate_outage(at, p, q.samples, q.seed, q.n_threads).p_hat;
            }
            return dt_outage(at).value;
        }
        case Protocol::DF: {
            ProtocolParams p;
            p.protocol = Protocol::DF;
            p.rho = q.rho;
            if (q.method == Method::MonteCarlo)
                return estimate_outage(at, p, q.samples, q.seed, q.n_threads).p_hat;
            if (q.method == Method::Bound) return df_outage_upper(at).value;
            LaplaceEvaluator ev(at, spec);
            return df_outage_exact(ev, q.rho).value;
        }
        case Protocol::SDF: {
            double best = 1.0;
            if (q.method == Method::MonteCarlo) {
                ProtocolParams p;
                p.protocol = Protocol::SDF;
                for (double eps : epsilon_grid()) {
                    p.epsilon = eps;
                    best = std::min(best,
                                    estimate_outage(at, p, q.samples, q.seed, q.n_threads).p_hat);
                }
                return best;
            }
            LaplaceEvaluator ev(at, spec);
            for (double eps : epsilon_grid()) best = std::min(best, sdf_outage_lower(ev, eps).value);
            return best;
        }
        case Protocol::CF: {
            const std::vector<double> grid = nc_grid(link_gains(at));
            if (q.method == Method::MonteCarlo) {
                double best = 1.0;
                for (const OutageEstimate& e :
                     cf_estimate_multi_nc(at, grid, q.samples, q.seed, q.n_threads))
                    best = std::min(best, e.p_hat);
                return best;
            }
            LaplaceEvaluator ev(at, spec);
            double best = 1.0;
            for (double nc : grid) best = std::min(best, cf_outage_upper(ev, nc, q.n_slabs).value);
            return best;
        }
    }
    throw DomainError("unknown protocol");
}

double outage_capacity(const Scenario& sc, const CapacityQuery& q, const QuadratureSpec& spec) {
    validate_scenario(sc);
    if (!(q.target_op > 0.0 && q.target_op < 1.0))
        throw DomainError("target outage must lie in (0, 1)");
    if (!(q.r_lo > 0.0 && q.r_lo < q.r_hi)) throw DomainError("need 0 < r_lo < r_hi");
    if (!method_valid(q.protocol, q.method))
        throw DomainError("method not available for this protocol");

    auto op = [&](double rate) { return capacity_op_at_rate(sc, q, rate, spec); };

    double lo = q.r_lo, hi = q.r_hi;
    double op_lo = op(lo), op_hi = op(hi);
    for (int i = 0; i < 3 && op_lo >= q.target_op; ++i) {
        lo /= 3.0;
        op_lo = op(lo);
    }
    for (int i = 0; i < 3 && op_hi <= q.target_op; ++i) {
        hi *= 3.0;
        op_hi = op(hi);
    }
    if (!(op_lo < q.target_op) || !(op_hi > q.target_op))
        throw BracketError("no rate bracket around the outage target after widening");

    while (hi - lo > 1e-3) {
        const double mid = 0.5 * (lo + hi);
        if (op(mid) <= q.target_op)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace rl
