#include "relaylab.h"

#include <algorithm>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "core/capacity.hpp"
#include "core/errors.hpp"
#include "core/laplace.hpp"
#include "core/simulator.hpp"
#include "core/validate.hpp"

using namespace rl;

struct rl_model {
    Scenario sc;
    QuadratureSpec spec;
    std::string last_error;
    std::unique_ptr<LaplaceEvaluator> ev;  // rebuilt lazily after setter calls

    LaplaceEvaluator& evaluator() {
        if (!ev) ev = std::make_unique<LaplaceEvaluator>(sc, spec);
        return *ev;
    }
};

namespace {

template <typename Fn>
int guarded(rl_model* m, Fn&& fn) {
    if (!m) return RL_ERR_CONFIG;
    m->last_error.clear();
    try {
        return fn();
    } catch (const std::exception& e) {
        m->last_error = e.what();
        return RL_ERR_CONFIG;
    } catch (...) {
        m->last_error = "unknown error";
        return RL_ERR_CONFIG;
    }
}

void put(double* dst, double v) {
    if (dst) *dst = v;
}

int outage_status(const OutageValue& v) {
    if (!v.converged || v.clamp_warning) return RL_ERR_TOLERANCE;
    return RL_OK;
}

Protocol to_protocol(int p) {
    switch (p) {
        case RL_PROTOCOL_DT: return Protocol::DT;
        case RL_PROTOCOL_DF: return Protocol::DF;
        case RL_PROTOCOL_SDF: return Protocol::SDF;
        case RL_PROTOCOL_CF: return Protocol::CF;
    }
    throw DomainError("unknown protocol id");
}

Method to_method(int m) {
    switch (m) {
        case RL_METHOD_ANALYTIC: return Method::Analytic;
        case RL_METHOD_BOUND: return Method::Bound;
        case RL_METHOD_MONTECARLO: return Method::MonteCarlo;
    }
    throw DomainError("unknown method id");
}

int to_kind(OutageKind k) {
    switch (k) {
        case OutageKind::Exact: return RL_KIND_EXACT;
        case OutageKind::UpperBound: return RL_KIND_UPPER_BOUND;
        case OutageKind::LowerBound: return RL_KIND_LOWER_BOUND;
        case OutageKind::MonteCarlo: return RL_KIND_MONTE_CARLO;
    }
    return RL_KIND_EXACT;
}

ProtocolParams to_params(const rl_protocol_params* p) {
    if (!p) throw DomainError("protocol params must not be NULL");
    ProtocolParams out;
    out.protocol = to_protocol(p->protocol);
    out.rho = p->rho;
    out.epsilon = p->epsilon;
    out.nc = p->nc;
    out.n_slabs = p->n_slabs;
    return out;
}

}  // namespace

extern "C" {

void rl_protocol_params_init(rl_protocol_params* p) {
    if (!p) return;
    p->protocol = RL_PROTOCOL_DF;
    p->rho = 0.0;
    p->epsilon = 0.5;
    p->nc = 1.0;
    p->n_slabs = 64;
}

rl_model* rl_model_create(void) { return new (std::nothrow) rl_model; }

void rl_model_destroy(rl_model* m) { delete m; }

int rl_model_set_geometry(rl_model* m, double D, double relay_x, double relay_y, double alpha) {
    return guarded(m, [&] {
        Scenario next = m->sc;
        next.D = D;
        next.relay = {relay_x, relay_y};
        next.alpha = alpha;
        validate_scenario(next);
        m->sc = next;
        m->ev.reset();
        return RL_OK;
    });
}

int rl_model_set_field(rl_model* m, double lambda, double rate) {
    return guarded(m, [&] {
        Scenario next = m->sc;
        next.lambda = lambda;
        next.rate = rate;
        validate_scenario(next);
        m->sc = next;
        m->ev.reset();
        return RL_OK;
    });
}

int rl_model_set_rel_tol(rl_model* m, double rel_tol) {
    return guarded(m, [&] {
        if (!(rel_tol > 0.0 && rel_tol < 1.0))
            throw DomainError("rel_tol must lie in (0, 1)");
        m->spec.rel_tol = rel_tol;
        m->ev.reset();
        return RL_OK;
    });
}

const char* rl_last_error(const rl_model* m) { return m ? m->last_error.c_str() : "NULL handle"; }

int rl_joint_laplace(rl_model* m, double w1, double w2, double* value, double* abs_error) {
    return guarded(m, [&] {
        const QuadResult r = m->evaluator().joint(w1, w2);
        put(value, r.value);
        put(abs_error, r.error);
        return r.converged ? RL_OK : RL_ERR_TOLERANCE;
    });
}

int rl_marginal_laplace(rl_model* m, double w, double* value) {
    return guarded(m, [&] {
        put(value, m->evaluator().marginal(w));
        return RL_OK;
    });
}

int rl_joint_laplace_dw1(rl_model* m, double w1, double w2, double* value, double* abs_error) {
    return guarded(m, [&] {
        const QuadResult r = m->evaluator().d_joint_dw1(w1, w2);
        put(value, r.value);
        put(abs_error, r.error);
        return r.converged ? RL_OK : RL_ERR_TOLERANCE;
    });
}

int rl_mc_joint_laplace(rl_model* m, double w1, double w2, uint64_t n_samples, uint64_t seed,
                        int n_threads, double* mean, double* half_width) {
    return guarded(m, [&] {
        const OutageEstimate est = mc_joint_laplace(m->sc, w1, w2, n_samples, seed, n_threads);
        put(mean, est.p_hat);
        put(half_width, est.half_width);
        return RL_OK;
    });
}

int rl_outage(rl_model* m, const rl_protocol_params* p, int method, uint64_t n_samples,
              uint64_t seed, int n_threads, double* value, double* error, int* kind) {
    return guarded(m, [&] {
        const OutageValue v = compute_outage(m->sc, to_params(p), to_method(method), m->spec,
                                             n_samples, seed, n_threads);
        put(value, v.value);
        put(error, v.quadrature_error);
        if (kind) *kind = to_kind(v.kind);
        return outage_status(v);
    });
}

int rl_cf_outage_mc_multi_nc(rl_model* m, const double* nc, int n_nc, uint64_t n_samples,
                             uint64_t seed, int n_threads, double* p_hat, double* half_width) {
    return guarded(m, [&] {
        if (!nc || n_nc <= 0) throw DomainError("need a non-empty nc list");
        const std::vector<double> list(nc, nc + n_nc);
        const auto est = cf_estimate_multi_nc(m->sc, list, n_samples, seed, n_threads);
        for (int i = 0; i < n_nc; ++i) {
            if (p_hat) p_hat[i] = est[i].p_hat;
            if (half_width) half_width[i] = est[i].half_width;
        }
        return RL_OK;
    });
}

int rl_spatial_contention(rl_model* m, double* kappa) {
    return guarded(m, [&] {
        put(kappa, df_spatial_contention(m->sc));
        return RL_OK;
    });
}

int rl_outage_capacity(rl_model* m, const rl_protocol_params* p, int method, double target_op,
                       uint64_t n_samples, uint64_t seed, int n_threads, double* rate) {
    return guarded(m, [&] {
        const ProtocolParams params = to_params(p);
        CapacityQuery q;
        q.protocol = params.protocol;
        q.method = to_method(method);
        q.target_op = target_op;
        q.rho = params.rho;
        q.n_slabs = params.n_slabs;
        q.samples = n_samples;
        q.seed = seed;
        q.n_threads = n_threads;
        put(rate, outage_capacity(m->sc, q, m->spec));
        return RL_OK;
    });
}

int rl_nc_grid(rl_model* m, double* out, int max_len, int* len) {
    return guarded(m, [&] {
        const std::vector<double> grid = nc_grid(link_gains(m->sc));
        const int n = std::min<int>(max_len, static_cast<int>(grid.size()));
        if (out)
            for (int i = 0; i < n; ++i) out[i] = grid[i];
        if (len) *len = n;
        return RL_OK;
    });
}

int rl_validate(rl_model* m, uint64_t n_samples, uint64_t seed, int n_threads,
                int flip_sign_hook, char* report, size_t report_len) {
    return guarded(m, [&] {
        const ValidationReport rep =
            run_validation(m->sc, m->spec, n_samples, seed, n_threads, flip_sign_hook != 0);
        if (report && report_len > 0) {
            const std::string text = rep.to_text();
            const size_t n = std::min(report_len - 1, text.size());
            std::memcpy(report, text.data(), n);
            report[n] = '\0';
        }
        return rep.all_pass() ? RL_OK : RL_ERR_VALIDATION;
    });
}

}  // extern "C"
