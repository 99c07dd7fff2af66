/*
 * relaylab — outage probabilities for a relay channel inside a Poisson field
 * of interferers.
 *
 * The model: source at the origin, destination at (D, 0), a relay at a
 * configurable position, Rayleigh block fading, simplified path loss
 * ||x||^(-alpha), and interference from a homogeneous Poisson point process of
 * density lambda (interference-limited, no background noise). Supported
 * schemes: direct transmission (DT), full-duplex decode-and-forward (DF),
 * sequential half-duplex DF (SDF), and compress-and-forward (CF).
 *
 * Handles are not thread-safe for concurrent mutation; evaluation calls on one
 * handle may run concurrently (the transform cache is internally locked).
 */
#ifndef RELAYLAB_H
#define RELAYLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes returned by every call. */
enum {
    RL_OK = 0,
    RL_ERR_VALIDATION = 1, /* a requested self-check suite reported failures */
    RL_ERR_CONFIG = 2,     /* invalid handle, argument, or parameter value */
    RL_ERR_TOLERANCE = 3   /* numeric tolerance not met: the quadrature did not
                              converge, or a probability needed clamping by more
                              than the accepted slack. Outputs are still written
                              and carry the best available values. */
};

enum { RL_PROTOCOL_DT = 0, RL_PROTOCOL_DF = 1, RL_PROTOCOL_SDF = 2, RL_PROTOCOL_CF = 3 };

enum { RL_METHOD_ANALYTIC = 0, RL_METHOD_BOUND = 1, RL_METHOD_MONTECARLO = 2 };

/* Direction of a returned outage value relative to the true probability. */
enum {
    RL_KIND_EXACT = 0,
    RL_KIND_UPPER_BOUND = 1,
    RL_KIND_LOWER_BOUND = 2,
    RL_KIND_MONTE_CARLO = 3
};

typedef struct rl_model rl_model;

typedef struct rl_protocol_params {
    int protocol;   /* RL_PROTOCOL_* */
    double rho;     /* DF source-relay symbol correlation magnitude, in [0, 1] */
    double epsilon; /* SDF listening fraction, in (0, 1) */
    double nc;      /* CF compression noise variance, > 0 */
    int n_slabs;    /* CF bound discretization level, >= 1 */
} rl_protocol_params;

/* Fills defaults: DF, rho 0, epsilon 0.5, nc 1, n_slabs 64. */
void rl_protocol_params_init(rl_protocol_params* p);

/* A fresh model with the default scenario: D 10, relay (5, 0), alpha 4,
 * lambda 1e-4, rate 0.5, quadrature rel_tol 1e-7. NULL on allocation failure. */
rl_model* rl_model_create(void);
void rl_model_destroy(rl_model* m);

/* Source sits at the origin, destination at (D, 0); alpha must exceed 2 and the
 * relay must not coincide with either endpoint. */
int rl_model_set_geometry(rl_model* m, double D, double relay_x, double relay_y, double alpha);

/* Interferer density (per unit area, >= 0) and attempted rate (bits/use, > 0). */
int rl_model_set_field(rl_model* m, double lambda, double rate);

/* Relative tolerance of every quadrature; default 1e-7. */
int rl_model_set_rel_tol(rl_model* m, double rel_tol);

/* Message for the most recent failure on this handle; "" if the last call
 * succeeded. Owned by the handle, valid until the next call on it. */
const char* rl_last_error(const rl_model* m);

/* Joint Laplace transform E[exp(-w1*I_d - w2*I_r)] of the interference powers
 * at the destination and the relay; w1, w2 >= 0. */
int rl_joint_laplace(rl_model* m, double w1, double w2, double* value, double* abs_error);

/* Single-receiver transform E[exp(-w*I)] (identical for both receivers). */
int rl_marginal_laplace(rl_model* m, double w, double* value);

/* Partial derivative of the joint transform in its first argument (always
 * <= 0). */
int rl_joint_laplace_dw1(rl_model* m, double w1, double w2, double* value, double* abs_error);

/* Empirical transform over n_samples simulated fields; half_width is the 95%
 * confidence half-width. Deterministic for a fixed seed at any thread count;
 * n_threads <= 0 picks the default (RELAYLAB_THREADS env var, else hardware). */
int rl_mc_joint_laplace(rl_model* m, double w1, double w2, uint64_t n_samples, uint64_t seed,
                        int n_threads, double* mean, double* half_width);

/* One outage probability. Methods per protocol: DT analytic; DF analytic
 * (exact) or bound (upper, rho = 0 only); SDF bound (lower); CF bound (upper);
 * every protocol supports montecarlo. n_samples/seed/n_threads apply to the
 * Monte Carlo method only. `error` receives the propagated quadrature error
 * (analytic routes) or the 95% confidence half-width (Monte Carlo); `kind`
 * receives RL_KIND_*. Any output pointer may be NULL. */
int rl_outage(rl_model* m, const rl_protocol_params* p, int method, uint64_t n_samples,
              uint64_t seed, int n_threads, double* value, double* error, int* kind);

/* CF Monte Carlo outage for n_nc compression variances over one shared set of
 * realizations (common random numbers). p_hat and half_width must hold n_nc
 * doubles. */
int rl_cf_outage_mc_multi_nc(rl_model* m, const double* nc, int n_nc, uint64_t n_samples,
                             uint64_t seed, int n_threads, double* p_hat, double* half_width);

/* Upper bound on the low-density outage slope: outage <= kappa * lambda as
 * lambda -> 0 (DF with rho = 0). */
int rl_spatial_contention(rl_model* m, double* kappa);

/* Largest rate whose outage stays at or below target_op, by bisection to 1e-3
 * bits; SDF maximizes over a listening-fraction grid, CF over a compression
 * variance grid. The model's own rate field is ignored. */
int rl_outage_capacity(rl_model* m, const rl_protocol_params* p, int method, double target_op,
                       uint64_t n_samples, uint64_t seed, int n_threads, double* rate);

/* Suggested CF compression-variance search grid for the current geometry
 * (25 logarithmic points). Writes min(25, max_len) values; *len receives the
 * count. */
int rl_nc_grid(rl_model* m, double* out, int max_len, int* len);

/* Cross-validation suite: analytic expressions vs. Monte Carlo, bound
 * directions, the rate-gap scan, and the transform sign arbiter. Writes a
 * pass/fail report (NUL-terminated, truncated to report_len) and returns
 * RL_OK if every check passed, RL_ERR_VALIDATION otherwise.
 * flip_sign_hook != 0 is a negative control that must make the sign arbiter
 * fail. */
int rl_validate(rl_model* m, uint64_t n_samples, uint64_t seed, int n_threads,
                int flip_sign_hook, char* report, size_t report_len);

#ifdef __cplusplus
}
#endif

#endif /* RELAYLAB_H */
