#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "analytic.hpp"
#include "model.hpp"
#include "rng.hpp"

namespace rl {

struct FieldRealization {
    std::vector<Vec2> points;
    std::vector<std::complex<double>> marks_r;  // fading toward the relay
    std::vector<std::complex<double>> marks_d;  // fading toward the destination
    std::complex<double> h_sr, h_sd, h_rd;
    double window_radius = 0.0;
};

struct InterferenceState {
    double I_r = 0.0;
    double I_d = 0.0;
    std::complex<double> rho_n{0.0, 0.0};
    bool interference_free = true;  // empty field: SIR is infinite, rho_n undefined
};

struct OutageEstimate {
    double p_hat = 0.0;
    double half_width = 0.0;  // 95% normal-approximation confidence half-width
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
};

// Truncation radius for the sampling window, measured from the midpoint of the
// source-destination segment. Chosen so the expected interference from beyond
// the window is at most `rel_truncation_error` times the expected in-window
// interference (near field cut at the one-expected-point radius 1/sqrt(pi*la)).
// Throws DomainError for alpha <= 2.01, where the tail stops being controllable.
double choose_window(const Scenario& sc, double rel_truncation_error = 1e-3);

// One full draw of the marked field plus the three direct-link fadings.
// Draw order (fixed, part of the determinism contract): h_sd, h_sr, h_rd, the
// Poisson count K, then per point: position, mark toward relay, mark toward
// destination.
FieldRealization sample_field(const Scenario& sc, double window_radius, ChunkRng& rng);

InterferenceState interference(const FieldRealization& field, const Scenario& sc);

// Per-realization outage indicators. Empty-field realizations never see outage
// (every success condition is of the form signal >= T * interference).
bool df_outage_indicator(const InterferenceState& st, const FieldRealization& field,
                         const Scenario& sc, std::complex<double> rho);
bool sdf_outage_indicator(const InterferenceState& st, const FieldRealization& field,
                          const Scenario& sc, double epsilon);
bool cf_outage_indicator(const InterferenceState& st, const FieldRealization& field,
                         const Scenario& sc, double nc);

// Chunked Monte Carlo estimate of the outage probability. Samples are processed
// in 4096-sample chunks, each with an RNG stream derived from (seed, chunk
// index); partial results combine in chunk order, so the estimate is
// bit-identical for any thread count. n_threads <= 0 picks a default
// (RELAYLAB_THREADS env var, else hardware concurrency capped at 8).
OutageEstimate estimate_outage(const Scenario& sc, const ProtocolParams& params,
                               std::uint64_t n_samples, std::uint64_t seed, int n_threads = 0);

// Empirical joint transform E[exp(-w1*I_d - w2*I_r)] at several argument pairs
// over a shared set of sampled fields. half_width is the 95% CI of the mean.
std::vector<OutageEstimate> mc_joint_laplace_multi(const Scenario& sc,
                                                   const std::vector<std::pair<double, double>>& omegas,
                                                   std::uint64_t n_samples, std::uint64_t seed,
                                                   int n_threads = 0);

OutageEstimate mc_joint_laplace(const Scenario& sc, double w1, double w2,
                                std::uint64_t n_samples, std::uint64_t seed, int n_threads = 0);

// CF outage estimated for every entry of nc_list over one shared set of
// realizations (common random numbers keep the argmin over nc stable).
std::vector<OutageEstimate> cf_estimate_multi_nc(const Scenario& sc,
                                                 const std::vector<double>& nc_list,
                                                 std::uint64_t n_samples, std::uint64_t seed,
                                                 int n_threads = 0);

// Empirical probabilities of the two DF success events, estimated separately:
// (relay decodes && cooperative transmission lands) and (relay fails && the
// direct link still lands).
struct DfEventProbs {
    OutageEstimate joint_success;
    OutageEstimate fallback_success;
};
DfEventProbs df_event_probs_mc(const Scenario& sc, std::complex<double> rho,
                               std::uint64_t n_samples, std::uint64_t seed, int n_threads = 0);

// Scan realizations for violations of the one-bit CF rate-gap property.
struct GapScanResult {
    std::uint64_t checked = 0;     // realizations with both interferences positive
    std::uint64_t violations = 0;
    double min_gap = 0.0;          // min over realizations of rate(rho_n) - rate(0)
};
GapScanResult cf_gap_scan(const Scenario& sc, double nc, std::uint64_t n_samples,
                          std::uint64_t seed, int n_threads = 0);

int default_thread_count();

}  // namespace rl
