#pragma once

#include <complex>

#include "laplace.hpp"
#include "model.hpp"

namespace rl {

enum class OutageKind { Exact, UpperBound, LowerBound, MonteCarlo };

struct OutageValue {
    double value = 0.0;
    OutageKind kind = OutageKind::Exact;
    double quadrature_error = 0.0;
    bool converged = true;
    // Set when the pre-clamp value fell outside [0,1] by more than 1e-8.
    bool clamp_warning = false;
};

// Direct transmission: 1 - exp(-lambda * delta * D^2).
OutageValue dt_outage(const Scenario& sc);

// Largest rate whose DT outage stays at `target_op`; closed-form inversion.
double dt_capacity(const Scenario& sc, double target_op);

// P(relay decodes and destination decodes the cooperative transmission).
double df_joint_success(const LaplaceEvaluator& ev, std::complex<double> rho,
                        QuadResult* err = nullptr);

// P(relay fails to decode and the direct transmission succeeds); the event in
// which falling back to plain DT rescues the block.
double df_fallback_success(const LaplaceEvaluator& ev, std::complex<double> rho,
                           QuadResult* err = nullptr);

// Exact DF outage probability: 1 - joint success - fallback success.
OutageValue df_outage_exact(const LaplaceEvaluator& ev, std::complex<double> rho);

// Closed-form upper bound on the rho=0 DF outage.
OutageValue df_outage_upper(const Scenario& sc);

// Small-density slope bound: limit of the upper bound divided by lambda.
double df_spatial_contention(const Scenario& sc);

// Lower bound on the sequential (half-duplex) DF outage.
OutageValue sdf_outage_lower(const LaplaceEvaluator& ev, double epsilon);

// Upper bound on the CF outage, discretized with n_slabs levels; the bound is
// non-increasing in n_slabs.
OutageValue cf_outage_upper(const LaplaceEvaluator& ev, double nc, int n_slabs);

// Realization-level CF quantities. u, v are the normalized source signals at
// destination and relay; rho_n the spatial correlation of the two aggregate
// interference signals.
struct CfRates {
    double r1 = 0.0;       // decode-the-compression route
    double r2 = 0.0;       // joint-decoding route
    double nc_min = 0.0;   // smallest compression variance the relay-destination
                           // link can convey for this realization
};

CfRates cf_rates(std::complex<double> h_sd, std::complex<double> h_sr, std::complex<double> h_rd,
                 const LinkGains& g, double I_r, double I_d, std::complex<double> rho_n,
                 double nc);

// min(r1, r2) with the sign conventions above.
double cf_rate(const CfRates& r);

// Robustness property: the rate with the realized correlation is never more
// than one bit below the uncorrelated-noise rate.
bool cf_rate_gap_check(std::complex<double> h_sd, std::complex<double> h_sr,
                       std::complex<double> h_rd, const LinkGains& g, double I_r, double I_d,
                       std::complex<double> rho_n, double nc);

}  // namespace rl
