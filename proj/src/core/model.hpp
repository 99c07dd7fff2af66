#pragma once

#include <complex>

#include "geometry.hpp"

namespace rl {

// Geometry and traffic parameters of one relay-channel deployment.
// Source sits at the origin, destination at (D, 0).
struct Scenario {
    double D = 10.0;          // source-destination distance
    Vec2 relay{5.0, 0.0};     // relay position
    double alpha = 4.0;       // path-loss exponent, must be > 2
    double lambda = 1e-4;     // interferer density (nodes per unit area)
    double rate = 0.5;        // attempted rate R in bits per channel use

    Vec2 source() const { return {0.0, 0.0}; }
    Vec2 destination() const { return {D, 0.0}; }
};

// Throws DomainError if any field violates its constraint.
void validate_scenario(const Scenario& sc);

enum class Protocol { DT, DF, SDF, CF };

struct ProtocolParams {
    Protocol protocol = Protocol::DF;
    double rho = 0.0;      // |symbol correlation| for DF, in [0, 1]
    double epsilon = 0.5;  // SDF listening fraction, in (0, 1)
    double nc = 1.0;       // CF compression noise variance, > 0
    int n_slabs = 64;      // discretization level of the CF bound, >= 1
};

void validate_protocol_params(const ProtocolParams& p);

struct LinkGains {
    double l_sd = 0.0;
    double l_sr = 0.0;
    double l_rd = 0.0;
};

// Effective gains of the combined source+relay signal at the destination.
// mu1 <= mu2 are the eigenvalues of the received-power quadratic form,
// mu3 the effective source-relay gain.
struct MuCoefficients {
    double mu1 = 0.0;
    double mu2 = 0.0;
    double mu3 = 0.0;
};

// Simplified path loss ||x-y||^(-alpha). Distances below 1e-9 are clamped to
// 1e-9 so that sampled points arbitrarily close to a receiver cannot overflow;
// analytic formulas never hit the clamp.
double path_loss(Vec2 x, Vec2 y, double alpha);

// Path loss from a precomputed squared distance; hot path for the simulator.
double path_loss_from_dist2(double dist2, double alpha);

LinkGains link_gains(const Scenario& sc);

// 2*pi*Gamma(2/alpha)*Gamma(1-2/alpha)/alpha. Throws DomainError for alpha <= 2.
double constant_C(double alpha);

// 2^rate - 1.
double threshold_T(double rate);

// constant_C(alpha) * (2^rate - 1)^(2/alpha).
double delta(double rate, double alpha);

// Phase of rho is irrelevant to every outage quantity; only |rho| is used.
MuCoefficients mu_coefficients(const LinkGains& g, std::complex<double> rho);

// P(mu1*W1 + mu2*W2 > u) for independent unit-mean exponentials W1, W2.
// Switches to the Gamma-distribution limit when the relative eigenvalue gap
// drops below 1e-6 (the two-exponential form cancels catastrophically there).
double ccdf_Z(double u, double mu1, double mu2);

inline constexpr double kDegenerateGap = 1e-6;

}  // namespace rl
