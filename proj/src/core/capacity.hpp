#pragma once

#include <cstdint>
#include <vector>

#include "analytic.hpp"
#include "model.hpp"

namespace rl {

enum class Method { Analytic, Bound, MonteCarlo };

// Default evaluation route per protocol: exact expressions where they exist,
// otherwise the protocol's bound.
Method default_method(Protocol p);
bool method_valid(Protocol p, Method m);

// One outage number for the given protocol and method. Analytic/bound routes
// propagate quadrature errors; the Monte Carlo route reports its 95% CI
// half-width in quadrature_error.
OutageValue compute_outage(const Scenario& sc, const ProtocolParams& params, Method method,
                           const QuadratureSpec& spec, std::uint64_t n_samples,
                           std::uint64_t seed, int n_threads = 0);

// Search grids for the half-duplex listening fraction and the compression
// noise variance. The nc grid is logarithmic around the natural scale
// l_sr / l_rd of the source-relay to relay-destination gain ratio.
std::vector<double> epsilon_grid();
std::vector<double> nc_grid(const LinkGains& g);

struct CapacityQuery {
    Protocol protocol = Protocol::DT;
    Method method = Method::Analytic;
    double target_op = 0.05;
    double r_lo = 0.125;  // initial rate bracket, widened up to 3 times per side
    double r_hi = 2.0;
    double rho = 0.0;     // DF correlation, held fixed during the search
    int n_slabs = 64;
    std::uint64_t samples = 100000;  // Monte Carlo route only
    std::uint64_t seed = 1;
    int n_threads = 0;
};

// Outage at a candidate rate, minimized over the free protocol parameter
// (epsilon for SDF, nc for CF). One evaluator per rate serves the whole
// parameter grid (the slab-sum transform arguments are nc-independent, so the
// cache absorbs the grid); Monte Carlo routes reuse one field set per rate via
// a fixed seed, which keeps the empirical outage monotone in rate.
double capacity_op_at_rate(const Scenario& sc, const CapacityQuery& q, double rate,
                           const QuadratureSpec& spec);

// Largest rate whose outage stays at or below target_op, found by bisection to
// 1e-3 bits. Throws BracketError if no bracket exists after widening.
double outage_capacity(const Scenario& sc, const CapacityQuery& q, const QuadratureSpec& spec);

}  // namespace rl
