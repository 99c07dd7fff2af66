#pragma once

#include <functional>
#include <vector>

#include "geometry.hpp"

namespace rl {

struct QuadratureSpec {
    double rel_tol = 1e-7;
    double abs_tol = 1e-12;
    int max_subdivisions = 1 << 20;  // panel budget per 1-D integration
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;     // estimated absolute error
    bool converged = true;  // false if the panel budget ran out first

    QuadResult& operator+=(const QuadResult& o) {
        value += o.value;
        error += o.error;
        converged = converged && o.converged;
        return *this;
    }
};

// Adaptive Gauss-Kronrod 7/15 over [a, b]. `breakpoints` become initial panel
// boundaries (values outside (a, b) are ignored). The final sum runs over
// panels sorted by left endpoint, so the result does not depend on the
// refinement schedule.
QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        const std::vector<double>& breakpoints, const QuadratureSpec& spec);

// Integral of f over the whole plane. Polar coordinates about the midpoint of
// `centers`, radial substitution t = u/(1+u); radial panel boundaries at the
// center distances and angular boundaries at the center azimuths keep the
// integrand peaks aligned with panel edges. Assumes f >= 0 with decay faster
// than ||x||^-3 (all integrands here decay at least that fast for alpha >= 3,
// and the dominant ones like ||x||^(-2*alpha) for any alpha > 2).
QuadResult integrate_plane(const std::function<double(Vec2)>& f, const std::vector<Vec2>& centers,
                           const QuadratureSpec& spec);

// E[g(W)] for W ~ Exp(1): substitution t = -log(1-s) turns the weighted
// integral into the plain integral of g(t(s)) over s in [0, 1).
QuadResult expect_exponential(const std::function<double(double)>& g, const QuadratureSpec& spec);

// E[g(W1, W2)] for independent unit-mean exponentials; tensor product of the
// 1-D rule.
QuadResult expect_exponential_pair(const std::function<double(double, double)>& g,
                                   const QuadratureSpec& spec);

}  // namespace rl
