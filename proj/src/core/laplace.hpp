#pragma once

#include <functional>
#include <mutex>
#include <string>
#include <unordered_map>

#include "model.hpp"
#include "quadrature.hpp"

namespace rl {

// Laplace transforms of the interference powers at the destination (first
// argument) and the relay (second argument). Planar-quadrature results are
// memoized on arguments rounded to 12 significant digits; the slab-discretized
// bounds revisit neighboring argument pairs and the cache makes them cheap.
class LaplaceEvaluator {
public:
    LaplaceEvaluator(const Scenario& sc, const QuadratureSpec& spec);

    const Scenario& scenario() const { return sc_; }
    const QuadratureSpec& quad_spec() const { return spec_; }
    const LinkGains& gains() const { return gains_; }
    double constant() const { return C_; }

    // exp(-lambda * C * omega^(2/alpha)); identical for both receivers.
    double marginal(double omega) const;

    // Cross term accounting for the positive dependence between the two
    // interference powers: integral of w1*w2 / ((w1+||x-d||^a)(w2+||x-r||^a)).
    QuadResult cross_f(double w1, double w2) const;

    // Joint transform E[exp(-w1*I_d - w2*I_r)]. The cross term enters the
    // exponent with a minus sign: exp(-lambda*(C*(w1^(2/a)+w2^(2/a)) - f)),
    // which keeps the joint transform above the product of the marginals
    // (common interferer field correlates the two powers positively).
    QuadResult joint(double w1, double w2) const;

    // Same expectation evaluated from the single-integral product form; works
    // for any spherically symmetric path loss and serves as an independent
    // cross-check of joint().  `pl` maps distance to gain.
    QuadResult joint_general(double w1, double w2) const;
    QuadResult joint_general(double w1, double w2,
                             const std::function<double(double)>& pl) const;

    // d/dw1 of the joint transform (equals -E[I_d * exp(...)], so always <= 0).
    QuadResult d_joint_dw1(double w1, double w2) const;

    // Negative-control hook: flips the cross-term sign so that consistency
    // checks against the Monte Carlo transform must fail. Never set in
    // production paths.
    void set_sign_flip_hook(bool flip) { flip_sign_ = flip; }
    bool sign_flip_hook() const { return flip_sign_; }

private:
    QuadResult cross_f_dw1(double w1, double w2) const;
    QuadResult cached(const std::string& key, const std::function<QuadResult()>& compute) const;

    Scenario sc_;
    QuadratureSpec spec_;
    LinkGains gains_;
    double C_;
    bool flip_sign_ = false;
    mutable std::mutex mutex_;
    mutable std::unordered_map<std::string, QuadResult> cache_;
};

}  // namespace rl
