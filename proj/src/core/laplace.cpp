#include "laplace.hpp"

#include <cmath>
#include <cstdio>

#include "errors.hpp"

namespace rl {

namespace {

std::string round_key(char tag, double w1, double w2) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%c%.11e|%.11e", tag, w1, w2);
    return buf;
}

void require_nonneg(double w1, double w2) {
    if (!(w1 >= 0.0) || !(w2 >= 0.0))
        throw DomainError("transform arguments must be non-negative");
}

}  // namespace

LaplaceEvaluator::LaplaceEvaluator(const Scenario& sc, const QuadratureSpec& spec)
    : sc_(sc), spec_(spec) {
    validate_scenario(sc_);
    gains_ = link_gains(sc_);
    C_ = constant_C(sc_.alpha);
}

double LaplaceEvaluator::marginal(double omega) const {
    if (!(omega >= 0.0)) throw DomainError("transform arguments must be non-negative");
    if (omega == 0.0 || sc_.lambda == 0.0) return 1.0;
    return std::exp(-sc_.lambda * C_ * std::pow(omega, 2.0 / sc_.alpha));
}

QuadResult LaplaceEvaluator::cached(const std::string& key,
                                    const std::function<QuadResult()>& compute) const {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    QuadResult r = compute();
    std::lock_guard<std::mutex> lock(mutex_);
    cache_[key] = r;  // last write wins; recomputed values agree to tolerance
    return r;
}

QuadResult LaplaceEvaluator::cross_f(double w1, double w2) const {
    require_nonneg(w1, w2);
    if (w1 == 0.0 || w2 == 0.0) return {0.0, 0.0, true};
    return cached(round_key('f', w1, w2), [&]() {
        const Vec2 d = sc_.destination();
        const Vec2 r = sc_.relay;
        const double alpha = sc_.alpha;
        auto integrand = [&](Vec2 x) {
            const double A = std::pow(norm2(x - d), 0.5 * alpha);
            const double B = std::pow(norm2(x - r), 0.5 * alpha);
            return w1 * w2 / ((w1 + A) * (w2 + B));
        };
        return integrate_plane(integrand, {d, r}, spec_);
    });
}

QuadResult LaplaceEvaluator::joint(double w1, double w2) const {
    require_nonneg(w1, w2);
    if (sc_.lambda == 0.0) return {1.0, 0.0, true};
    if (w1 == 0.0 && w2 == 0.0) return {1.0, 0.0, true};
    if (w1 == 0.0) return {marginal(w2), 0.0, true};
    if (w2 == 0.0) return {marginal(w1), 0.0, true};
    const QuadResult f = cross_f(w1, w2);
    const double inv_a = 2.0 / sc_.alpha;
    const double sum_marg = C_ * (std::pow(w1, inv_a) + std::pow(w2, inv_a));
    const double fsigned = flip_sign_ ? -f.value : f.value;
    const double L = std::exp(-sc_.lambda * (sum_marg - fsigned));
    return {L, sc_.lambda * L * f.error, f.converged};
}

QuadResult LaplaceEvaluator::joint_general(double w1, double w2) const {
    const double alpha = sc_.alpha;
    return joint_general(w1, w2,
                         [alpha](double dist) { return std::pow(dist, -alpha); });
}

QuadResult LaplaceEvaluator::joint_general(double w1, double w2,
                                           const std::function<double(double)>& pl) const {
    require_nonneg(w1, w2);
    if (sc_.lambda == 0.0 || (w1 == 0.0 && w2 == 0.0)) return {1.0, 0.0, true};
    const Vec2 d = sc_.destination();
    const Vec2 r = sc_.relay;
    auto integrand = [&](Vec2 x) {
        const double a = w1 * pl(std::max(dist(x, d), 1e-12));
        const double b = w2 * pl(std::max(dist(x, r), 1e-12));
        return 1.0 - 1.0 / ((1.0 + a) * (1.0 + b));
    };
    QuadResult I = integrate_plane(integrand, {d, r}, spec_);
    const double L = std::exp(-sc_.lambda * I.value);
    return {L, sc_.lambda * L * I.error, I.converged};
}

QuadResult LaplaceEvaluator::cross_f_dw1(double w1, double w2) const {
    return cached(round_key('g', w1, w2), [&]() {
        const Vec2 d = sc_.destination();
        const Vec2 r = sc_.relay;
        const double alpha = sc_.alpha;
        auto integrand = [&](Vec2 x) {
            const double A = std::pow(norm2(x - d), 0.5 * alpha);
            const double B = std::pow(norm2(x - r), 0.5 * alpha);
            const double da = w1 + A;
            return w2 * A / (da * da * (w2 + B));
        };
        return integrate_plane(integrand, {d, r}, spec_);
    });
}

QuadResult LaplaceEvaluator::d_joint_dw1(double w1, double w2) const {
    if (!(w1 > 0.0)) throw DomainError("derivative requires w1 > 0");
    if (!(w2 >= 0.0)) throw DomainError("transform arguments must be non-negative");
    if (sc_.lambda == 0.0) return {0.0, 0.0, true};
    const QuadResult L = joint(w1, w2);
    const double inv_a = 2.0 / sc_.alpha;
    const double marg_deriv = C_ * inv_a * std::pow(w1, inv_a - 1.0);
    QuadResult df{0.0, 0.0, true};
    if (w2 > 0.0) df = cross_f_dw1(w1, w2);
    const double bracket = marg_deriv - df.value;
    const double value = -sc_.lambda * L.value * bracket;
    const double err =
        sc_.lambda * (std::abs(bracket) * L.error + L.value * df.error);
    return {value, err, L.converged && df.converged};
}

}  // namespace rl
