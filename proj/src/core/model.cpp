#include "model.hpp"

#include <cmath>

#include "errors.hpp"

namespace rl {

void validate_scenario(const Scenario& sc) {
    if (!(sc.D > 0.0)) throw DomainError("D must be positive");
    if (!(sc.alpha > 2.0)) throw DomainError("alpha must exceed 2");
    if (!(sc.lambda >= 0.0)) throw DomainError("lambda must be non-negative");
    if (!(sc.rate > 0.0)) throw DomainError("rate must be positive");
    if (norm2(sc.relay) == 0.0) throw DomainError("relay must not coincide with the source");
    if (norm2(sc.relay - sc.destination()) == 0.0)
        throw DomainError("relay must not coincide with the destination");
    if (!std::isfinite(sc.D) || !std::isfinite(sc.alpha) || !std::isfinite(sc.lambda) ||
        !std::isfinite(sc.rate) || !std::isfinite(sc.relay.x) || !std::isfinite(sc.relay.y))
        throw DomainError("scenario fields must be finite");
}

void validate_protocol_params(const ProtocolParams& p) {
    if (!(std::abs(p.rho) <= 1.0)) throw DomainError("|rho| must not exceed 1");
    if (!(p.epsilon >= 0.0 && p.epsilon < 1.0)) throw DomainError("epsilon must lie in [0, 1)");
    if (!(p.nc > 0.0)) throw DomainError("nc must be positive");
    if (p.n_slabs < 1) throw DomainError("n_slabs must be at least 1");
}

double path_loss(Vec2 x, Vec2 y, double alpha) {
    return path_loss_from_dist2(norm2(x - y), alpha);
}

double path_loss_from_dist2(double dist2, double alpha) {
    constexpr double kMinDist2 = 1e-18;  // (1e-9)^2 clamp
    if (dist2 < kMinDist2) dist2 = kMinDist2;
    if (alpha == 4.0) return 1.0 / (dist2 * dist2);
    return std::pow(dist2, -0.5 * alpha);
}

LinkGains link_gains(const Scenario& sc) {
    LinkGains g;
    g.l_sd = path_loss(sc.source(), sc.destination(), sc.alpha);
    g.l_sr = path_loss(sc.source(), sc.relay, sc.alpha);
    g.l_rd = path_loss(sc.relay, sc.destination(), sc.alpha);
    return g;
}

double constant_C(double alpha) {
    if (!(alpha > 2.0)) throw DomainError("constant_C requires alpha > 2");
    const double a = 2.0 / alpha;
    return 2.0 * M_PI * std::tgamma(a) * std::tgamma(1.0 - a) / alpha;
}

double threshold_T(double rate) {
    if (!(rate >= 0.0)) throw DomainError("rate must be non-negative");
    return std::exp2(rate) - 1.0;
}

double delta(double rate, double alpha) {
    if (!(rate > 0.0)) throw DomainError("delta requires rate > 0");
    return constant_C(alpha) * std::pow(threshold_T(rate), 2.0 / alpha);
}

MuCoefficients mu_coefficients(const LinkGains& g, std::complex<double> rho) {
    const double r2 = std::norm(rho);
    if (!(r2 <= 1.0 + 1e-15)) throw DomainError("|rho| must not exceed 1");
    const double s = g.l_sd + g.l_rd;
    const double diff = g.l_sd - g.l_rd;
    const double disc = std::sqrt(diff * diff + 4.0 * g.l_sd * g.l_rd * r2);
    MuCoefficients mu;
    mu.mu2 = 0.5 * (s + disc);
    // mu1 via the product identity; the subtractive form cancels when disc ~ s.
    mu.mu1 = mu.mu2 > 0.0 ? g.l_sd * g.l_rd * (1.0 - r2) / mu.mu2 : 0.0;
    mu.mu3 = g.l_sr * (1.0 - r2);
    return mu;
}

double ccdf_Z(double u, double mu1, double mu2) {
    if (!(u >= 0.0)) throw DomainError("ccdf_Z requires u >= 0");
    if (!(mu1 > 0.0 && mu1 <= mu2)) throw DomainError("ccdf_Z requires 0 < mu1 <= mu2");
    if ((mu2 - mu1) / mu2 < kDegenerateGap) {
        const double t = u / mu1;
        return (1.0 + t) * std::exp(-t);
    }
    return (mu2 * std::exp(-u / mu2) - mu1 * std::exp(-u / mu1)) / (mu2 - mu1);
}

}  // namespace rl
