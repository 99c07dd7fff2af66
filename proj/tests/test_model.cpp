#include <cmath>
#include <complex>
#include <random>

#include "core/errors.hpp"
#include "core/model.hpp"
#include "doctest.h"

using namespace rl;

TEST_SUITE("model") {
    TEST_CASE("scenario validation accepts the default and rejects bad fields") {
        Scenario sc;
        CHECK_NOTHROW(validate_scenario(sc));

        Scenario bad = sc;
        bad.D = 0.0;
        CHECK_THROWS_AS(validate_scenario(bad), DomainError);
        bad = sc;
        bad.alpha = 2.0;
        CHECK_THROWS_AS(validate_scenario(bad), DomainError);
        bad = sc;
        bad.lambda = -1e-6;
        CHECK_THROWS_AS(validate_scenario(bad), DomainError);
        bad = sc;
        bad.rate = 0.0;
        CHECK_THROWS_AS(validate_scenario(bad), DomainError);
        bad = sc;
        bad.relay = {0.0, 0.0};
        CHECK_THROWS_AS(validate_scenario(bad), DomainError);
        bad = sc;
        bad.relay = {sc.D, 0.0};
        CHECK_THROWS_AS(validate_scenario(bad), DomainError);
        bad = sc;
        bad.lambda = std::nan("");
        CHECK_THROWS_AS(validate_scenario(bad), DomainError);
    }

    TEST_CASE("protocol params validation") {
        ProtocolParams p;
        CHECK_NOTHROW(validate_protocol_params(p));
        p.rho = 1.5;
        CHECK_THROWS_AS(validate_protocol_params(p), DomainError);
        p.rho = 0.0;
        p.epsilon = 1.0;
        CHECK_THROWS_AS(validate_protocol_params(p), DomainError);
        p.epsilon = 0.5;
        p.nc = 0.0;
        CHECK_THROWS_AS(validate_protocol_params(p), DomainError);
        p.nc = 1.0;
        p.n_slabs = 0;
        CHECK_THROWS_AS(validate_protocol_params(p), DomainError);
    }

    TEST_CASE("path loss matches the power law and both code paths agree") {
        const Vec2 a{1.0, 2.0}, b{4.0, 6.0};  // distance 5
        CHECK(path_loss(a, b, 3.0) == doctest::Approx(std::pow(5.0, -3.0)).epsilon(1e-14));
        CHECK(path_loss(a, b, 4.0) == doctest::Approx(std::pow(5.0, -4.0)).epsilon(1e-14));
        // the alpha == 4 shortcut against the generic pow route
        const double d2 = norm2(a - b);
        CHECK(path_loss_from_dist2(d2, 4.0) ==
              doctest::Approx(std::pow(d2, -2.0)).epsilon(1e-14));
        // coincident points hit the clamp instead of overflowing
        const double clamped = path_loss(a, a, 4.0);
        CHECK(std::isfinite(clamped));
        CHECK(clamped == path_loss_from_dist2(1e-18, 4.0));
    }

    TEST_CASE("link gains for the default geometry") {
        Scenario sc;  // d = (10,0), r = (5,0), alpha = 4
        const LinkGains g = link_gains(sc);
        CHECK(g.l_sd == doctest::Approx(1e-4).epsilon(1e-13));
        CHECK(g.l_sr == doctest::Approx(std::pow(5.0, -4.0)).epsilon(1e-13));
        CHECK(g.l_rd == doctest::Approx(std::pow(5.0, -4.0)).epsilon(1e-13));
    }

    TEST_CASE("interference constant via the reflection formula") {
        // Independent route: Gamma(z)Gamma(1-z) = pi / sin(pi z) with z = 2/alpha
        for (double alpha : {2.5, 3.0, 4.0, 6.0}) {
            const double expected = 2.0 * M_PI * M_PI / (alpha * std::sin(2.0 * M_PI / alpha));
            CHECK(constant_C(alpha) == doctest::Approx(expected).epsilon(1e-12));
        }
        CHECK(constant_C(4.0) == doctest::Approx(M_PI * M_PI / 2.0).epsilon(1e-12));
        CHECK(constant_C(3.0) ==
              doctest::Approx(4.0 * M_PI * M_PI / (3.0 * std::sqrt(3.0))).epsilon(1e-12));
        CHECK_THROWS_AS(constant_C(2.0), DomainError);
    }

    TEST_CASE("rate threshold and density-scale coefficient") {
        CHECK(threshold_T(1.0) == doctest::Approx(1.0));
        CHECK(threshold_T(0.5) == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-14));
        CHECK(threshold_T(0.0) == 0.0);
        const double expected =
            constant_C(4.0) * std::sqrt(std::sqrt(2.0) - 1.0);  // T^(2/alpha), alpha=4
        CHECK(delta(0.5, 4.0) == doctest::Approx(expected).epsilon(1e-13));
    }

    TEST_CASE("combined-signal eigenvalues satisfy the trace and product identities") {
        Scenario sc;
        sc.relay = {3.0, 2.0};
        const LinkGains g = link_gains(sc);
        for (double r : {0.0, 0.3, 0.7, 0.999}) {
            const MuCoefficients mu = mu_coefficients(g, r);
            CHECK(mu.mu1 <= mu.mu2);
            CHECK(mu.mu1 + mu.mu2 == doctest::Approx(g.l_sd + g.l_rd).epsilon(1e-12));
            CHECK(mu.mu1 * mu.mu2 ==
                  doctest::Approx(g.l_sd * g.l_rd * (1.0 - r * r)).epsilon(1e-12));
            CHECK(mu.mu3 == doctest::Approx(g.l_sr * (1.0 - r * r)).epsilon(1e-14));
        }
        // full correlation collapses the small eigenvalue and the relay gain
        const MuCoefficients edge = mu_coefficients(g, 1.0);
        CHECK(edge.mu1 == 0.0);
        CHECK(edge.mu3 == 0.0);
        CHECK(edge.mu2 == doctest::Approx(g.l_sd + g.l_rd).epsilon(1e-14));
        // the phase of rho must not matter
        const MuCoefficients rotated = mu_coefficients(g, std::polar(0.7, 1.234));
        const MuCoefficients plain = mu_coefficients(g, 0.7);
        CHECK(rotated.mu1 == doctest::Approx(plain.mu1).epsilon(1e-14));
        CHECK(rotated.mu2 == doctest::Approx(plain.mu2).epsilon(1e-14));
    }

    TEST_CASE("equidistant relay with rho 0 gives equal eigenvalues") {
        Scenario sc;
        sc.relay = {5.0, 5.0 * std::sqrt(3.0)};  // ||r|| = ||r - d|| = D
        const LinkGains g = link_gains(sc);
        const MuCoefficients mu = mu_coefficients(g, 0.0);
        CHECK((mu.mu2 - mu.mu1) / mu.mu2 < 1e-12);
    }

    TEST_CASE("two-exponential tail probability against a direct Monte Carlo oracle") {
        // Oracle: sample mu1*W1 + mu2*W2 directly, test-local generator.
        std::mt19937_64 eng(12345);
        std::exponential_distribution<double> exp1(1.0);
        const struct {
            double mu1, mu2, u;
        } cases[] = {{0.5, 2.0, 1.0}, {1.0, 1.5, 3.0}, {0.2, 0.25, 0.1}};
        for (const auto& c : cases) {
            const int n = 200000;
            int hits = 0;
            for (int i = 0; i < n; ++i)
                hits += (c.mu1 * exp1(eng) + c.mu2 * exp1(eng) > c.u);
            const double p_mc = static_cast<double>(hits) / n;
            const double se = std::sqrt(p_mc * (1.0 - p_mc) / n);
            CHECK(std::abs(ccdf_Z(c.u, c.mu1, c.mu2) - p_mc) < 3.0 * se);
        }
    }

    TEST_CASE("tail probability switches branches continuously") {
        const double mu = 0.37, u = 0.9;
        // inside the degenerate window: the Gamma form
        const double t = u / mu;
        CHECK(ccdf_Z(u, mu, mu * (1.0 + 1e-9)) ==
              doctest::Approx((1.0 + t) * std::exp(-t)).epsilon(1e-12));
        // just outside: the two-exponential form approaches the same value
        CHECK(ccdf_Z(u, mu, mu * (1.0 + 2e-6)) ==
              doctest::Approx(ccdf_Z(u, mu, mu * (1.0 + 0.9e-6))).epsilon(1e-5));
        CHECK_THROWS_AS(ccdf_Z(-1.0, 1.0, 2.0), DomainError);
        CHECK_THROWS_AS(ccdf_Z(1.0, 0.0, 2.0), DomainError);
    }
}
