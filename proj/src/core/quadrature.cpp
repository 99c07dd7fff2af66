#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace rl {

namespace {

// Kronrod 15 abscissae on [0, 1] side (symmetric) with embedded Gauss 7.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double error;
};

// One GK15 evaluation over [a, b].
Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kXgk[i]);
        fv[14 - i] = f(c + h * kXgk[i]);
    }
    fv[7] = f(c);
    double result_k = 0.0;
    for (int i = 0; i < 7; ++i) result_k += kWgk[i] * (fv[i] + fv[14 - i]);
    result_k += kWgk[7] * fv[7];
    double result_g = 0.0;
    for (int i = 0; i < 3; ++i) result_g += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    result_g += kWg[3] * fv[7];
    Panel p;
    p.a = a;
    p.b = b;
    p.value = result_k * h;
    const double diff = std::abs(result_k - result_g) * h;
    // Standard QUADPACK-style error sharpening.
    p.error = diff;
    if (diff > 0.0) {
        double resabs = 0.0;
        for (int i = 0; i < 7; ++i) resabs += kWgk[i] * (std::abs(fv[i]) + std::abs(fv[14 - i]));
        resabs += kWgk[7] * std::abs(fv[7]);
        resabs *= std::abs(h);
        if (resabs > 0.0) {
            const double scaled = std::pow(200.0 * diff / resabs, 1.5) * resabs / 200.0;
            p.error = std::min(diff, scaled);
        }
    }
    return p;
}

}  // namespace

QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        const std::vector<double>& breakpoints, const QuadratureSpec& spec) {
    QuadResult out;
    if (a == b) return out;

    std::vector<double> edges;
    edges.push_back(a);
    for (double bp : breakpoints)
        if (bp > a && bp < b) edges.push_back(bp);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    // Max-error-first refinement; ties broken by left endpoint so the
    // refinement schedule itself is deterministic.
    auto cmp = [](const Panel& x, const Panel& y) {
        if (x.error != y.error) return x.error < y.error;
        return x.a > y.a;
    };
    std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> active(cmp);
    double total_value = 0.0;
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        Panel p = gk15(f, edges[i], edges[i + 1]);
        total_value += p.value;
        total_error += p.error;
        active.push(p);
    }

    int panel_count = static_cast<int>(edges.size()) - 1;
    auto tolerance = [&]() {
        return std::max(spec.abs_tol, spec.rel_tol * std::abs(total_value));
    };
    while (total_error > tolerance() && panel_count < spec.max_subdivisions) {
        Panel worst = active.top();
        active.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval no longer splittable in double precision.
            active.push(Panel{worst.a, worst.b, worst.value, 0.0});
            total_error -= worst.error;
            continue;
        }
        Panel left = gk15(f, worst.a, mid);
        Panel right = gk15(f, mid, worst.b);
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        active.push(left);
        active.push(right);
        ++panel_count;
    }

    // Deterministic final accumulation: drain the heap, sort panels by left
    // endpoint, and sum in that order.
    std::vector<Panel> panels;
    panels.reserve(active.size());
    while (!active.empty()) {
        panels.push_back(active.top());
        active.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    out.value = 0.0;
    out.error = 0.0;
    for (const Panel& p : panels) {
        out.value += p.value;
        out.error += p.error;
    }
    out.converged = out.error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(out.value));
    return out;
}

QuadResult integrate_plane(const std::function<double(Vec2)>& f, const std::vector<Vec2>& centers,
                           const QuadratureSpec& spec) {
    Vec2 origin{0.0, 0.0};
    if (!centers.empty()) {
        for (const Vec2& c : centers) origin = origin + c;
        origin = (1.0 / static_cast<double>(centers.size())) * origin;
    }

    std::vector<double> radial_bp;
    std::vector<double> angular_bp;
    for (const Vec2& c : centers) {
        const Vec2 off = c - origin;
        const double rr = norm(off);
        if (rr > 0.0) {
            radial_bp.push_back(rr / (1.0 + rr));  // in t coordinates
            double az = std::atan2(off.y, off.x);
            if (az < 0.0) az += 2.0 * M_PI;
            angular_bp.push_back(az);
        }
    }

    QuadratureSpec inner = spec;
    inner.rel_tol = spec.rel_tol / 8.0;
    inner.abs_tol = spec.abs_tol / 8.0;

    auto radial_integrand = [&](double t) {
        if (t >= 1.0) return 0.0;
        const double u = t / (1.0 - t);
        const double jac = u * (1.0 + u) * (1.0 + u);
        if (jac == 0.0) return 0.0;
        auto angular = [&](double th) {
            return f({origin.x + u * std::cos(th), origin.y + u * std::sin(th)});
        };
        QuadResult ring = integrate_1d(angular, 0.0, 2.0 * M_PI, angular_bp, inner);
        return ring.value * jac;
    };

    return integrate_1d(radial_integrand, 0.0, 1.0, radial_bp, spec);
}

QuadResult expect_exponential(const std::function<double(double)>& g, const QuadratureSpec& spec) {
    // Truncate at s = 1 - 1e-16 (t ~ 36.8, weight 1e-16); geometric
    // breakpoints toward 1 resolve the logarithmic endpoint.
    static const std::vector<double> kTailBp = {0.5,     0.9,      0.99,     0.999,
                                                0.9999,  0.99999,  0.999999, 0.9999999,
                                                1.0 - 1e-9, 1.0 - 1e-12};
    auto integrand = [&](double s) { return g(-std::log1p(-s)); };
    return integrate_1d(integrand, 0.0, 1.0 - 1e-16, kTailBp, spec);
}

QuadResult expect_exponential_pair(const std::function<double(double, double)>& g,
                                   const QuadratureSpec& spec) {
    QuadratureSpec inner = spec;
    inner.rel_tol = spec.rel_tol / 8.0;
    inner.abs_tol = spec.abs_tol / 8.0;
    auto outer = [&](double w1) {
        return expect_exponential([&](double w2) { return g(w1, w2); }, inner).value;
    };
    return expect_exponential(outer, spec);
}

}  // namespace rl
