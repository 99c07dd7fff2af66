#include "simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "errors.hpp"

namespace rl {

namespace {

constexpr std::uint64_t kChunk = 4096;

double confidence_half_width(double p, std::uint64_t n) {
    if (n == 0) return 0.0;
    return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

OutageEstimate make_estimate(std::uint64_t hits, std::uint64_t n, std::uint64_t seed) {
    OutageEstimate est;
    est.n_samples = n;
    est.seed = seed;
    est.p_hat = n ? static_cast<double>(hits) / static_cast<double>(n) : 0.0;
    est.half_width = confidence_half_width(est.p_hat, n);
    return est;
}

// Geometry constants shared by every sampling kernel.
struct SampleGeom {
    Vec2 center;  // window center: midpoint of the source-destination segment
    Vec2 relay;
    Vec2 dest;
    double radius = 0.0;
    double mean_points = 0.0;
    double alpha = 4.0;
};

SampleGeom make_geom(const Scenario& sc) {
    SampleGeom g;
    g.center = {0.5 * sc.D, 0.0};
    g.relay = sc.relay;
    g.dest = sc.destination();
    g.radius = choose_window(sc);
    g.mean_points = sc.lambda * M_PI * g.radius * g.radius;
    g.alpha = sc.alpha;
    return g;
}

// Interference powers only; marks reduced to their magnitudes (unit-mean
// exponentials), which is all the DT/DF/SDF indicators and the empirical
// transform consume. Draw order per point: radius, angle, mark to relay,
// mark to destination.
inline void accumulate_interference(const SampleGeom& g, ChunkRng& rng, double& I_r,
                                    double& I_d) {
    const std::uint64_t K = rng.poisson(g.mean_points);
    double ir = 0.0, id = 0.0;
    for (std::uint64_t k = 0; k < K; ++k) {
        const double rad = g.radius * std::sqrt(rng.uniform());
        const double th = kTwoPi * rng.uniform();
        const Vec2 p{g.center.x + rad * std::cos(th), g.center.y + rad * std::sin(th)};
        const double e_r = rng.exponential();
        const double e_d = rng.exponential();
        ir += e_r * path_loss_from_dist2(norm2(p - g.relay), g.alpha);
        id += e_d * path_loss_from_dist2(norm2(p - g.dest), g.alpha);
    }
    I_r = ir;
    I_d = id;
}

// Direct-link fading magnitudes for the light protocols. phi is the relative
// phase entering the DF cooperative cross term. Draw order: e_sd, e_sr, e_rd,
// phi, then the field.
struct LightDraw {
    double e_sd, e_sr, e_rd, phi;
    double I_r, I_d;
};

inline LightDraw draw_light(const SampleGeom& g, ChunkRng& rng) {
    LightDraw d;
    d.e_sd = rng.exponential();
    d.e_sr = rng.exponential();
    d.e_rd = rng.exponential();
    d.phi = kTwoPi * rng.uniform();
    accumulate_interference(g, rng, d.I_r, d.I_d);
    return d;
}

// Full complex draw for CF: spatial correlation of the two aggregate
// interference signals needs the mark phases. Draw order: h_sd, h_sr, h_rd,
// then per point: radius, angle, mark to relay, mark to destination.
struct FullDraw {
    std::complex<double> h_sd, h_sr, h_rd;
    double I_r, I_d;
    std::complex<double> cross;  // sum h_r * conj(h_d) * sqrt(l_r * l_d)
};

inline FullDraw draw_full(const SampleGeom& g, ChunkRng& rng) {
    FullDraw d;
    d.h_sd = rng.complex_fading();
    d.h_sr = rng.complex_fading();
    d.h_rd = rng.complex_fading();
    const std::uint64_t K = rng.poisson(g.mean_points);
    double ir = 0.0, id = 0.0;
    std::complex<double> cross{0.0, 0.0};
    for (std::uint64_t k = 0; k < K; ++k) {
        const double rad = g.radius * std::sqrt(rng.uniform());
        const double th = kTwoPi * rng.uniform();
        const Vec2 p{g.center.x + rad * std::cos(th), g.center.y + rad * std::sin(th)};
        const std::complex<double> h_r = rng.complex_fading();
        const std::complex<double> h_d = rng.complex_fading();
        const double lr = path_loss_from_dist2(norm2(p - g.relay), g.alpha);
        const double ld = path_loss_from_dist2(norm2(p - g.dest), g.alpha);
        ir += std::norm(h_r) * lr;
        id += std::norm(h_d) * ld;
        cross += h_r * std::conj(h_d) * std::sqrt(lr * ld);
    }
    d.I_r = ir;
    d.I_d = id;
    d.cross = cross;
    return d;
}

template <typename Partial, typename Kernel>
std::vector<Partial> run_chunked(std::uint64_t n, std::uint64_t seed, int n_threads,
                                 Kernel&& kernel) {
    const std::uint64_t n_chunks = (n + kChunk - 1) / kChunk;
    std::vector<Partial> partials(n_chunks);
    int nt = n_threads > 0 ? n_threads : default_thread_count();
    nt = static_cast<int>(std::min<std::uint64_t>(nt, std::max<std::uint64_t>(n_chunks, 1)));
    std::atomic<std::uint64_t> next{0};
    auto work = [&]() {
        std::uint64_t i;
        while ((i = next.fetch_add(1)) < n_chunks) {
            const std::uint64_t count = std::min(kChunk, n - i * kChunk);
            ChunkRng rng(chunk_seed(seed, i));
            kernel(count, rng, partials[i]);
        }
    };
    if (nt <= 1) {
        work();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(nt);
        for (int t = 0; t < nt; ++t) threads.emplace_back(work);
        for (auto& t : threads) t.join();
    }
    return partials;
}

// Indicator bodies shared between the per-realization API and the fast kernels.
// Every success condition is written as signal >= T * interference, so empty
// fields (I = 0) succeed for free.

inline bool df_outage_from_draw(const LightDraw& d, const LinkGains& g, double T, double rho) {
    const double mu3 = g.l_sr * (1.0 - rho * rho);
    if (d.e_sr * mu3 >= T * d.I_r) {
        const double z = d.e_sd * g.l_sd + d.e_rd * g.l_rd +
                         2.0 * rho * std::sqrt(g.l_sd * g.l_rd * d.e_sd * d.e_rd) *
                             std::cos(d.phi);
        return z < T * d.I_d;
    }
    return d.e_sd * g.l_sd < T * d.I_d;
}

inline bool sdf_outage_from_draw(const LightDraw& d, const LinkGains& g, double rate,
                                 double T, double T_eps, double epsilon) {
    if (d.e_sr * g.l_sr >= T_eps * d.I_r) {
        if (d.I_d <= 0.0) return false;
        const double r_sdf =
            epsilon * std::log2(1.0 + d.e_sd * g.l_sd / d.I_d) +
            (1.0 - epsilon) * std::log2(1.0 + (d.e_sd * g.l_sd + d.e_rd * g.l_rd) / d.I_d);
        return r_sdf < rate;
    }
    return d.e_sd * g.l_sd < T * d.I_d;
}

inline bool dt_outage_from_draw(const LightDraw& d, const LinkGains& g, double T) {
    return d.e_sd * g.l_sd < T * d.I_d;
}

inline bool cf_outage_from_draw(const FullDraw& d, const LinkGains& g, double rate, double nc) {
    if (!(d.I_r > 0.0) || !(d.I_d > 0.0)) return false;
    const std::complex<double> rho_n = d.cross / std::sqrt(d.I_r * d.I_d);
    const CfRates r = cf_rates(d.h_sd, d.h_sr, d.h_rd, g, d.I_r, d.I_d, rho_n, nc);
    return r.r2 < rate || nc < r.nc_min;
}

}  // namespace

int default_thread_count() {
    if (const char* env = std::getenv("RELAYLAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 256) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 8u));
}

double choose_window(const Scenario& sc, double rel_truncation_error) {
    validate_scenario(sc);
    if (!(rel_truncation_error > 0.0)) throw DomainError("truncation tolerance must be positive");
    if (sc.alpha <= 2.01)
        throw DomainError("interference tail not truncatable for alpha <= 2.01");
    const Vec2 m{0.5 * sc.D, 0.0};
    const double off = std::max(dist(sc.relay, m), 0.5 * sc.D);
    if (sc.lambda == 0.0) return off + 1.0;  // field is empty; any cover works
    const double u0 = 1.0 / std::sqrt(M_PI * sc.lambda);
    const double factor =
        std::pow((1.0 + rel_truncation_error) / rel_truncation_error, 1.0 / (sc.alpha - 2.0));
    return off + u0 * factor;
}

FieldRealization sample_field(const Scenario& sc, double window_radius, ChunkRng& rng) {
    FieldRealization f;
    f.window_radius = window_radius;
    f.h_sd = rng.complex_fading();
    f.h_sr = rng.complex_fading();
    f.h_rd = rng.complex_fading();
    const Vec2 m{0.5 * sc.D, 0.0};
    const std::uint64_t K = rng.poisson(sc.lambda * M_PI * window_radius * window_radius);
    f.points.reserve(K);
    f.marks_r.reserve(K);
    f.marks_d.reserve(K);
    for (std::uint64_t k = 0; k < K; ++k) {
        const double rad = window_radius * std::sqrt(rng.uniform());
        const double th = kTwoPi * rng.uniform();
        f.points.push_back({m.x + rad * std::cos(th), m.y + rad * std::sin(th)});
        f.marks_r.push_back(rng.complex_fading());
        f.marks_d.push_back(rng.complex_fading());
    }
    return f;
}

InterferenceState interference(const FieldRealization& field, const Scenario& sc) {
    InterferenceState st;
    const Vec2 d = sc.destination();
    double ir = 0.0, id = 0.0;
    std::complex<double> cross{0.0, 0.0};
    for (std::size_t i = 0; i < field.points.size(); ++i) {
        const double lr = path_loss(field.points[i], sc.relay, sc.alpha);
        const double ld = path_loss(field.points[i], d, sc.alpha);
        ir += std::norm(field.marks_r[i]) * lr;
        id += std::norm(field.marks_d[i]) * ld;
        cross += field.marks_r[i] * std::conj(field.marks_d[i]) * std::sqrt(lr * ld);
    }
    st.I_r = ir;
    st.I_d = id;
    st.interference_free = !(ir > 0.0 && id > 0.0);
    if (!st.interference_free) st.rho_n = cross / std::sqrt(ir * id);
    return st;
}

bool df_outage_indicator(const InterferenceState& st, const FieldRealization& field,
                         const Scenario& sc, std::complex<double> rho) {
    const double r = std::abs(rho);
    if (!(r <= 1.0 + 1e-15)) throw DomainError("|rho| must not exceed 1");
    const LinkGains g = link_gains(sc);
    const double T = threshold_T(sc.rate);
    LightDraw d;
    d.e_sd = std::norm(field.h_sd);
    d.e_sr = std::norm(field.h_sr);
    d.e_rd = std::norm(field.h_rd);
    d.phi = std::arg(field.h_sd * std::conj(field.h_rd));
    d.I_r = st.I_r;
    d.I_d = st.I_d;
    return df_outage_from_draw(d, g, T, r);
}

bool sdf_outage_indicator(const InterferenceState& st, const FieldRealization& field,
                          const Scenario& sc, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
    const LinkGains g = link_gains(sc);
    LightDraw d;
    d.e_sd = std::norm(field.h_sd);
    d.e_sr = std::norm(field.h_sr);
    d.e_rd = std::norm(field.h_rd);
    d.phi = 0.0;
    d.I_r = st.I_r;
    d.I_d = st.I_d;
    return sdf_outage_from_draw(d, g, sc.rate, threshold_T(sc.rate),
                                threshold_T(sc.rate / epsilon), epsilon);
}

bool cf_outage_indicator(const InterferenceState& st, const FieldRealization& field,
                         const Scenario& sc, double nc) {
    if (st.interference_free) return false;
    const LinkGains g = link_gains(sc);
    const CfRates r =
        cf_rates(field.h_sd, field.h_sr, field.h_rd, g, st.I_r, st.I_d, st.rho_n, nc);
    return r.r2 < sc.rate || nc < r.nc_min;
}

OutageEstimate estimate_outage(const Scenario& sc, const ProtocolParams& params,
                               std::uint64_t n_samples, std::uint64_t seed, int n_threads) {
    validate_scenario(sc);
    validate_protocol_params(params);
    if (n_samples < 1000) throw DomainError("estimate_outage requires at least 1000 samples");

    const SampleGeom geom = make_geom(sc);
    const LinkGains g = link_gains(sc);
    const double T = threshold_T(sc.rate);
    const double rho = std::abs(params.rho);

    struct Partial {
        std::uint64_t hits = 0;
    };

    std::vector<Partial> partials;
    switch (params.protocol) {
        case Protocol::DT:
            partials = run_chunked<Partial>(
                n_samples, seed, n_threads, [&](std::uint64_t count, ChunkRng& rng, Partial& out) {
                    for (std::uint64_t i = 0; i < count; ++i)
                        out.hits += dt_outage_from_draw(draw_light(geom, rng), g, T);
                });
            break;
        case Protocol::DF:
            partials = run_chunked<Partial>(
                n_samples, seed, n_threads, [&](std::uint64_t count, ChunkRng& rng, Partial& out) {
                    for (std::uint64_t i = 0; i < count; ++i)
                        out.hits += df_outage_from_draw(draw_light(geom, rng), g, T, rho);
                });
            break;
        case Protocol::SDF: {
            if (!(params.epsilon > 0.0)) throw DomainError("epsilon must lie in (0, 1)");
            const double T_eps = threshold_T(sc.rate / params.epsilon);
            partials = run_chunked<Partial>(
                n_samples, seed, n_threads, [&](std::uint64_t count, ChunkRng& rng, Partial& out) {
                    for (std::uint64_t i = 0; i < count; ++i)
                        out.hits += sdf_outage_from_draw(draw_light(geom, rng), g, sc.rate, T,
                                                         T_eps, params.epsilon);
                });
            break;
        }
        case Protocol::CF:
            partials = run_chunked<Partial>(
                n_samples, seed, n_threads, [&](std::uint64_t count, ChunkRng& rng, Partial& out) {
                    for (std::uint64_t i = 0; i < count; ++i)
                        out.hits += cf_outage_from_draw(draw_full(geom, rng), g, sc.rate, params.nc);
                });
            break;
    }

    std::uint64_t hits = 0;
    for (const Partial& p : partials) hits += p.hits;
    return make_estimate(hits, n_samples, seed);
}

std::vector<OutageEstimate> mc_joint_laplace_multi(
    const Scenario& sc, const std::vector<std::pair<double, double>>& omegas,
    std::uint64_t n_samples, std::uint64_t seed, int n_threads) {
    validate_scenario(sc);
    if (n_samples == 0) throw DomainError("need at least one sample");
    for (const auto& [w1, w2] : omegas)
        if (!(w1 >= 0.0) || !(w2 >= 0.0))
            throw DomainError("transform arguments must be non-negative");

    const SampleGeom geom = make_geom(sc);
    const std::size_t m = omegas.size();

    struct Partial {
        std::vector<double> sum, sumsq;
    };

    // Draw order per sample: the Poisson count, then per point the position
    // and both marks. No direct-link fadings are consumed here.
    auto partials = run_chunked<Partial>(
        n_samples, seed, n_threads, [&](std::uint64_t count, ChunkRng& rng, Partial& out) {
            out.sum.assign(m, 0.0);
            out.sumsq.assign(m, 0.0);
            for (std::uint64_t i = 0; i < count; ++i) {
                double I_r, I_d;
                accumulate_interference(geom, rng, I_r, I_d);
                for (std::size_t j = 0; j < m; ++j) {
                    const double v = std::exp(-omegas[j].first * I_d - omegas[j].second * I_r);
                    out.sum[j] += v;
                    out.sumsq[j] += v * v;
                }
            }
        });

    std::vector<double> sum(m, 0.0), sumsq(m, 0.0);
    for (const Partial& p : partials)
        for (std::size_t j = 0; j < m; ++j) {
            sum[j] += p.sum[j];
            sumsq[j] += p.sumsq[j];
        }

    std::vector<OutageEstimate> out(m);
    const double n = static_cast<double>(n_samples);
    for (std::size_t j = 0; j < m; ++j) {
        const double mean = sum[j] / n;
        const double var = std::max(sumsq[j] / n - mean * mean, 0.0);
        out[j].p_hat = mean;
        out[j].half_width = 1.96 * std::sqrt(var / n);
        out[j].n_samples = n_samples;
        out[j].seed = seed;
    }
    return out;
}

OutageEstimate mc_joint_laplace(const Scenario& sc, double w1, double w2,
                                std::uint64_t n_samples, std::uint64_t seed, int n_threads) {
    return mc_joint_laplace_multi(sc, {{w1, w2}}, n_samples, seed, n_threads)[0];
}

std::vector<OutageEstimate> cf_estimate_multi_nc(const Scenario& sc,
                                                 const std::vector<double>& nc_list,
                                                 std::uint64_t n_samples, std::uint64_t seed,
                                                 int n_threads) {
    validate_scenario(sc);
    if (n_samples < 1000) throw DomainError("estimate requires at least 1000 samples");
    for (double nc : nc_list)
        if (!(nc > 0.0)) throw DomainError("nc must be positive");

    const SampleGeom geom = make_geom(sc);
    const LinkGains g = link_gains(sc);
    const std::size_t m = nc_list.size();

    struct Partial {
        std::vector<std::uint64_t> hits;
    };

    auto partials = run_chunked<Partial>(
        n_samples, seed, n_threads, [&](std::uint64_t count, ChunkRng& rng, Partial& out) {
            out.hits.assign(m, 0);
            for (std::uint64_t i = 0; i < count; ++i) {
                const FullDraw d = draw_full(geom, rng);
                if (!(d.I_r > 0.0) || !(d.I_d > 0.0)) continue;
                const std::complex<double> rho_n = d.cross / std::sqrt(d.I_r * d.I_d);
                // nc-independent pieces of the rate and the compression limit
                const std::complex<double> u = d.h_sd * std::sqrt(g.l_sd / d.I_d);
                const std::complex<double> v = d.h_sr * std::sqrt(g.l_sr / d.I_r);
                const double u2 = std::norm(u);
                const double v2 = std::norm(v);
                const double r2 = std::norm(rho_n);
                const double crossuv = std::real(rho_n * u * std::conj(v));
                const double nc_min = (d.I_r * d.I_d / (std::norm(d.h_rd) * g.l_rd)) *
                                      (u2 + v2 + 1.0 - 2.0 * crossuv);
                const double num = r2 * u2 + v2 - 2.0 * crossuv;
                for (std::size_t j = 0; j < m; ++j) {
                    const double rate2 =
                        std::log2(1.0 + u2 + num / (1.0 + nc_list[j] / d.I_r - r2));
                    out.hits[j] += (rate2 < sc.rate || nc_list[j] < nc_min);
                }
            }
        });

    std::vector<std::uint64_t> hits(m, 0);
    for (const Partial& p : partials)
        for (std::size_t j = 0; j < m; ++j) hits[j] += p.hits[j];
    std::vector<OutageEstimate> out(m);
    for (std::size_t j = 0; j < m; ++j) out[j] = make_estimate(hits[j], n_samples, seed);
    return out;
}

DfEventProbs df_event_probs_mc(const Scenario& sc, std::complex<double> rho,
                               std::uint64_t n_samples, std::uint64_t seed, int n_threads) {
    validate_scenario(sc);
    if (n_samples < 1000) throw DomainError("estimate requires at least 1000 samples");
    const SampleGeom geom = make_geom(sc);
    const LinkGains g = link_gains(sc);
    const double T = threshold_T(sc.rate);
    const double r = std::abs(rho);
    const double mu3 = g.l_sr * (1.0 - r * r);

    struct Partial {
        std::uint64_t joint = 0, fallback = 0;
    };

    auto partials = run_chunked<Partial>(
        n_samples, seed, n_threads, [&](std::uint64_t count, ChunkRng& rng, Partial& out) {
            for (std::uint64_t i = 0; i < count; ++i) {
                const LightDraw d = draw_light(geom, rng);
                if (d.e_sr * mu3 >= T * d.I_r) {
                    const double z = d.e_sd * g.l_sd + d.e_rd * g.l_rd +
                                     2.0 * r * std::sqrt(g.l_sd * g.l_rd * d.e_sd * d.e_rd) *
                                         std::cos(d.phi);
                    out.joint += (z >= T * d.I_d);
                } else {
                    out.fallback += (d.e_sd * g.l_sd >= T * d.I_d);
                }
            }
        });

    std::uint64_t joint = 0, fallback = 0;
    for (const Partial& p : partials) {
        joint += p.joint;
        fallback += p.fallback;
    }
    DfEventProbs out;
    out.joint_success = make_estimate(joint, n_samples, seed);
    out.fallback_success = make_estimate(fallback, n_samples, seed);
    return out;
}

GapScanResult cf_gap_scan(const Scenario& sc, double nc, std::uint64_t n_samples,
                          std::uint64_t seed, int n_threads) {
    validate_scenario(sc);
    if (!(nc > 0.0)) throw DomainError("nc must be positive");
    const SampleGeom geom = make_geom(sc);
    const LinkGains g = link_gains(sc);

    struct Partial {
        std::uint64_t checked = 0, violations = 0;
        double min_gap = 1e300;
    };

    auto partials = run_chunked<Partial>(
        n_samples, seed, n_threads, [&](std::uint64_t count, ChunkRng& rng, Partial& out) {
            for (std::uint64_t i = 0; i < count; ++i) {
                const FullDraw d = draw_full(geom, rng);
                if (!(d.I_r > 0.0) || !(d.I_d > 0.0)) continue;
                const std::complex<double> rho_n = d.cross / std::sqrt(d.I_r * d.I_d);
                const CfRates with =
                    cf_rates(d.h_sd, d.h_sr, d.h_rd, g, d.I_r, d.I_d, rho_n, nc);
                const CfRates without =
                    cf_rates(d.h_sd, d.h_sr, d.h_rd, g, d.I_r, d.I_d, {0.0, 0.0}, nc);
                const double gap = cf_rate(with) - cf_rate(without);
                ++out.checked;
                out.violations += (gap < -1.0 - 1e-9);
                out.min_gap = std::min(out.min_gap, gap);
            }
        });

    GapScanResult out;
    out.min_gap = 1e300;
    for (const Partial& p : partials) {
        out.checked += p.checked;
        out.violations += p.violations;
        out.min_gap = std::min(out.min_gap, p.min_gap);
    }
    if (out.checked == 0) out.min_gap = 0.0;
    return out;
}

}  // namespace rl
