// Command-line front end. All numerics go through the public C API; this file
// only parses arguments, shapes CSV, and maps statuses to exit codes:
// 0 success, 1 validation failure, 2 configuration error, 3 numeric tolerance
// failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli_support.hpp"
#include "relaylab.h"

namespace {

using rlcli::Config;
using rlcli::format_double;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitTolerance = 3;

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::string method;
    std::string format = "csv";
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    int threads = 0;
    bool seed_given = false;
    bool samples_given = false;
    bool method_given = false;
};

void add_common(CLI::App* sub, CommonOpts& o) {
    sub->add_option("--config", o.config_path, "key=value configuration file");
    sub->add_option("--seed", o.seed, "master random seed");
    sub->add_option("--samples", o.samples, "Monte Carlo sample count");
    sub->add_option("--out", o.out_path, "output path (default: stdout)");
    sub->add_option("--method", o.method, "analytic|bound|montecarlo");
    sub->add_option("--format", o.format, "output format (csv)");
    sub->add_option("--threads", o.threads, "worker threads (0 = auto)");
}

// Flags override file values; file values override built-in defaults.
Config effective_config(const CLI::App* sub, CommonOpts& o) {
    Config cfg;
    if (!o.config_path.empty()) cfg = rlcli::load_config(o.config_path);
    o.seed_given = sub->count("--seed") > 0;
    o.samples_given = sub->count("--samples") > 0;
    o.method_given = sub->count("--method") > 0;
    if (o.seed_given) cfg.seed = o.seed;
    if (o.samples_given) cfg.samples = o.samples;
    if (o.method_given) cfg.method = o.method;
    if (o.format != "csv") throw std::runtime_error("unsupported format '" + o.format + "'");
    return cfg;
}

struct ModelDeleter {
    void operator()(rl_model* m) const { rl_model_destroy(m); }
};
using ModelPtr = std::unique_ptr<rl_model, ModelDeleter>;

ModelPtr build_model(const Config& cfg) {
    ModelPtr m(rl_model_create());
    if (!m) throw std::runtime_error("out of memory");
    if (rl_model_set_geometry(m.get(), cfg.D, cfg.relay_x, cfg.relay_y, cfg.alpha) != RL_OK ||
        rl_model_set_field(m.get(), cfg.lambda, cfg.rate) != RL_OK ||
        rl_model_set_rel_tol(m.get(), cfg.rel_tol) != RL_OK)
        throw std::runtime_error(rl_last_error(m.get()));
    return m;
}

rl_protocol_params params_from(const Config& cfg, int protocol) {
    rl_protocol_params p;
    rl_protocol_params_init(&p);
    p.protocol = protocol;
    p.rho = cfg.rho;
    p.epsilon = cfg.epsilon;
    p.nc = cfg.nc;
    p.n_slabs = cfg.n_slabs;
    return p;
}

int resolve_protocol(const Config& cfg) {
    const int p = rlcli::protocol_id(cfg.protocol);
    if (p < 0) throw std::runtime_error("unknown protocol '" + cfg.protocol + "'");
    return p;
}

int resolve_method(const Config& cfg, int protocol) {
    if (cfg.method.empty()) return rlcli::default_method_id(protocol);
    const int m = rlcli::method_id(cfg.method);
    if (m < 0) throw std::runtime_error("unknown method '" + cfg.method + "'");
    return m;
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + out_path + "'");
    out << text;
    if (!out) throw std::runtime_error("failed writing '" + out_path + "'");
}

const char* kind_label(int kind) {
    switch (kind) {
        case RL_KIND_EXACT: return "exact";
        case RL_KIND_UPPER_BOUND: return "upper_bound";
        case RL_KIND_LOWER_BOUND: return "lower_bound";
        case RL_KIND_MONTE_CARLO: return "montecarlo";
    }
    return "unknown";
}

// Tolerance reports are sticky: keep computing, exit 3 at the end.
int merge_status(int worst, int status, rl_model* m) {
    if (status == RL_ERR_TOLERANCE) return worst == kExitOk ? kExitTolerance : worst;
    if (status != RL_OK) throw std::runtime_error(rl_last_error(m));
    return worst;
}

// Distinct Monte Carlo seed per output row / grid cell.
std::uint64_t row_seed(std::uint64_t master, std::uint64_t index) {
    return master + 1000003ULL * index;
}

int cmd_laplace(const CommonOpts& o, const Config& cfg, const std::vector<std::string>& omegas) {
    ModelPtr m = build_model(cfg);
    std::vector<std::pair<double, double>> pairs;
    for (const auto& s : omegas) pairs.push_back(rlcli::parse_pair(s));
    if (pairs.empty()) pairs.push_back({0.5, 0.5});

    int worst = kExitOk;
    std::string csv = "w1,w2,value,error\n";
    for (const auto& [w1, w2] : pairs) {
        double value = 0.0, err = 0.0;
        worst = merge_status(worst, rl_joint_laplace(m.get(), w1, w2, &value, &err), m.get());
        csv += format_double(w1) + "," + format_double(w2) + "," + format_double(value) + "," +
               format_double(err) + "\n";
    }
    write_output(o.out_path, csv);
    return worst;
}

int cmd_op(const CommonOpts& o, const Config& cfg) {
    ModelPtr m = build_model(cfg);
    const int protocol = resolve_protocol(cfg);
    const int method = resolve_method(cfg, protocol);
    const rl_protocol_params p = params_from(cfg, protocol);

    double value = 0.0, err = 0.0;
    int kind = 0;
    int worst = merge_status(kExitOk,
                             rl_outage(m.get(), &p, method, cfg.samples, cfg.seed, o.threads,
                                       &value, &err, &kind),
                             m.get());
    std::string csv = "value,kind,error\n";
    csv += format_double(value) + "," + std::string(kind_label(kind)) + "," + format_double(err) +
           "\n";
    write_output(o.out_path, csv);
    return worst;
}

int cmd_sweep(const CommonOpts& o, const Config& cfg) {
    if (cfg.sweep_var.empty() || cfg.sweep_values.empty())
        throw std::runtime_error("sweep needs sweep_var and sweep_values in the config");
    const std::string& var = cfg.sweep_var;
    if (var != "lambda" && var != "rho" && var != "rate" && var != "epsilon" && var != "nc")
        throw std::runtime_error("unknown sweep_var '" + var + "'");
    const int protocol = resolve_protocol(cfg);
    const int method = resolve_method(cfg, protocol);

    int worst = kExitOk;
    std::string csv = "axis,value,kind,error\n";
    std::uint64_t row = 0;
    for (std::size_t i = 0; i < cfg.sweep_values.size(); ++i) {
        const double x = cfg.sweep_values[i];
        Config at = cfg;
        if (var == "lambda") at.lambda = x;
        else if (var == "rate") at.rate = x;
        else if (var == "rho") at.rho = x;
        else if (var == "epsilon") at.epsilon = x;
        else at.nc = x;

        ModelPtr m = build_model(at);

        // Which curves to emit at this grid point: the requested one, and for a
        // density sweep of analytic DF also the closed-form upper bound and the
        // direct-transmission baseline for comparison.
        struct Row {
            int protocol, method;
        };
        std::vector<Row> rows{{protocol, method}};
        if (var == "lambda" && protocol == RL_PROTOCOL_DF && method == RL_METHOD_ANALYTIC) {
            if (at.rho == 0.0) rows.push_back({RL_PROTOCOL_DF, RL_METHOD_BOUND});
            rows.push_back({RL_PROTOCOL_DT, RL_METHOD_ANALYTIC});
        }

        for (const Row& r : rows) {
            const rl_protocol_params p = params_from(at, r.protocol);
            double value = 0.0, err = 0.0;
            int kind = 0;
            worst = merge_status(worst,
                                 rl_outage(m.get(), &p, r.method, at.samples,
                                           row_seed(at.seed, row), o.threads, &value, &err, &kind),
                                 m.get());
            csv += format_double(x) + "," + format_double(value) + "," +
                   rlcli::sweep_kind_label(r.protocol, r.method) + "," + format_double(err) + "\n";
            ++row;
        }
    }
    write_output(o.out_path, csv);
    return worst;
}

int cmd_capacity(const CommonOpts& o, const Config& cfg, double target_op_flag,
                 bool target_given) {
    ModelPtr m = build_model(cfg);
    const int protocol = resolve_protocol(cfg);
    const int method = resolve_method(cfg, protocol);
    const double target = target_given ? target_op_flag : cfg.target_op;
    const rl_protocol_params p = params_from(cfg, protocol);

    double rate = 0.0;
    const int status = rl_outage_capacity(m.get(), &p, method, target, cfg.samples, cfg.seed,
                                          o.threads, &rate);
    if (status != RL_OK) throw std::runtime_error(rl_last_error(m.get()));

    std::string csv = "protocol,method,target_op,rate\n";
    csv += cfg.protocol + "," +
           (method == RL_METHOD_ANALYTIC ? "analytic"
            : method == RL_METHOD_BOUND  ? "bound"
                                         : "montecarlo") +
           "," + format_double(target) + "," + format_double(rate) + "\n";
    write_output(o.out_path, csv);
    return kExitOk;
}

int cmd_prefmap(const CommonOpts& o, const Config& cfg) {
    std::vector<double> xs = cfg.grid_x, ys = cfg.grid_y;
    if (xs.empty())
        for (int i = 1; i <= 9; ++i) xs.push_back(static_cast<double>(i));
    if (ys.empty()) ys = {0.0};

    int worst = kExitOk;
    std::string csv = "rx,ry,op_df,op_cf,ci_cf,winner\n";
    std::uint64_t cell = 0;
    for (double ry : ys) {
        for (double rx : xs) {
            Config at = cfg;
            at.relay_x = rx;
            at.relay_y = ry;
            ModelPtr m = build_model(at);  // rejects cells on source/destination

            const rl_protocol_params df = params_from(at, RL_PROTOCOL_DF);
            double op_df = 0.0, err_df = 0.0;
            worst = merge_status(worst,
                                 rl_outage(m.get(), &df, RL_METHOD_ANALYTIC, 0, 0, o.threads,
                                           &op_df, &err_df, nullptr),
                                 m.get());

            double grid[25];
            int n_nc = 0;
            if (rl_nc_grid(m.get(), grid, 25, &n_nc) != RL_OK)
                throw std::runtime_error(rl_last_error(m.get()));
            std::vector<double> p_hat(n_nc), hw(n_nc);
            if (rl_cf_outage_mc_multi_nc(m.get(), grid, n_nc, at.samples,
                                         row_seed(at.seed, cell), o.threads, p_hat.data(),
                                         hw.data()) != RL_OK)
                throw std::runtime_error(rl_last_error(m.get()));
            int best = 0;
            for (int i = 1; i < n_nc; ++i)
                if (p_hat[i] < p_hat[best]) best = i;

            csv += format_double(rx) + "," + format_double(ry) + "," + format_double(op_df) +
                   "," + format_double(p_hat[best]) + "," + format_double(hw[best]) + "," +
                   rlcli::prefmap_winner(op_df, p_hat[best], hw[best]) + "\n";
            ++cell;
        }
    }
    write_output(o.out_path, csv);
    return worst;
}

int cmd_validate(const CommonOpts& o, Config cfg, bool config_given, bool flip_hook) {
    // Without an explicit config the suite runs at a denser reference field
    // than the library default, which makes the statistical checks sharper.
    if (!config_given) cfg.lambda = 1e-3;
    if (!o.samples_given) cfg.samples = 50000;
    ModelPtr m = build_model(cfg);

    std::vector<char> report(16384);
    const int status = rl_validate(m.get(), cfg.samples, cfg.seed, o.threads, flip_hook ? 1 : 0,
                                   report.data(), report.size());
    if (status != RL_OK && status != RL_ERR_VALIDATION)
        throw std::runtime_error(rl_last_error(m.get()));
    write_output(o.out_path, report.data());
    return status == RL_OK ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relaylab: relay-channel outage analysis in a Poisson interference field"};
    app.require_subcommand(1);

    CommonOpts laplace_o, op_o, sweep_o, capacity_o, prefmap_o, validate_o;
    std::vector<std::string> omegas;
    double target_op_flag = 0.05;
    bool flip_hook = false;

    CLI::App* laplace = app.add_subcommand("laplace", "evaluate the interference transforms");
    add_common(laplace, laplace_o);
    laplace->add_option("--omega", omegas, "transform argument pair w1,w2 (repeatable)");

    CLI::App* op = app.add_subcommand("op", "one outage probability");
    add_common(op, op_o);

    CLI::App* sweep = app.add_subcommand("sweep", "outage across a parameter grid");
    add_common(sweep, sweep_o);

    CLI::App* capacity = app.add_subcommand("capacity", "max rate meeting an outage target");
    add_common(capacity, capacity_o);
    CLI::Option* target_opt =
        capacity->add_option("--target-op", target_op_flag, "outage target (default 0.05)");

    CLI::App* prefmap = app.add_subcommand("prefmap", "DF-vs-CF preference over relay positions");
    add_common(prefmap, prefmap_o);

    CLI::App* validate = app.add_subcommand("validate", "analytic-vs-simulation self checks");
    add_common(validate, validate_o);
    validate->add_flag("--flip-sign-hook", flip_hook,
                       "negative control: flip the transform cross-term sign");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (laplace->parsed()) return cmd_laplace(laplace_o, effective_config(laplace, laplace_o), omegas);
        if (op->parsed()) return cmd_op(op_o, effective_config(op, op_o));
        if (sweep->parsed()) return cmd_sweep(sweep_o, effective_config(sweep, sweep_o));
        if (capacity->parsed())
            return cmd_capacity(capacity_o, effective_config(capacity, capacity_o), target_op_flag,
                                target_opt->count() > 0);
        if (prefmap->parsed()) return cmd_prefmap(prefmap_o, effective_config(prefmap, prefmap_o));
        if (validate->parsed())
            return cmd_validate(validate_o, effective_config(validate, validate_o),
                                !validate_o.config_path.empty(), flip_hook);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
