#include "cli_support.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rlcli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    if (line <= 0) throw std::runtime_error(msg);
    throw std::runtime_error("config line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& s, int line) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE)
        fail(line, "expected a number, got '" + s + "'");
    return v;
}

std::uint64_t to_u64(const std::string& s, int line) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE || s.find('-') != std::string::npos)
        fail(line, "expected a non-negative integer, got '" + s + "'");
    return v;
}

std::vector<double> to_list(const std::string& s, int line) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item), line));
    if (out.empty()) fail(line, "expected a comma-separated list of numbers");
    return out;
}

}  // namespace

Config parse_config_text(const std::string& text) {
    Config cfg;
    std::stringstream stream(text);
    std::string raw;
    int line = 0;
    while (std::getline(stream, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string stripped = trim(raw);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) fail(line, "expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) fail(line, "empty key");
        if (value.empty()) fail(line, "empty value for '" + key + "'");

        if (key == "alpha") cfg.alpha = to_double(value, line);
        else if (key == "lambda") cfg.lambda = to_double(value, line);
        else if (key == "D") cfg.D = to_double(value, line);
        else if (key == "relay_x") cfg.relay_x = to_double(value, line);
        else if (key == "relay_y") cfg.relay_y = to_double(value, line);
        else if (key == "rate") cfg.rate = to_double(value, line);
        else if (key == "rho") cfg.rho = to_double(value, line);
        else if (key == "epsilon") cfg.epsilon = to_double(value, line);
        else if (key == "nc") cfg.nc = to_double(value, line);
        else if (key == "n_slabs") cfg.n_slabs = static_cast<int>(to_u64(value, line));
        else if (key == "samples") cfg.samples = to_u64(value, line);
        else if (key == "seed") cfg.seed = to_u64(value, line);
        else if (key == "rel_tol") cfg.rel_tol = to_double(value, line);
        else if (key == "sweep_var") cfg.sweep_var = value;
        else if (key == "sweep_values") cfg.sweep_values = to_list(value, line);
        else if (key == "protocol") cfg.protocol = value;
        else if (key == "method") cfg.method = value;
        else if (key == "target_op") cfg.target_op = to_double(value, line);
        else if (key == "grid_x") cfg.grid_x = to_list(value, line);
        else if (key == "grid_y") cfg.grid_y = to_list(value, line);
        else fail(line, "unknown key '" + key + "'");
    }
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

int protocol_id(const std::string& name) {
    if (name == "dt") return RL_PROTOCOL_DT;
    if (name == "df") return RL_PROTOCOL_DF;
    if (name == "sdf") return RL_PROTOCOL_SDF;
    if (name == "cf") return RL_PROTOCOL_CF;
    return -1;
}

int method_id(const std::string& name) {
    if (name == "analytic") return RL_METHOD_ANALYTIC;
    if (name == "bound") return RL_METHOD_BOUND;
    if (name == "montecarlo") return RL_METHOD_MONTECARLO;
    return -1;
}

int default_method_id(int protocol) {
    return (protocol == RL_PROTOCOL_SDF || protocol == RL_PROTOCOL_CF) ? RL_METHOD_BOUND
                                                                       : RL_METHOD_ANALYTIC;
}

std::string sweep_kind_label(int protocol, int method) {
    const char* proto = protocol == RL_PROTOCOL_DT    ? "dt"
                        : protocol == RL_PROTOCOL_DF  ? "df"
                        : protocol == RL_PROTOCOL_SDF ? "sdf"
                                                      : "cf";
    if (method == RL_METHOD_MONTECARLO) return std::string(proto) + "_mc";
    if (protocol == RL_PROTOCOL_DT) return "dt";
    if (protocol == RL_PROTOCOL_DF)
        return method == RL_METHOD_BOUND ? "df_upper" : "df_exact";
    if (protocol == RL_PROTOCOL_SDF) return "sdf_lower";
    return "cf_upper";
}

const char* prefmap_winner(double op_df, double op_cf, double ci_cf) {
    if (op_df < op_cf - ci_cf) return "df";
    if (op_cf < op_df - ci_cf) return "cf";
    return "tie";
}

std::pair<double, double> parse_pair(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos)
        throw std::runtime_error("expected 'a,b', got '" + text + "'");
    return {to_double(trim(text.substr(0, comma)), 0), to_double(trim(text.substr(comma + 1)), 0)};
}

}  // namespace rlcli
