#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relaylab.h"

namespace rlcli {

// Flat key=value configuration ('#' starts a comment, blank lines ignored).
// Unknown keys are rejected so typos fail loudly.
struct Config {
    double alpha = 4.0;
    double lambda = 1e-4;
    double D = 10.0;
    double relay_x = 5.0;
    double relay_y = 0.0;
    double rate = 0.5;
    double rho = 0.0;
    double epsilon = 0.5;
    double nc = 1.0;
    int n_slabs = 64;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
    double rel_tol = 1e-7;
    std::string sweep_var;               // lambda | rho | rate | epsilon | nc
    std::vector<double> sweep_values;    // comma-separated in the file
    std::string protocol = "df";         // dt | df | sdf | cf
    std::string method;                  // empty = per-protocol default
    double target_op = 0.05;
    std::vector<double> grid_x;          // prefmap relay-position grid
    std::vector<double> grid_y;
};

// Both throw std::runtime_error with a line-qualified message on bad input.
Config parse_config_text(const std::string& text);
Config load_config(const std::string& path);

// Shortest representation that round-trips through double, C locale.
std::string format_double(double v);

// RL_PROTOCOL_* / RL_METHOD_* id for a name; -1 if unknown.
int protocol_id(const std::string& name);
int method_id(const std::string& name);
int default_method_id(int protocol);

// Row label for sweep output, e.g. ("df", analytic) -> "df_exact".
std::string sweep_kind_label(int protocol, int method);

// Decision rule for the preference map: the analytic DF value wins or loses
// only when it clears the Monte Carlo confidence half-width; overlaps tie.
const char* prefmap_winner(double op_df, double op_cf, double ci_cf);

// Splits "a,b" into two doubles; throws std::runtime_error on anything else.
std::pair<double, double> parse_pair(const std::string& text);

}  // namespace rlcli
