#pragma once

#include <cstdint>
#include <string>

#include "lobsim/sim.hpp"

namespace lobsim {

// Flat key=value run configuration with documented defaults. alpha keeps its
// textual form as well, so exact-arithmetic commands parse it as a rational.
struct RunConfig {
    double alpha = 0.5;
    std::string alpha_exact = "1/2";
    double s_lower = 1.0;
    double a_upper = 100.0;
    double gamma = 0.9;
    double delta = 1.0;
    double epsilon = 0.5;
    PiShape pi_shape = PiShape::AffineLog;

    double start_b = 10.0;
    double start_a = 12.0;
    long long steps = 1000;
    long long n_traj = 1;
    std::uint64_t seed = 1;

    std::size_t max_len = 10;        // enumeration word length cap
    std::size_t max_block_len = 16;  // reduction window
    double h_occupancy_max = 0.05;
    std::string word;                // comma-separated types for replay
    std::string proposition = "P4";
    long long grid_n = 8;

    std::string out_csv;   // empty writes to stdout
    std::string out_json;  // empty writes to stdout

    ParamsD params() const;
    QuoteD start() const { return {start_b, start_a}; }
};

// Assigns one documented key. Throws ConfigError on unknown keys or bad values.
void set_config_key(RunConfig& cfg, const std::string& key, const std::string& value);

// Parses key=value lines ('#' starts a comment). Errors carry the line number.
// The result is validated, including the MarketParams invariants.
RunConfig parse_config(const std::string& text);

// Comma-separated trader types, e.g. "BL,SM". Empty text is the empty word.
TypeSequence parse_word(const std::string& text);

std::string format_word(const TypeSequence& seq);

// Columns t,b,a,s,m,type,in_K,crashed; prices at 12 significant digits; ends
// with a newline. The type cell of the start row is "-".
std::string write_trajectory_csv(const Trajectory& traj);

std::string write_summary_json(const StabilitySummary& summary);
StabilitySummary parse_summary_json(const std::string& text);

// Dispatches one subcommand: simulate, replay, blocks, capacity, regions, or
// verify. Returns 0 on success, 1 when a verification assertion fails, 2 on
// configuration or I/O errors.
int run_command(const std::string& cmd, const RunConfig& cfg);

}  // namespace lobsim
