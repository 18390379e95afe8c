#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lobsim/io.hpp"

namespace {

// Every RunConfig key doubles as a long option, so the command line can
// override anything a config file sets.
const std::vector<std::string> kConfigKeys = {
    "alpha",   "s_lower",       "a_upper",         "gamma",  "delta",       "epsilon",
    "pi_shape", "start_b",      "start_a",         "steps",  "n_traj",      "seed",
    "max_len", "max_block_len", "h_occupancy_max", "word",   "proposition", "grid_n",
    "out_csv", "out_json"};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw lobsim::ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bid-ask quote dynamics: simulation, replay, and verification"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "key=value config file");

    std::vector<std::string> values(kConfigKeys.size());
    std::vector<CLI::Option*> options;
    options.reserve(kConfigKeys.size());
    for (std::size_t i = 0; i < kConfigKeys.size(); ++i)
        options.push_back(app.add_option("--" + kConfigKeys[i], values[i]));

    for (const char* name : {"simulate", "replay", "blocks", "capacity", "regions", "verify"})
        app.add_subcommand(name)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        lobsim::RunConfig cfg;
        if (!config_path.empty()) cfg = lobsim::parse_config(read_file(config_path));
        for (std::size_t i = 0; i < kConfigKeys.size(); ++i)
            if (options[i]->count() > 0) lobsim::set_config_key(cfg, kConfigKeys[i], values[i]);
        return lobsim::run_command(app.get_subcommands().at(0)->get_name(), cfg);
    } catch (const lobsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
