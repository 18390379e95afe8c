#include "lobsim/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace lobsim {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(value, &pos);
        if (pos != value.size() || !std::isfinite(x))
            throw ConfigError("bad value for " + key + ": '" + value + "'");
        return x;
    } catch (const std::logic_error&) {
        throw ConfigError("bad value for " + key + ": '" + value + "'");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(value, &pos);
        if (pos != value.size()) throw ConfigError("bad value for " + key + ": '" + value + "'");
        return x;
    } catch (const std::logic_error&) {
        throw ConfigError("bad value for " + key + ": '" + value + "'");
    }
}

std::uint64_t parse_seed(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(value, &pos);
        if (pos != value.size()) throw ConfigError("bad value for " + key + ": '" + value + "'");
        return x;
    } catch (const std::logic_error&) {
        throw ConfigError("bad value for " + key + ": '" + value + "'");
    }
}

std::string fmt_price(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("failed while writing '" + path + "'");
}

}  // namespace

ParamsD RunConfig::params() const {
    MarketParams<double> p =
        make_params(alpha, s_lower, a_upper, gamma, delta, epsilon, pi_shape);
    if (steps < 0) throw ConfigError("steps must be >= 0");
    if (n_traj < 0) throw ConfigError("n_traj must be >= 0");
    if (grid_n < 1) throw ConfigError("grid_n must be >= 1");
    if (max_block_len < 2) throw ConfigError("max_block_len must be >= 2");
    return p;
}

void set_config_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "alpha") {
        try {
            cfg.alpha = to_double(parse_rat(value));
        } catch (const std::invalid_argument&) {
            throw ConfigError("bad value for alpha: '" + value + "'");
        }
        cfg.alpha_exact = value;
    } else if (key == "s_lower") {
        cfg.s_lower = parse_double(key, value);
    } else if (key == "a_upper") {
        cfg.a_upper = parse_double(key, value);
    } else if (key == "gamma") {
        cfg.gamma = parse_double(key, value);
    } else if (key == "delta") {
        cfg.delta = parse_double(key, value);
    } else if (key == "epsilon") {
        cfg.epsilon = parse_double(key, value);
    } else if (key == "pi_shape") {
        cfg.pi_shape = pi_shape_from_name(value);
    } else if (key == "start_b") {
        cfg.start_b = parse_double(key, value);
    } else if (key == "start_a") {
        cfg.start_a = parse_double(key, value);
    } else if (key == "steps") {
        cfg.steps = parse_int(key, value);
    } else if (key == "n_traj") {
        cfg.n_traj = parse_int(key, value);
    } else if (key == "seed") {
        cfg.seed = parse_seed(key, value);
    } else if (key == "max_len") {
        cfg.max_len = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "max_block_len") {
        cfg.max_block_len = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "h_occupancy_max") {
        cfg.h_occupancy_max = parse_double(key, value);
    } else if (key == "word") {
        cfg.word = value;
    } else if (key == "proposition") {
        cfg.proposition = value;
    } else if (key == "grid_n") {
        cfg.grid_n = parse_int(key, value);
    } else if (key == "out_csv") {
        cfg.out_csv = value;
    } else if (key == "out_json") {
        cfg.out_json = value;
    } else {
        throw ConfigError("unknown key '" + key + "'");
    }
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            set_config_key(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    cfg.params();  // reject invalid combinations early
    return cfg;
}

TypeSequence parse_word(const std::string& text) {
    TypeSequence seq;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            seq.push_back(type_from_name(item));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    return seq;
}

std::string format_word(const TypeSequence& seq) {
    std::string out;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i) out += ',';
        out += type_name(seq[i]);
    }
    return out;
}

std::string write_trajectory_csv(const Trajectory& traj) {
    std::string out = "t,b,a,s,m,type,in_K,crashed\n";
    for (const TrajectoryStep& st : traj.steps) {
        const bool crashed = traj.crash && st.t == traj.crash->t;
        out += std::to_string(st.t);
        out += ',';
        out += fmt_price(st.q.b);
        out += ',';
        out += fmt_price(st.q.a);
        out += ',';
        out += fmt_price(spread(st.q));
        out += ',';
        out += fmt_price(mid_price(st.q));
        out += ',';
        out += st.type ? type_name(*st.type) : "-";
        out += ',';
        out += st.labels.in_K ? "true" : "false";
        out += ',';
        out += crashed ? "true" : "false";
        out += '\n';
    }
    return out;
}

std::string write_summary_json(const StabilitySummary& s) {
    nlohmann::json j;
    j["n_trajectories"] = s.n_trajectories;
    j["n_crashes"] = s.n_crashes;
    j["fraction_time_in_H"] = s.fraction_time_in_H;
    j["max_b"] = s.max_b;
    j["max_a"] = s.max_a;
    j["min_spread"] = s.min_spread;
    j["max_spread"] = s.max_spread;
    j["bound_violations"] = s.bound_violations;
    return j.dump(2) + "\n";
}

StabilitySummary parse_summary_json(const std::string& text) {
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        StabilitySummary s;
        s.n_trajectories = j.at("n_trajectories").get<long long>();
        s.n_crashes = j.at("n_crashes").get<long long>();
        s.fraction_time_in_H = j.at("fraction_time_in_H").get<double>();
        s.max_b = j.at("max_b").get<double>();
        s.max_a = j.at("max_a").get<double>();
        s.min_spread = j.at("min_spread").get<double>();
        s.max_spread = j.at("max_spread").get<double>();
        s.bound_violations = j.at("bound_violations").get<long long>();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad summary JSON: ") + e.what());
    }
}

namespace {

int cmd_simulate(const RunConfig& cfg, const ParamsD& p) {
    const StabilitySummary summary =
        monte_carlo(cfg.start(), cfg.steps, cfg.n_traj, p, cfg.seed);
    const Trajectory traj = simulate(cfg.start(), cfg.steps, p, substream_seed(cfg.seed, 0));
    write_output(cfg.out_csv, write_trajectory_csv(traj));
    write_output(cfg.out_json, write_summary_json(summary));
    return 0;
}

int cmd_replay(const RunConfig& cfg, const ParamsD& p) {
    const Trajectory traj = replay(cfg.start(), parse_word(cfg.word), p);
    write_output(cfg.out_csv, write_trajectory_csv(traj));
    return 0;
}

int cmd_blocks(const RunConfig& cfg, const ParamsD&) {
    const Rat alpha = parse_rat(cfg.alpha_exact);
    if (!(alpha > 0 && alpha < 1)) throw ConfigError("alpha must be in (0,1)");
    const auto blocks = enumerate_minimal_blocks(alpha, cfg.max_len);
    std::string out;
    for (const TypeSequence& b : blocks) out += format_word(b) + "\n";
    out += "total " + std::to_string(blocks.size()) + "\n";
    write_output(cfg.out_csv, out);
    return 0;
}

int cmd_capacity(const RunConfig& cfg, const ParamsD& p) {
    std::string out = "s,z,y\n";
    const long long n = cfg.grid_n;
    for (long long i = 0; i < n; ++i) {
        const double frac = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        const double s = p.s_lower * std::pow(p.a_upper / p.s_lower, frac);
        out += fmt_price(s);
        out += ',';
        out += std::to_string(limit_capacity(s, p));
        out += ',';
        out += std::to_string(market_capacity(s, p));
        out += '\n';
    }
    write_output(cfg.out_csv, out);
    return 0;
}

int cmd_regions(const RunConfig& cfg, const ParamsD& p) {
    std::string out = "b,a,in_WM,in_WL,in_WB,in_WS,in_H,in_K,in_U2,in_V2,pi_L,pi_B\n";
    const long long n = cfg.grid_n;
    const auto flag = [](bool x) { return x ? "true" : "false"; };
    for (long long i = 0; i < n; ++i) {
        const double b = (static_cast<double>(i) + 0.5) / static_cast<double>(n) *
                         (p.a_upper - p.s_lower);
        for (long long j = 0; j < n; ++j) {
            const double a = b + p.s_lower +
                             (static_cast<double>(j) + 0.5) / static_cast<double>(n) *
                                 (p.a_upper - b - p.s_lower);
            const QuoteD q{b, a};
            const RegionLabels lab = region_labels(q, p);
            out += fmt_price(b);
            out += ',';
            out += fmt_price(a);
            for (bool x : {lab.in_WM, lab.in_WL, lab.in_WB, lab.in_WS, lab.in_H, lab.in_K,
                           lab.in_U2, lab.in_V2}) {
                out += ',';
                out += flag(x);
            }
            out += ',';
            out += fmt_price(prob_limit(q, p));
            out += ',';
            out += fmt_price(prob_buy(q, p));
            out += '\n';
        }
    }
    write_output(cfg.out_csv, out);
    return 0;
}

int cmd_verify(const RunConfig& cfg, const ParamsD& p) {
    VerifyBudget budget;
    budget.steps = cfg.steps;
    budget.n_traj = cfg.n_traj;
    budget.master_seed = cfg.seed;
    budget.h_occupancy_max = cfg.h_occupancy_max;
    budget.max_block_len = cfg.max_block_len;
    budget.alpha_exact = cfg.alpha_exact;
    budget.start = cfg.start();
    const VerifyReport rep = verify_proposition(p, proposition_from_name(cfg.proposition), budget);

    std::string out = std::string(proposition_name(rep.which)) + ": " +
                      (rep.ran ? (rep.passed ? "PASS" : "FAIL") : "REFUSED") + "\n";
    for (const std::string& line : rep.notes) out += "  " + line + "\n";
    std::cout << out;
    if (!rep.ran) return 2;
    return rep.passed ? 0 : 1;
}

}  // namespace

int run_command(const std::string& cmd, const RunConfig& cfg) {
    try {
        const ParamsD p = cfg.params();
        if (cmd == "simulate") return cmd_simulate(cfg, p);
        if (cmd == "replay") return cmd_replay(cfg, p);
        if (cmd == "blocks") return cmd_blocks(cfg, p);
        if (cmd == "capacity") return cmd_capacity(cfg, p);
        if (cmd == "regions") return cmd_regions(cfg, p);
        if (cmd == "verify") return cmd_verify(cfg, p);
        throw ConfigError("unknown command '" + cmd + "'");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace lobsim
