#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lobsim/blocks.hpp"
#include "lobsim/domain.hpp"
#include "lobsim/regions.hpp"

namespace lobsim {

// Mixing function behind the per-trajectory substreams. Statelessly maps a
// 64-bit counter to a well-scrambled seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(master_seed + index);
}

// 53-bit uniform in [0,1). Drawn directly from the engine so the stream is
// identical on every platform.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct TrajectoryStep {
    long long t = 0;
    QuoteD q{};
    std::optional<TraderType> type;  // trade that produced this state; empty at t = 0
    RegionLabels labels{};
};

struct CrashInfo {
    long long t = 0;
    QuoteD q{};
};

struct Trajectory {
    std::vector<TrajectoryStep> steps;
    std::optional<CrashInfo> crash;
    std::uint64_t seed = 0;
};

// Applies an explicit word of types from start, halting at the first clipped
// trade. Throws std::domain_error when start is outside the domain.
Trajectory replay(const QuoteD& start, const TypeSequence& seq, const ParamsD& p);

struct ExactReplay {
    QuoteQ end{};
    std::optional<std::size_t> crash_index;  // word position of the clipped trade
};

ExactReplay replay_exact(const QuoteQ& start, const TypeSequence& seq,
                         const MarketParams<Rat>& p);

// Random trajectory: each period draws a type from type_distribution at the
// current quote (inverse CDF over BL, BM, SL, SM on one uniform per step).
Trajectory simulate(const QuoteD& start, long long steps, const ParamsD& p,
                    std::uint64_t seed);

struct StabilitySummary {
    long long n_trajectories = 0;
    long long n_crashes = 0;
    double fraction_time_in_H = 0;
    double max_b = 0;
    double max_a = 0;
    double min_spread = 0;
    double max_spread = 0;
    long long bound_violations = 0;

    friend bool operator==(const StabilitySummary&, const StabilitySummary&) = default;
};

// Runs n_traj independent trajectories on substreams substream_seed(master, i)
// and aggregates without retaining the paths. bound_violations counts states
// breaking a < r_m(K) + r_s(K)/2 + 2*s_lower or b < r_m(K) + 2*s_lower; it
// stays zero when the kernel is empty and those bounds are undefined.
StabilitySummary monte_carlo(const QuoteD& start, long long steps, long long n_traj,
                             const ParamsD& p, std::uint64_t master_seed);

struct Lattice {
    std::vector<QuoteQ> states;  // sorted by (b, a)
    bool truncated = false;
};

// Breadth-first closure of the four unclipped images, computed exactly so
// states revisited along different paths coincide.
Lattice reachable_lattice(const QuoteQ& start, const MarketParams<Rat>& p,
                          std::size_t max_states);

struct DerivedProcesses {
    std::vector<std::pair<long long, QuoteD>> even_states;  // quote at time 2t
    std::vector<double> eps;  // mid-price increments of the even-time subsequence
    std::vector<double> eta;  // one-step spread ratios s_{t+1}/s_t
};

// Even-time subsampling of a trajectory. Throws std::domain_error when the
// trajectory crashed, since the alignment is broken past the crash.
DerivedProcesses derived_processes(const Trajectory& traj, const ParamsD& p);

enum class Proposition { P1, P3, P4, P5, P6 };

const char* proposition_name(Proposition which);
Proposition proposition_from_name(const std::string& name);

struct VerifyBudget {
    long long steps = 100000;
    long long n_traj = 200;
    std::uint64_t master_seed = 1;
    double h_occupancy_max = 0.05;
    std::size_t max_block_len = 16;
    std::string alpha_exact;      // rational form of alpha for reducibility checks
    std::optional<QuoteD> start;  // defaults to an interior point of the kernel
};

struct VerifyReport {
    Proposition which = Proposition::P1;
    bool ran = false;     // false when the regime preconditions are unmet
    bool passed = false;
    std::vector<std::string> notes;
    StabilitySummary summary{};
};

// Checks one stability statement against simulation. Refuses to run (ran =
// false) when stability_preconditions does not place params in the regime the
// statement assumes, so a misconfigured run cannot pass vacuously.
VerifyReport verify_proposition(const ParamsD& p, Proposition which,
                                const VerifyBudget& budget);

}  // namespace lobsim
